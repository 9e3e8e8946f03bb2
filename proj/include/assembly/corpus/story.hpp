#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace assembly::corpus {

// Number of whitespace-separated tokens.
std::size_t count_words(std::string_view text);

// Splits plain text on blank-line boundaries. Segments are trimmed and empty
// segments are dropped.
std::vector<std::string> paragraph_split(std::string_view body);

// RFC 3339 timestamp kept verbatim so that files round-trip bit-exactly.
class Timestamp {
public:
    static Timestamp parse(std::string_view text);

    const std::string& text() const noexcept { return Text; }

    bool operator==(const Timestamp&) const = default;

private:
    explicit Timestamp(std::string text) : Text(std::move(text)) {}

    std::string Text;
};

class SourceArticle {
public:
    struct Fields {
        std::string source_domain;
        std::string url;
        std::string headline;
        std::optional<std::string> summary;
        std::vector<std::string> paragraphs;
        bool is_partial = false;
    };

    // Validates the article invariants; throws SchemaError.
    static SourceArticle create(Fields fields);

    const std::string& source_domain() const noexcept { return Data.source_domain; }
    const std::string& url() const noexcept { return Data.url; }
    const std::string& headline() const noexcept { return Data.headline; }
    const std::optional<std::string>& summary() const noexcept { return Data.summary; }
    const std::vector<std::string>& paragraphs() const noexcept { return Data.paragraphs; }
    std::size_t word_count() const noexcept { return WordCount; }
    bool is_partial() const noexcept { return Data.is_partial; }

    bool operator==(const SourceArticle& other) const;

private:
    explicit SourceArticle(Fields fields);

    Fields Data;
    std::size_t WordCount = 0;
};

class Story {
public:
    // Validates uniqueness of source domains; throws SchemaError.
    static Story create(std::string story_id, std::string title, Timestamp retrieved_at,
                        std::vector<SourceArticle> articles);

    const std::string& story_id() const noexcept { return Id; }
    const std::string& title() const noexcept { return Title; }
    const Timestamp& retrieved_at() const noexcept { return RetrievedAt; }
    // Aggregator listing order.
    const std::vector<SourceArticle>& articles() const noexcept { return Articles; }

    std::optional<std::size_t> index_of(std::string_view source_domain) const;
    const SourceArticle* find(std::string_view source_domain) const;
    std::size_t full_article_count() const;

    bool operator==(const Story& other) const;

private:
    Story(std::string story_id, std::string title, Timestamp retrieved_at,
          std::vector<SourceArticle> articles);

    std::string Id;
    std::string Title;
    Timestamp RetrievedAt;
    std::vector<SourceArticle> Articles;
};

// Lower median by word count among non-partial articles; ties keep story
// order. Returns the source domain. Throws NoFullArticle.
std::string median_article(const Story& story);

} // namespace assembly::corpus
