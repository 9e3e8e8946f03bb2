#include "assembly/corpus/story.hpp"

#include "assembly/error.hpp"

#include <algorithm>
#include <cctype>
#include <regex>
#include <unordered_set>

namespace assembly::corpus {

namespace {

bool is_space(char c) {
    return std::isspace(static_cast<unsigned char>(c)) != 0;
}

std::string_view trim(std::string_view text) {
    while (!text.empty() && is_space(text.front())) {
        text.remove_prefix(1);
    }
    while (!text.empty() && is_space(text.back())) {
        text.remove_suffix(1);
    }
    return text;
}

bool is_blank_line(std::string_view line) {
    return std::all_of(line.begin(), line.end(), is_space);
}

} // namespace

std::size_t count_words(std::string_view text) {
    std::size_t count = 0;
    bool inWord = false;
    for (char c : text) {
        if (is_space(c)) {
            inWord = false;
        } else if (!inWord) {
            inWord = true;
            ++count;
        }
    }
    return count;
}

std::vector<std::string> paragraph_split(std::string_view body) {
    std::vector<std::string> paragraphs;
    std::string current;
    auto flush = [&]() {
        const std::string_view trimmed = trim(current);
        if (!trimmed.empty()) {
            paragraphs.emplace_back(trimmed);
        }
        current.clear();
    };

    std::size_t pos = 0;
    while (pos <= body.size()) {
        const std::size_t eol = body.find('\n', pos);
        const std::size_t end = eol == std::string_view::npos ? body.size() : eol;
        std::string_view line = body.substr(pos, end - pos);
        if (is_blank_line(line)) {
            flush();
        } else {
            if (!current.empty()) {
                current += '\n';
            }
            current.append(line);
        }
        if (eol == std::string_view::npos) {
            break;
        }
        pos = eol + 1;
    }
    flush();
    return paragraphs;
}

Timestamp Timestamp::parse(std::string_view text) {
    static const std::regex kRfc3339(
        R"(^\d{4}-\d{2}-\d{2}[Tt ]\d{2}:\d{2}:\d{2}(\.\d+)?([Zz]|[+-]\d{2}:\d{2})$)");
    std::string value(text);
    if (!std::regex_match(value, kRfc3339)) {
        throw SchemaError("retrieved_at is not an RFC 3339 timestamp: '" + value + "'");
    }
    return Timestamp(std::move(value));
}

SourceArticle::SourceArticle(Fields fields)
    : Data(std::move(fields))
{
    for (const auto& paragraph : Data.paragraphs) {
        WordCount += count_words(paragraph);
    }
}

SourceArticle SourceArticle::create(Fields fields) {
    if (fields.source_domain.empty()) {
        throw SchemaError("article has an empty source_domain");
    }
    if (fields.url.empty()) {
        throw SchemaError("article '" + fields.source_domain + "' has an empty url");
    }
    if (trim(fields.headline).empty()) {
        throw SchemaError("article '" + fields.source_domain + "' lacks a headline");
    }
    if (fields.is_partial && !fields.paragraphs.empty()) {
        throw SchemaError("partial article '" + fields.source_domain + "' carries paragraphs");
    }
    for (const auto& paragraph : fields.paragraphs) {
        if (trim(paragraph).empty()) {
            throw SchemaError("article '" + fields.source_domain + "' has an empty paragraph");
        }
    }
    return SourceArticle(std::move(fields));
}

bool SourceArticle::operator==(const SourceArticle& other) const {
    return Data.source_domain == other.Data.source_domain && Data.url == other.Data.url
        && Data.headline == other.Data.headline && Data.summary == other.Data.summary
        && Data.paragraphs == other.Data.paragraphs && Data.is_partial == other.Data.is_partial;
}

Story::Story(std::string story_id, std::string title, Timestamp retrieved_at,
             std::vector<SourceArticle> articles)
    : Id(std::move(story_id))
    , Title(std::move(title))
    , RetrievedAt(std::move(retrieved_at))
    , Articles(std::move(articles))
{}

Story Story::create(std::string story_id, std::string title, Timestamp retrieved_at,
                    std::vector<SourceArticle> articles) {
    if (story_id.empty()) {
        throw SchemaError("story has an empty story_id");
    }
    std::unordered_set<std::string> seen;
    for (const auto& article : articles) {
        if (!seen.insert(article.source_domain()).second) {
            throw SchemaError("duplicate source_domain '" + article.source_domain() + "' in story '"
                              + story_id + "'");
        }
    }
    return Story(std::move(story_id), std::move(title), std::move(retrieved_at), std::move(articles));
}

std::optional<std::size_t> Story::index_of(std::string_view source_domain) const {
    for (std::size_t i = 0; i < Articles.size(); ++i) {
        if (Articles[i].source_domain() == source_domain) {
            return i;
        }
    }
    return std::nullopt;
}

const SourceArticle* Story::find(std::string_view source_domain) const {
    const auto index = index_of(source_domain);
    return index ? &Articles[*index] : nullptr;
}

std::size_t Story::full_article_count() const {
    return static_cast<std::size_t>(std::count_if(
        Articles.begin(), Articles.end(), [](const SourceArticle& a) { return !a.is_partial(); }));
}

bool Story::operator==(const Story& other) const {
    return Id == other.Id && Title == other.Title && RetrievedAt == other.RetrievedAt
        && Articles == other.Articles;
}

std::string median_article(const Story& story) {
    std::vector<const SourceArticle*> full;
    for (const auto& article : story.articles()) {
        if (!article.is_partial()) {
            full.push_back(&article);
        }
    }
    if (full.empty()) {
        throw NoFullArticle("story '" + story.story_id() + "' has no full article");
    }
    std::stable_sort(full.begin(), full.end(), [](const SourceArticle* a, const SourceArticle* b) {
        return a->word_count() < b->word_count();
    });
    return full[(full.size() - 1) / 2]->source_domain();
}

} // namespace assembly::corpus
