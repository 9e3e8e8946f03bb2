#pragma once

#include "assembly/corpus/story.hpp"
#include "assembly/discordq/types.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

// The five reading-interface structures built from a story and its
// discord questions.
namespace assembly::interfaces {

enum class ViewKind { Annotated, Recomposed, Grid, Headlines, Article };

inline constexpr std::array<ViewKind, 5> kAllViewKinds = {
    ViewKind::Annotated, ViewKind::Recomposed, ViewKind::Grid, ViewKind::Headlines, ViewKind::Article,
};

std::string_view to_string(ViewKind kind);
// Throws InvalidRequest for unknown names.
ViewKind parse_view_kind(std::string_view name);

struct AnnotationAnswer {
    std::string source_domain;
    std::string span_text;
    std::string url;

    bool operator==(const AnnotationAnswer&) const = default;
};

struct Annotation {
    std::string question_id;
    std::string question_text;
    std::size_t anchor_paragraph = 0;
    std::size_t answer_count = 0; // total answers of the question, used for ordering
    std::vector<AnnotationAnswer> answers;
    bool collapsed_default = true;

    bool operator==(const Annotation&) const = default;
};

struct ParagraphBlock {
    std::size_t paragraph_index = 0;
    std::string text;

    bool operator==(const ParagraphBlock&) const = default;
};

using ArticleBlock = std::variant<ParagraphBlock, Annotation>;

// Shared by the Annotated Article and the News Article, which is the same
// structure without annotations.
struct ArticleView {
    std::string story_id;
    std::string basis_source;
    std::string headline;
    std::string byline;
    std::string url;
    std::vector<ArticleBlock> blocks;

    std::size_t annotation_count() const;

    bool operator==(const ArticleView&) const = default;
};

struct AnswerParagraph {
    std::string source_domain;
    std::size_t paragraph_index = 0;
    std::string paragraph_text;
    std::size_t bold_start = 0; // code points into paragraph_text
    std::size_t bold_end = 0;
    std::string url;
    int group_id = 0;

    bool operator==(const AnswerParagraph&) const = default;
};

struct QuestionUnit {
    std::string question_id;
    std::string question_text;
    std::size_t score = 0; // unseen answering paragraphs when selected
    std::vector<AnswerParagraph> primary_answers;
    std::vector<AnswerParagraph> carousel_answers;

    bool operator==(const QuestionUnit&) const = default;
};

struct RecomposedArticleView {
    std::string story_id;
    std::string story_title;
    std::vector<std::string> byline_sources;
    std::string byline;
    std::string intro_summary;
    std::vector<QuestionUnit> units;

    bool operator==(const RecomposedArticleView&) const = default;
};

struct GridRow {
    std::string question_id;
    std::string question_text;
    std::size_t answer_count = 0;

    bool operator==(const GridRow&) const = default;
};

struct GridColumn {
    std::string source_domain;
    std::size_t questions_answered = 0;
    std::string url;

    bool operator==(const GridColumn&) const = default;
};

struct GridCell {
    std::size_t row = 0;
    std::size_t col = 0;
    int group_id = 0;
    std::size_t style_index = 0;
    std::string span_text;
    std::string url;

    bool operator==(const GridCell&) const = default;
};

struct PaletteEntry {
    std::string_view color;
    std::string_view shape;
};

inline constexpr std::array<PaletteEntry, 8> kGridPalette = {{
    {"#1b9e77", "circle"},
    {"#d95f02", "square"},
    {"#7570b3", "triangle"},
    {"#e7298a", "diamond"},
    {"#66a61e", "star"},
    {"#e6ab02", "hexagon"},
    {"#a6761d", "cross"},
    {"#666666", "ring"},
}};

struct QuestionGridView {
    std::string story_id;
    std::vector<GridRow> rows;
    std::vector<GridColumn> cols;
    std::vector<GridCell> cells; // sorted by (row, col)

    bool operator==(const QuestionGridView&) const = default;
};

struct HeadlineEntry {
    std::string source_domain;
    std::string headline;
    std::string url;
    bool is_partial = false;

    bool operator==(const HeadlineEntry&) const = default;
};

struct HeadlineListView {
    std::string story_id;
    std::string story_title;
    std::vector<HeadlineEntry> entries;

    bool operator==(const HeadlineListView&) const = default;
};

// Number of discord questions with at least one answer in the article.
std::size_t annotation_count(const discordq::DiscordQuestionSet& set, std::string_view source_domain);

// Article with the most annotations; ties go to the longer article, then the
// smaller source_domain. Falls back to the median article when no article
// has an annotation. Throws NoFullArticle.
std::string select_basis(const corpus::Story& story, const discordq::DiscordQuestionSet& set);

ArticleView build_annotated(const corpus::Story& story, const discordq::DiscordQuestionSet& set);
ArticleView build_news_article(const corpus::Story& story);

// Summary closest to 60 words (earlier source on ties); otherwise the first
// 60 words of the fallback article (the median article when unset).
std::string select_summary(const corpus::Story& story, std::optional<std::string> fallback_source = std::nullopt);

struct Selection {
    std::size_t question = 0; // index into the input
    std::size_t score = 0;
};

// Greedy question sequencing: repeatedly take the question with the most
// answering (source, paragraph) pairs not yet seen; ties go to more answers,
// then smaller text, then smaller id. Stops when no question adds anything.
std::vector<Selection> compose_sequence(const std::vector<discordq::DiscordQuestion>& questions);

// Throws EmptyQuestionSet.
RecomposedArticleView compose_recomposed(const corpus::Story& story, const discordq::DiscordQuestionSet& set);

// Throws EmptyQuestionSet.
QuestionGridView build_grid(const corpus::Story& story, const discordq::DiscordQuestionSet& set);

HeadlineListView build_headline_list(const corpus::Story& story);

} // namespace assembly::interfaces
