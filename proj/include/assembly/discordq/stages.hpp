#pragma once

#include "assembly/corpus/story.hpp"
#include "assembly/discordq/types.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

// Deterministic lexical baselines for the three pipeline stages.
namespace assembly::discordq {

// Template questions per sentence: a Who/What question over the subject, a
// Why question when the sentence carries a causal cue ("because", "due to"),
// and a How much/How many question around the first quantity. At most three
// per sentence. Partial articles yield nothing.
std::vector<CandidateQuestion> generate_questions_baseline(const corpus::SourceArticle& article);

// Sentence-level template output, exposed for testing.
std::vector<std::string> question_templates(std::string_view sentence);

// Term sets of one article, computed once and reused for every question.
class PreparedArticle {
public:
    explicit PreparedArticle(const corpus::SourceArticle& article);

    const corpus::SourceArticle& article() const noexcept { return *Article; }

private:
    friend std::optional<AnswerSpan> answer_prepared(const std::vector<std::string>& questionTerms,
                                                     const PreparedArticle& article,
                                                     const PipelineConfig& config);

    struct Sentence {
        std::size_t char_start = 0;
        std::size_t char_end = 0;
        std::vector<std::string> terms;
    };
    struct Paragraph {
        std::vector<std::string> terms;
        std::vector<Sentence> sentences;
    };

    const corpus::SourceArticle* Article;
    std::vector<Paragraph> Paragraphs;
};

// Content terms of a question: stopwords and wh-words removed.
std::vector<std::string> question_terms(const CandidateQuestion& question);

// Scores every paragraph by Jaccard overlap with the question's content
// terms. When the best score reaches config.qa_overlap_threshold (earliest
// paragraph on ties) the best-overlapping sentence of that paragraph is the
// answer.
std::optional<AnswerSpan> answer_question_baseline(const CandidateQuestion& question,
                                                   const corpus::SourceArticle& article,
                                                   const PipelineConfig& config);

std::optional<AnswerSpan> answer_prepared(const std::vector<std::string>& questionTerms,
                                          const PreparedArticle& article,
                                          const PipelineConfig& config);

// Single-link clustering of spans: two spans link when the Jaccard similarity
// of their normalized tokens reaches config.consolidation_similarity_threshold.
// Groups are ordered by size (descending), then by position of their first
// member in the input; group_id is the resulting index.
std::vector<AnswerGroup> consolidate(const std::vector<AnswerSpan>& answers, const PipelineConfig& config);

} // namespace assembly::discordq
