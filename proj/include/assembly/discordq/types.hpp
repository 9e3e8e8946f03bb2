#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace assembly::discordq {

struct CandidateQuestion {
    std::string question_id;
    std::string text;
    std::string origin_source;
    std::size_t origin_paragraph = 0;

    bool operator==(const CandidateQuestion&) const = default;
};

// Offsets are code-point offsets into paragraphs[paragraph_index] of the
// source article; span_text is exactly that substring.
struct AnswerSpan {
    std::string source_domain;
    std::size_t paragraph_index = 0;
    std::size_t char_start = 0;
    std::size_t char_end = 0;
    std::string span_text;

    bool operator==(const AnswerSpan&) const = default;
};

struct AnswerGroup {
    int group_id = 0;
    std::vector<AnswerSpan> members;
    std::string label;

    bool operator==(const AnswerGroup&) const = default;
};

// (source_domain, paragraph_index)
using ParagraphRef = std::pair<std::string, std::size_t>;

struct DiscordQuestion {
    CandidateQuestion question;
    std::vector<AnswerGroup> groups;

    std::set<std::string> answering_sources() const;
    std::set<ParagraphRef> answering_paragraphs() const;
    std::size_t answer_count() const;
    std::size_t largest_group_size() const;

    bool operator==(const DiscordQuestion&) const = default;
};

struct RejectionCounts {
    std::size_t coverage = 0;
    std::size_t diversity = 0;
    std::size_t specificity = 0;

    bool operator==(const RejectionCounts&) const = default;
};

struct PipelineStats {
    std::size_t source_count = 0;
    std::size_t candidates_generated = 0;
    std::size_t candidates_unique = 0;
    std::size_t answered = 0;
    std::size_t qualified = 0;
    std::size_t deduplicated = 0;
    RejectionCounts rejected;
    std::size_t reference_articles = 0;
    bool reference_warning = false;
    std::string stopwords_version;

    bool operator==(const PipelineStats&) const = default;
};

struct DiscordQuestionSet {
    std::string story_id;
    std::vector<DiscordQuestion> questions;
    PipelineStats pipeline_stats;

    bool operator==(const DiscordQuestionSet&) const = default;
};

struct PipelineConfig {
    double coverage_fraction = 0.30;
    double diversity_max_group_fraction = 0.50;
    double dedup_overlap_threshold = 0.80;
    double qa_overlap_threshold = 0.50;
    double consolidation_similarity_threshold = 0.40;
    double specificity_max_foreign_rate = 0.05;
    std::size_t min_sources = 10;

    // Throws SchemaError when a fraction is outside (0, 1] or min_sources is 0.
    void validate() const;
};

// Slack used when comparing fractions so that e.g. 0.3 * 10 counts as 3.
inline constexpr double kFractionEpsilon = 1e-9;

} // namespace assembly::discordq
