#pragma once

#include "assembly/corpus/story.hpp"
#include "assembly/discordq/stages.hpp"
#include "assembly/discordq/types.hpp"

#include <optional>
#include <string_view>
#include <vector>

// Qualification criteria and deduplication over answered candidates.
namespace assembly::discordq {

enum class RejectionReason { Coverage, Diversity, Specificity };

std::string_view to_string(RejectionReason reason);

struct Verdict {
    bool accepted = true;
    std::optional<RejectionReason> reason;

    static Verdict accept() { return {}; }
    static Verdict reject(RejectionReason r) { return {false, r}; }

    bool operator==(const Verdict&) const = default;
};

// Minimum number of distinct answering sources for a story of `sourceCount`.
std::size_t coverage_threshold(std::size_t sourceCount, const PipelineConfig& config);

// Checks coverage, then diversity, then specificity and reports the first
// failure. Throws TooFewSources when story_source_count < config.min_sources.
Verdict qualify(const CandidateQuestion& question, const std::vector<AnswerGroup>& groups,
                std::size_t story_source_count, double foreign_answer_rate, const PipelineConfig& config);

struct ForeignRate {
    double rate = 0.0;
    // Set when there was no reference article to test against.
    bool empty_reference = false;
};

// Share of non-partial reference articles that answer the question.
ForeignRate foreign_answer_rate(const CandidateQuestion& question, const std::vector<corpus::Story>& reference_stories,
                                const PipelineConfig& config);

// Reference articles prepared once and shared by every question of a batch.
// Holds its own copy of the stories.
class ReferenceCorpus {
public:
    explicit ReferenceCorpus(std::vector<corpus::Story> stories);
    ReferenceCorpus(const ReferenceCorpus&) = delete;
    ReferenceCorpus& operator=(const ReferenceCorpus&) = delete;

    // Articles of the story with id `excludeStoryId` are skipped.
    ForeignRate rate(const std::vector<std::string>& questionTerms, std::string_view excludeStoryId,
                     const PipelineConfig& config) const;

    std::size_t article_count(std::string_view excludeStoryId) const;

private:
    std::vector<corpus::Story> Stories;
    std::vector<std::pair<std::size_t, PreparedArticle>> Prepared; // (story index, article)
};

// |P(a) & P(b)| / min(|P(a)|, |P(b)|) over answering (source, paragraph)
// pairs; 0 when either side is empty.
double answer_overlap(const DiscordQuestion& a, const DiscordQuestion& b);

// Greedy deduplication: questions are visited by descending answer count
// (ties by ascending text, then id) and kept when their overlap with every
// kept question is at most config.dedup_overlap_threshold. Output is in
// visiting order.
std::vector<DiscordQuestion> deduplicate(std::vector<DiscordQuestion> questions, const PipelineConfig& config);

// Visiting order used by deduplicate.
bool dedup_precedes(const DiscordQuestion& a, const DiscordQuestion& b);

} // namespace assembly::discordq
