#include "assembly/discordq/filters.hpp"

#include "assembly/error.hpp"

#include <algorithm>
#include <cmath>

namespace assembly::discordq {

std::string_view to_string(RejectionReason reason) {
    switch (reason) {
    case RejectionReason::Coverage:
        return "coverage";
    case RejectionReason::Diversity:
        return "diversity";
    case RejectionReason::Specificity:
        return "specificity";
    }
    return "unknown";
}

std::size_t coverage_threshold(std::size_t sourceCount, const PipelineConfig& config) {
    return static_cast<std::size_t>(
        std::ceil(config.coverage_fraction * static_cast<double>(sourceCount) - kFractionEpsilon));
}

Verdict qualify(const CandidateQuestion& question, const std::vector<AnswerGroup>& groups,
                std::size_t story_source_count, double foreign_answer_rate, const PipelineConfig& config) {
    if (story_source_count < config.min_sources) {
        throw TooFewSources("story has " + std::to_string(story_source_count) + " sources, at least "
                            + std::to_string(config.min_sources) + " required");
    }
    DiscordQuestion answered{question, groups};
    const std::size_t sources = answered.answering_sources().size();
    if (sources == 0 || sources < coverage_threshold(story_source_count, config)) {
        return Verdict::reject(RejectionReason::Coverage);
    }
    const double total = static_cast<double>(answered.answer_count());
    const double largest = static_cast<double>(answered.largest_group_size());
    if (largest > config.diversity_max_group_fraction * total + kFractionEpsilon) {
        return Verdict::reject(RejectionReason::Diversity);
    }
    if (foreign_answer_rate > config.specificity_max_foreign_rate + kFractionEpsilon) {
        return Verdict::reject(RejectionReason::Specificity);
    }
    return Verdict::accept();
}

ReferenceCorpus::ReferenceCorpus(std::vector<corpus::Story> stories)
    : Stories(std::move(stories))
{
    for (std::size_t s = 0; s < Stories.size(); ++s) {
        for (const auto& article : Stories[s].articles()) {
            if (!article.is_partial()) {
                Prepared.emplace_back(s, PreparedArticle(article));
            }
        }
    }
}

ForeignRate ReferenceCorpus::rate(const std::vector<std::string>& questionTerms, std::string_view excludeStoryId,
                                  const PipelineConfig& config) const {
    std::size_t considered = 0;
    std::size_t answered = 0;
    for (const auto& [storyIndex, article] : Prepared) {
        if (Stories[storyIndex].story_id() == excludeStoryId) {
            continue;
        }
        ++considered;
        if (answer_prepared(questionTerms, article, config)) {
            ++answered;
        }
    }
    if (considered == 0) {
        return {0.0, true};
    }
    return {static_cast<double>(answered) / static_cast<double>(considered), false};
}

std::size_t ReferenceCorpus::article_count(std::string_view excludeStoryId) const {
    return static_cast<std::size_t>(std::count_if(Prepared.begin(), Prepared.end(), [&](const auto& entry) {
        return Stories[entry.first].story_id() != excludeStoryId;
    }));
}

ForeignRate foreign_answer_rate(const CandidateQuestion& question, const std::vector<corpus::Story>& reference_stories,
                                const PipelineConfig& config) {
    const ReferenceCorpus references(reference_stories);
    return references.rate(question_terms(question), {}, config);
}

double answer_overlap(const DiscordQuestion& a, const DiscordQuestion& b) {
    const auto pa = a.answering_paragraphs();
    const auto pb = b.answering_paragraphs();
    const std::size_t smaller = std::min(pa.size(), pb.size());
    if (smaller == 0) {
        return 0.0;
    }
    std::size_t common = 0;
    for (const auto& ref : pa) {
        common += pb.count(ref);
    }
    return static_cast<double>(common) / static_cast<double>(smaller);
}

bool dedup_precedes(const DiscordQuestion& a, const DiscordQuestion& b) {
    const std::size_t ca = a.answer_count();
    const std::size_t cb = b.answer_count();
    if (ca != cb) {
        return ca > cb;
    }
    if (a.question.text != b.question.text) {
        return a.question.text < b.question.text;
    }
    return a.question.question_id < b.question.question_id;
}

std::vector<DiscordQuestion> deduplicate(std::vector<DiscordQuestion> questions, const PipelineConfig& config) {
    std::stable_sort(questions.begin(), questions.end(), dedup_precedes);
    std::vector<DiscordQuestion> kept;
    for (auto& question : questions) {
        const bool redundant = std::any_of(kept.begin(), kept.end(), [&](const DiscordQuestion& other) {
            return answer_overlap(question, other) > config.dedup_overlap_threshold + kFractionEpsilon;
        });
        if (!redundant) {
            kept.push_back(std::move(question));
        }
    }
    return kept;
}

} // namespace assembly::discordq
