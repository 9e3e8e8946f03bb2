#include "assembly/discordq/types.hpp"

#include "assembly/error.hpp"

#include <algorithm>

namespace assembly::discordq {

std::set<std::string> DiscordQuestion::answering_sources() const {
    std::set<std::string> sources;
    for (const auto& group : groups) {
        for (const auto& member : group.members) {
            sources.insert(member.source_domain);
        }
    }
    return sources;
}

std::set<ParagraphRef> DiscordQuestion::answering_paragraphs() const {
    std::set<ParagraphRef> paragraphs;
    for (const auto& group : groups) {
        for (const auto& member : group.members) {
            paragraphs.emplace(member.source_domain, member.paragraph_index);
        }
    }
    return paragraphs;
}

std::size_t DiscordQuestion::answer_count() const {
    std::size_t count = 0;
    for (const auto& group : groups) {
        count += group.members.size();
    }
    return count;
}

std::size_t DiscordQuestion::largest_group_size() const {
    std::size_t largest = 0;
    for (const auto& group : groups) {
        largest = std::max(largest, group.members.size());
    }
    return largest;
}

void PipelineConfig::validate() const {
    const std::pair<const char*, double> fractions[] = {
        {"coverage_fraction", coverage_fraction},
        {"diversity_max_group_fraction", diversity_max_group_fraction},
        {"dedup_overlap_threshold", dedup_overlap_threshold},
        {"qa_overlap_threshold", qa_overlap_threshold},
        {"consolidation_similarity_threshold", consolidation_similarity_threshold},
        {"specificity_max_foreign_rate", specificity_max_foreign_rate},
    };
    for (const auto& [name, value] : fractions) {
        if (!(value > 0.0 && value <= 1.0)) {
            throw SchemaError(std::string("pipeline config: ") + name + " must lie in (0, 1]");
        }
    }
    if (min_sources < 1) {
        throw SchemaError("pipeline config: min_sources must be at least 1");
    }
}

} // namespace assembly::discordq
