#pragma once

#include "assembly/corpus/story.hpp"
#include "assembly/discordq/filters.hpp"
#include "assembly/discordq/types.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace assembly::discordq {

// Replacements for the baseline stages. An empty function means "use the
// baseline". Outputs are checked and a malformed one raises StageFailure.
struct StageAdapters {
    using Generate = std::function<std::vector<CandidateQuestion>(const corpus::SourceArticle&)>;
    // One entry per question, in question order.
    using Answer = std::function<std::vector<std::optional<AnswerSpan>>(const corpus::SourceArticle&,
                                                                       const std::vector<CandidateQuestion>&)>;
    using Consolidate = std::function<std::vector<AnswerGroup>(const std::vector<AnswerSpan>&)>;

    Generate generate;
    Answer answer;
    Consolidate consolidate;
};

// Empty when the span is consistent with the article, otherwise a
// description of the problem.
std::string span_problem(const AnswerSpan& span, const corpus::SourceArticle& article);

// generate -> answer every unique candidate against every story article ->
// consolidate -> qualify -> deduplicate. Reference stories sharing the
// story's id are ignored.
DiscordQuestionSet run_pipeline(const corpus::Story& story, const ReferenceCorpus& references,
                                const PipelineConfig& config, const StageAdapters& adapters = {});

DiscordQuestionSet run_pipeline(const corpus::Story& story, const std::vector<corpus::Story>& reference_stories,
                                const PipelineConfig& config, const StageAdapters& adapters = {});

} // namespace assembly::discordq
