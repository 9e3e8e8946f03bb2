#pragma once

#include "assembly/corpus/story.hpp"
#include "assembly/discordq/types.hpp"
#include "assembly/json.hpp"

#include <filesystem>
#include <string>

// JSON records of the question-set file and of the stage-adapter protocol.
namespace assembly::discordq {

Json to_json(const CandidateQuestion& question);
Json to_json(const AnswerSpan& span);
Json to_json(const AnswerGroup& group);
Json to_json(const PipelineStats& stats);
Json to_json(const DiscordQuestionSet& set);

// All throw SchemaError. origin_source/origin_paragraph are optional on
// questions read from files written by other tools.
CandidateQuestion candidate_from_json(const Json& value);
AnswerSpan span_from_json(const Json& value);
AnswerGroup group_from_json(const Json& value);
DiscordQuestionSet question_set_from_json(const Json& value);

std::string serialize_question_set(const DiscordQuestionSet& set);
DiscordQuestionSet load_question_set(const std::filesystem::path& path);
void save_question_set(const DiscordQuestionSet& set, const std::filesystem::path& path);

// SchemaError unless the set belongs to the story and every span is a valid
// substring of the named article.
void check_against_story(const DiscordQuestionSet& set, const corpus::Story& story);

// Overrides read from a config object; unknown keys are ignored, wrongly
// typed or out-of-range values throw SchemaError.
PipelineConfig pipeline_config_from_json(const Json& value);
Json to_json(const PipelineConfig& config);

} // namespace assembly::discordq
