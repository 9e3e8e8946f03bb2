#pragma once

#include "assembly/discordq/pipeline.hpp"
#include "assembly/json.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

// External stage implementations speaking line-delimited JSON, either as a
// subprocess (request on stdin, response on stdout) or as an HTTP endpoint
// (request as the POST body, response as the reply body).
//
//   generate     request: article record       response: one question record per line
//   answer       request: article record, then one question record per line
//                response: one span record or null per question, in order
//   consolidate  request: one span record per line
//                response: one group record per line
namespace assembly::discordq {

struct ExternalStage {
    std::vector<std::string> command; // argv; used when non-empty
    std::string url;                  // http:// or https:// endpoint otherwise
    int timeout_seconds = 120;        // HTTP only
};

struct AdapterConfig {
    std::optional<ExternalStage> generate;
    std::optional<ExternalStage> answer;
    std::optional<ExternalStage> consolidate;
};

// Reads {"generate": {"command": [...]}, "answer": {"url": "..."}, ...}.
AdapterConfig adapter_config_from_json(const Json& value);

StageAdapters make_stage_adapters(const AdapterConfig& config);

// Sends `lines` to the stage and returns the non-empty response lines.
// Transport problems and non-zero exits raise StageFailure for `stage`.
std::vector<std::string> call_external(const ExternalStage& stage, std::string_view stageName,
                                       const std::vector<std::string>& lines);

} // namespace assembly::discordq
