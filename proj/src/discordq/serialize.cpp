#include "assembly/discordq/serialize.hpp"

#include "assembly/corpus/story_io.hpp"
#include "assembly/discordq/pipeline.hpp"
#include "assembly/error.hpp"
#include "assembly/json_fields.hpp"

namespace assembly::discordq {

using namespace json_fields;

Json to_json(const CandidateQuestion& question) {
    Json value;
    value["question_id"] = question.question_id;
    value["text"] = question.text;
    value["origin_source"] = question.origin_source;
    value["origin_paragraph"] = question.origin_paragraph;
    return value;
}

Json to_json(const AnswerSpan& span) {
    Json value;
    value["source_domain"] = span.source_domain;
    value["paragraph_index"] = span.paragraph_index;
    value["char_start"] = span.char_start;
    value["char_end"] = span.char_end;
    value["span_text"] = span.span_text;
    return value;
}

Json to_json(const AnswerGroup& group) {
    Json value;
    value["group_id"] = group.group_id;
    value["label"] = group.label;
    Json members = Json::array();
    for (const auto& member : group.members) {
        members.push_back(to_json(member));
    }
    value["members"] = std::move(members);
    return value;
}

Json to_json(const PipelineStats& stats) {
    Json value;
    value["source_count"] = stats.source_count;
    value["candidates_generated"] = stats.candidates_generated;
    value["candidates_unique"] = stats.candidates_unique;
    value["answered"] = stats.answered;
    value["qualified"] = stats.qualified;
    value["deduplicated"] = stats.deduplicated;
    value["rejected"] = {{"coverage", stats.rejected.coverage},
                         {"diversity", stats.rejected.diversity},
                         {"specificity", stats.rejected.specificity}};
    value["reference_articles"] = stats.reference_articles;
    value["reference_warning"] = stats.reference_warning;
    value["stopwords_version"] = stats.stopwords_version;
    return value;
}

Json to_json(const DiscordQuestionSet& set) {
    Json value;
    value["story_id"] = set.story_id;
    value["pipeline_stats"] = to_json(set.pipeline_stats);
    Json questions = Json::array();
    for (const auto& question : set.questions) {
        Json entry = to_json(question.question);
        Json groups = Json::array();
        for (const auto& group : question.groups) {
            groups.push_back(to_json(group));
        }
        entry["groups"] = std::move(groups);
        questions.push_back(std::move(entry));
    }
    value["questions"] = std::move(questions);
    return value;
}

CandidateQuestion candidate_from_json(const Json& value) {
    CandidateQuestion question;
    question.question_id = require_string(value, "question_id", "question");
    const std::string where = "question '" + question.question_id + "'";
    question.text = require_string(value, "text", where);
    if (question.text.empty() || question.text.back() != '?') {
        throw SchemaError(where + ": text must end with '?'");
    }
    if (value.contains("origin_source")) {
        question.origin_source = require_string(value, "origin_source", where);
    }
    if (value.contains("origin_paragraph")) {
        question.origin_paragraph = require_index(value, "origin_paragraph", where);
    }
    return question;
}

AnswerSpan span_from_json(const Json& value) {
    AnswerSpan span;
    span.source_domain = require_string(value, "source_domain", "answer span");
    span.paragraph_index = require_index(value, "paragraph_index", "answer span");
    span.char_start = require_index(value, "char_start", "answer span");
    span.char_end = require_index(value, "char_end", "answer span");
    span.span_text = require_string(value, "span_text", "answer span");
    if (span.char_start >= span.char_end) {
        throw SchemaError("answer span: char_start must be below char_end");
    }
    return span;
}

AnswerGroup group_from_json(const Json& value) {
    AnswerGroup group;
    group.group_id = static_cast<int>(require_integer(value, "group_id", "answer group"));
    const std::string where = "answer group " + std::to_string(group.group_id);
    group.label = require_string(value, "label", where);
    for (const auto& member : require_array(value, "members", where)) {
        group.members.push_back(span_from_json(member));
    }
    if (group.members.empty()) {
        throw SchemaError(where + ": members must be non-empty");
    }
    return group;
}

namespace {

std::size_t optional_count(const Json& object, const char* key) {
    return object.contains(key) ? require_index(object, key, "pipeline_stats") : 0;
}

PipelineStats stats_from_json(const Json& value) {
    if (!value.is_object()) {
        throw SchemaError("pipeline_stats must be an object");
    }
    PipelineStats stats;
    stats.source_count = optional_count(value, "source_count");
    stats.candidates_generated = optional_count(value, "candidates_generated");
    stats.candidates_unique = optional_count(value, "candidates_unique");
    stats.answered = optional_count(value, "answered");
    stats.qualified = optional_count(value, "qualified");
    stats.deduplicated = optional_count(value, "deduplicated");
    if (value.contains("rejected")) {
        const Json& rejected = value["rejected"];
        if (!rejected.is_object()) {
            throw SchemaError("pipeline_stats: 'rejected' must be an object");
        }
        stats.rejected.coverage = optional_count(rejected, "coverage");
        stats.rejected.diversity = optional_count(rejected, "diversity");
        stats.rejected.specificity = optional_count(rejected, "specificity");
    }
    stats.reference_articles = optional_count(value, "reference_articles");
    if (value.contains("reference_warning")) {
        stats.reference_warning = require_bool(value, "reference_warning", "pipeline_stats");
    }
    if (value.contains("stopwords_version")) {
        stats.stopwords_version = require_string(value, "stopwords_version", "pipeline_stats");
    }
    return stats;
}

} // namespace

DiscordQuestionSet question_set_from_json(const Json& value) {
    if (!value.is_object()) {
        throw SchemaError("question set must be a JSON object");
    }
    DiscordQuestionSet set;
    set.story_id = require_string(value, "story_id", "question set");
    set.pipeline_stats = stats_from_json(require(value, "pipeline_stats", "question set"));
    std::set<std::string> ids;
    for (const auto& entry : require_array(value, "questions", "question set")) {
        DiscordQuestion question;
        question.question = candidate_from_json(entry);
        if (!ids.insert(question.question.question_id).second) {
            throw SchemaError("question set: duplicate question_id '" + question.question.question_id + "'");
        }
        std::set<int> groupIds;
        for (const auto& group : require_array(entry, "groups", "question '" + question.question.question_id + "'")) {
            question.groups.push_back(group_from_json(group));
            if (!groupIds.insert(question.groups.back().group_id).second) {
                throw SchemaError("question '" + question.question.question_id + "': duplicate group_id");
            }
        }
        set.questions.push_back(std::move(question));
    }
    return set;
}

std::string serialize_question_set(const DiscordQuestionSet& set) {
    return to_json(set).dump(2) + "\n";
}

DiscordQuestionSet load_question_set(const std::filesystem::path& path) {
    const std::string text = corpus::read_file(path);
    Json value;
    try {
        value = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw SchemaError("'" + path.string() + "' is not valid JSON: " + e.what());
    }
    return question_set_from_json(value);
}

void save_question_set(const DiscordQuestionSet& set, const std::filesystem::path& path) {
    corpus::write_file_atomic(path, serialize_question_set(set));
}

void check_against_story(const DiscordQuestionSet& set, const corpus::Story& story) {
    if (set.story_id != story.story_id()) {
        throw SchemaError("question set belongs to story '" + set.story_id + "', not '" + story.story_id() + "'");
    }
    for (const auto& question : set.questions) {
        for (const auto& group : question.groups) {
            for (const auto& member : group.members) {
                const corpus::SourceArticle* article = story.find(member.source_domain);
                if (article == nullptr) {
                    throw SchemaError("question '" + question.question.question_id + "' cites unknown source '"
                                      + member.source_domain + "'");
                }
                if (std::string problem = span_problem(member, *article); !problem.empty()) {
                    throw SchemaError("question '" + question.question.question_id + "': " + problem);
                }
            }
        }
    }
}

PipelineConfig pipeline_config_from_json(const Json& value) {
    if (!value.is_object()) {
        throw SchemaError("pipeline config must be a JSON object");
    }
    PipelineConfig config;
    const std::pair<const char*, double*> fractions[] = {
        {"coverage_fraction", &config.coverage_fraction},
        {"diversity_max_group_fraction", &config.diversity_max_group_fraction},
        {"dedup_overlap_threshold", &config.dedup_overlap_threshold},
        {"qa_overlap_threshold", &config.qa_overlap_threshold},
        {"consolidation_similarity_threshold", &config.consolidation_similarity_threshold},
        {"specificity_max_foreign_rate", &config.specificity_max_foreign_rate},
    };
    for (const auto& [key, target] : fractions) {
        if (value.contains(key)) {
            *target = require_number(value, key, "pipeline config");
        }
    }
    if (value.contains("min_sources")) {
        config.min_sources = require_index(value, "min_sources", "pipeline config");
    }
    config.validate();
    return config;
}

Json to_json(const PipelineConfig& config) {
    Json value;
    value["coverage_fraction"] = config.coverage_fraction;
    value["diversity_max_group_fraction"] = config.diversity_max_group_fraction;
    value["dedup_overlap_threshold"] = config.dedup_overlap_threshold;
    value["qa_overlap_threshold"] = config.qa_overlap_threshold;
    value["consolidation_similarity_threshold"] = config.consolidation_similarity_threshold;
    value["specificity_max_foreign_rate"] = config.specificity_max_foreign_rate;
    value["min_sources"] = config.min_sources;
    return value;
}

} // namespace assembly::discordq
