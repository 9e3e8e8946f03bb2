#include "assembly/evalkit/evalkit.hpp"

#include "assembly/corpus/story_io.hpp"
#include "assembly/error.hpp"
#include "assembly/json_fields.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

namespace assembly::evalkit {

namespace fields = json_fields;

namespace {

const char* const kColumns[] = {"participant_id", "story_id",     "interface_kind", "question_index",
                                "answer_text",    "is_blank",     "aspect_ids",     "links_opened",
                                "words_shown",    "duration_seconds", "prediction_category"};

std::string trim(const std::string& text) {
    const auto begin = text.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) {
        return "";
    }
    const auto end = text.find_last_not_of(" \t\r\n");
    return text.substr(begin, end - begin + 1);
}

std::string lower(std::string text) {
    std::transform(text.begin(), text.end(), text.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return text;
}

void finish(ExerciseResponse& r, std::optional<bool> blank, const std::string& where) {
    r.is_blank = blank.value_or(is_blank_answer(r.answer_text));
    if (r.is_blank && !r.aspect_ids.empty()) {
        throw SchemaError(where + ": blank answer carries aspect ids");
    }
}

std::size_t optional_count(const Json& row, const char* key, const std::string& where) {
    return row.contains(key) ? fields::require_index(row, key, where) : 0;
}

ExerciseResponse response_from_json(const Json& row, const std::string& where) {
    ExerciseResponse r;
    r.participant_id = fields::require_string(row, "participant_id", where);
    r.story_id = fields::require_string(row, "story_id", where);
    r.interface_kind = fields::require_string(row, "interface_kind", where);
    r.question_index = fields::require_index(row, "question_index", where);
    r.answer_text = fields::require_string(row, "answer_text", where);
    std::optional<bool> blank;
    if (row.contains("is_blank")) {
        blank = fields::require_bool(row, "is_blank", where);
    }
    if (row.contains("aspect_ids")) {
        for (const auto& id : fields::require_array(row, "aspect_ids", where)) {
            if (!id.is_number_integer()) {
                throw SchemaError(where + ": aspect ids must be integers");
            }
            r.aspect_ids.insert(id.get<int>());
        }
    }
    r.links_opened = optional_count(row, "links_opened", where);
    r.words_shown = optional_count(row, "words_shown", where);
    r.duration_seconds = optional_count(row, "duration_seconds", where);
    if (row.contains("prediction_category") && !row["prediction_category"].is_null()) {
        r.prediction = parse_prediction_category(fields::require_string(row, "prediction_category", where));
    }
    finish(r, blank, where);
    return r;
}

// RFC 4180 records: quoted fields may hold commas, quotes ("") and newlines.
std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false;
    bool fieldStarted = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        if (c == '"' && field.empty()) {
            quoted = true;
            fieldStarted = true;
        } else if (c == ',') {
            row.push_back(std::move(field));
            field.clear();
            fieldStarted = true;
        } else if (c == '\n' || c == '\r') {
            if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
                ++i;
            }
            if (fieldStarted || !field.empty() || !row.empty()) {
                row.push_back(std::move(field));
                rows.push_back(std::move(row));
            }
            field.clear();
            row.clear();
            fieldStarted = false;
        } else {
            field += c;
            fieldStarted = true;
        }
    }
    if (quoted) {
        throw SchemaError("csv: unterminated quoted field");
    }
    if (fieldStarted || !field.empty() || !row.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::size_t parse_count(const std::string& text, const std::string& where) {
    const std::string value = trim(text);
    std::size_t out = 0;
    const auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (value.empty() || ec != std::errc() || end != value.data() + value.size()) {
        throw SchemaError(where + ": '" + text + "' is not a non-negative integer");
    }
    return out;
}

std::string csv_field(const std::string& value) {
    if (value.find_first_of(",\"\r\n") == std::string::npos) {
        return value;
    }
    std::string out = "\"";
    for (char c : value) {
        out += c;
        if (c == '"') {
            out += '"';
        }
    }
    return out + "\"";
}

} // namespace

const char* to_string(PredictionCategory category) {
    switch (category) {
    case PredictionCategory::OneSided: return "one_sided";
    case PredictionCategory::Hypothetical: return "hypothetical";
    case PredictionCategory::TwoSided: return "two_sided";
    }
    return "";
}

PredictionCategory parse_prediction_category(const std::string& name) {
    for (auto c : {PredictionCategory::OneSided, PredictionCategory::Hypothetical, PredictionCategory::TwoSided}) {
        if (name == to_string(c)) {
            return c;
        }
    }
    throw SchemaError("unknown prediction category '" + name + "'");
}

bool is_blank_answer(const std::string& text) {
    const std::string t = lower(trim(text));
    return t.empty() || t == "no answer";
}

std::vector<ExerciseResponse> responses_from_json(const Json& doc) {
    const Json* rows = &doc;
    if (doc.is_object()) {
        rows = &fields::require_array(doc, "responses", "study data");
    }
    if (!rows->is_array()) {
        throw SchemaError("study data: expected an array of responses");
    }
    std::vector<ExerciseResponse> out;
    for (std::size_t i = 0; i < rows->size(); ++i) {
        out.push_back(response_from_json((*rows)[i], "response " + std::to_string(i)));
    }
    return out;
}

std::vector<ExerciseResponse> responses_from_csv(const std::string& text) {
    const auto rows = parse_csv(text);
    if (rows.empty()) {
        throw SchemaError("csv: missing header row");
    }
    std::map<std::string, std::size_t> column;
    for (std::size_t i = 0; i < rows[0].size(); ++i) {
        column[trim(rows[0][i])] = i;
    }
    for (const char* required : {"participant_id", "story_id", "interface_kind", "question_index", "answer_text"}) {
        if (!column.count(required)) {
            throw SchemaError(std::string("csv: missing column '") + required + "'");
        }
    }
    std::vector<ExerciseResponse> out;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const std::string where = "csv row " + std::to_string(i + 1);
        const auto& row = rows[i];
        if (row.size() != rows[0].size()) {
            throw SchemaError(where + ": expected " + std::to_string(rows[0].size()) + " fields");
        }
        auto cell = [&](const char* name) -> std::optional<std::string> {
            const auto it = column.find(name);
            if (it == column.end()) {
                return std::nullopt;
            }
            return row[it->second];
        };
        ExerciseResponse r;
        r.participant_id = *cell("participant_id");
        r.story_id = *cell("story_id");
        r.interface_kind = *cell("interface_kind");
        r.question_index = parse_count(*cell("question_index"), where);
        r.answer_text = *cell("answer_text");
        std::optional<bool> blank;
        if (auto v = cell("is_blank"); v && !trim(*v).empty()) {
            const std::string b = lower(trim(*v));
            if (b != "true" && b != "false" && b != "1" && b != "0") {
                throw SchemaError(where + ": is_blank must be true or false");
            }
            blank = b == "true" || b == "1";
        }
        if (auto v = cell("aspect_ids")) {
            std::string ids = *v;
            std::size_t start = 0;
            while (start <= ids.size()) {
                const std::size_t end = std::min(ids.find(';', start), ids.size());
                const std::string id = trim(ids.substr(start, end - start));
                if (!id.empty()) {
                    r.aspect_ids.insert(static_cast<int>(parse_count(id, where)));
                }
                start = end + 1;
            }
        }
        for (auto [name, target] : {std::pair{"links_opened", &r.links_opened}, std::pair{"words_shown", &r.words_shown},
                                    std::pair{"duration_seconds", &r.duration_seconds}}) {
            if (auto v = cell(name); v && !trim(*v).empty()) {
                *target = parse_count(*v, where);
            }
        }
        if (auto v = cell("prediction_category"); v && !trim(*v).empty()) {
            r.prediction = parse_prediction_category(trim(*v));
        }
        finish(r, blank, where);
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<ExerciseResponse> load_responses(const std::filesystem::path& path) {
    const std::string text = corpus::read_file(path);
    if (path.extension() == ".csv") {
        return responses_from_csv(text);
    }
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw SchemaError(path.string() + ": " + e.what());
    }
    return responses_from_json(doc);
}

Json to_json(const ExerciseResponse& r) {
    Json out = Json::object();
    out["participant_id"] = r.participant_id;
    out["story_id"] = r.story_id;
    out["interface_kind"] = r.interface_kind;
    out["question_index"] = r.question_index;
    out["answer_text"] = r.answer_text;
    out["is_blank"] = r.is_blank;
    out["aspect_ids"] = r.aspect_ids;
    out["links_opened"] = r.links_opened;
    out["words_shown"] = r.words_shown;
    out["duration_seconds"] = r.duration_seconds;
    if (r.prediction) {
        out["prediction_category"] = to_string(*r.prediction);
    }
    return out;
}

Json to_json(const std::vector<ExerciseResponse>& responses) {
    Json out = Json::array();
    for (const auto& r : responses) {
        out.push_back(to_json(r));
    }
    return out;
}

std::string to_csv(const std::vector<ExerciseResponse>& responses) {
    std::string out;
    for (std::size_t i = 0; i < std::size(kColumns); ++i) {
        out += (i ? "," : "") + std::string(kColumns[i]);
    }
    out += "\n";
    for (const auto& r : responses) {
        std::string ids;
        for (int id : r.aspect_ids) {
            ids += (ids.empty() ? "" : ";") + std::to_string(id);
        }
        const std::string values[] = {r.participant_id,
                                      r.story_id,
                                      r.interface_kind,
                                      std::to_string(r.question_index),
                                      r.answer_text,
                                      r.is_blank ? "true" : "false",
                                      ids,
                                      std::to_string(r.links_opened),
                                      std::to_string(r.words_shown),
                                      std::to_string(r.duration_seconds),
                                      r.prediction ? to_string(*r.prediction) : ""};
        for (std::size_t i = 0; i < std::size(values); ++i) {
            out += (i ? "," : "") + csv_field(values[i]);
        }
        out += "\n";
    }
    return out;
}

AspectCatalog load_aspect_catalogs(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) {
        throw IoError("aspect catalog directory not found: " + dir.string());
    }
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    AspectCatalog catalog;
    for (const auto& file : files) {
        const std::string where = file.filename().string();
        Json doc;
        try {
            doc = Json::parse(corpus::read_file(file));
        } catch (const Json::parse_error& e) {
            throw SchemaError(where + ": " + e.what());
        }
        // One catalog object or an array of them.
        const Json entries = doc.is_array() ? doc : Json::array({doc});
        for (const auto& entry : entries) {
            const auto key = std::pair{fields::require_string(entry, "story_id", where),
                                       fields::require_index(entry, "question_index", where)};
            std::vector<Aspect> aspects;
            std::set<int> seen;
            for (const auto& a : fields::require_array(entry, "aspects", where)) {
                Aspect aspect{static_cast<int>(fields::require_integer(a, "aspect_id", where)),
                              fields::require_string(a, "description", where)};
                if (!seen.insert(aspect.aspect_id).second) {
                    throw SchemaError(where + ": duplicate aspect_id " + std::to_string(aspect.aspect_id));
                }
                aspects.push_back(std::move(aspect));
            }
            if (!catalog.emplace(key, std::move(aspects)).second) {
                throw SchemaError(where + ": duplicate catalog for " + key.first + " question "
                                  + std::to_string(key.second));
            }
        }
    }
    return catalog;
}

void check_aspects(const std::vector<ExerciseResponse>& responses, const AspectCatalog& catalog) {
    for (const auto& r : responses) {
        const auto it = catalog.find({r.story_id, r.question_index});
        if (it == catalog.end()) {
            continue;
        }
        for (int id : r.aspect_ids) {
            const bool known = std::any_of(it->second.begin(), it->second.end(),
                                           [&](const Aspect& a) { return a.aspect_id == id; });
            if (!known) {
                throw SchemaError("participant " + r.participant_id + ", story " + r.story_id + " question "
                                  + std::to_string(r.question_index) + ": unknown aspect id " + std::to_string(id));
            }
        }
    }
}

} // namespace assembly::evalkit
