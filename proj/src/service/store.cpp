#include "assembly/service/store.hpp"

#include "assembly/corpus/story_io.hpp"
#include "assembly/discordq/serialize.hpp"
#include "assembly/error.hpp"
#include "assembly/interfaces/payload.hpp"
#include "assembly/json_fields.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <ctime>
#include <fstream>
#include <random>
#include <set>

namespace assembly::service {

namespace fields = json_fields;
using interfaces::ViewKind;

namespace {

std::string kind_name(ViewKind kind) {
    return std::string(interfaces::to_string(kind));
}

std::optional<std::string> optional_string(const Json& value, const char* key, const std::string& where) {
    if (!value.contains(key) || value[key].is_null()) {
        return std::nullopt;
    }
    return fields::require_string(value, key, where);
}

Json to_json(const Submission& s) {
    return {{"answers", s.answers},
            {"links_opened", s.stats.links_opened},
            {"tab_switches", s.stats.tab_switches},
            {"duration_seconds", s.stats.duration_seconds},
            {"words_shown", s.words_shown},
            {"submitted_at", s.submitted_at}};
}

Submission submission_from_json(const Json& value, const std::string& where) {
    Submission s;
    for (const auto& answer : fields::require_array(value, "answers", where)) {
        if (!answer.is_string()) {
            throw SchemaError(where + ": answers must be strings");
        }
        s.answers.push_back(answer.get<std::string>());
    }
    s.stats.links_opened = fields::require_index(value, "links_opened", where);
    s.stats.tab_switches = fields::require_index(value, "tab_switches", where);
    s.stats.duration_seconds = fields::require_index(value, "duration_seconds", where);
    s.words_shown = fields::require_index(value, "words_shown", where);
    s.submitted_at = fields::require_string(value, "submitted_at", where);
    return s;
}

std::uint64_t random_u64() {
    std::random_device device;
    return (static_cast<std::uint64_t>(device()) << 32) ^ device();
}

std::string hex16(std::uint64_t value) {
    static const char digits[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[value & 0xF];
        value >>= 4;
    }
    return out;
}

std::size_t count_words(const std::string& text) {
    std::size_t count = 0;
    bool inWord = false;
    for (unsigned char c : text) {
        const bool space = c == ' ' || c == '\n' || c == '\t' || c == '\r';
        if (!space && !inWord) {
            ++count;
        }
        inWord = !space;
    }
    return count;
}

} // namespace

std::string utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buffer[32];
    std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buffer;
}

bool is_safe_id(const std::string& id) {
    if (id.empty() || id == "." || id == ".." || id.size() > 200) {
        return false;
    }
    return std::all_of(id.begin(), id.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '-' || c == '_' || c == '.';
    });
}

ProcessedStoryRecord build_record(const corpus::Story& story, const discordq::DiscordQuestionSet& dqset,
                                  std::string processedAt) {
    ProcessedStoryRecord record{story.story_id(), story, dqset, {}, {}, std::move(processedAt)};
    for (ViewKind kind : interfaces::kAllViewKinds) {
        try {
            record.views[kind] = interfaces::build_view_payload(kind, story, dqset);
        } catch (const Error& e) {
            record.view_errors[kind] = {e.name(), e.what()};
        }
    }
    return record;
}

Json to_json(const ProcessedStoryRecord& record) {
    Json out = Json::object();
    out["story_id"] = record.story_id;
    out["processed_at"] = record.processed_at;
    out["story"] = corpus::to_json(record.story);
    out["dqset"] = discordq::to_json(record.dqset);
    Json views = Json::object();
    for (const auto& [kind, payload] : record.views) {
        views[kind_name(kind)] = payload;
    }
    out["views"] = std::move(views);
    Json errors = Json::object();
    for (const auto& [kind, error] : record.view_errors) {
        errors[kind_name(kind)] = {{"error", error.error}, {"message", error.message}};
    }
    out["view_errors"] = std::move(errors);
    return out;
}

ProcessedStoryRecord record_from_json(const Json& value) {
    const std::string where = "story record";
    ProcessedStoryRecord record{fields::require_string(value, "story_id", where),
                                corpus::story_from_json(fields::require(value, "story", where)),
                                discordq::question_set_from_json(fields::require(value, "dqset", where)),
                                {},
                                {},
                                fields::require_string(value, "processed_at", where)};
    if (record.story.story_id() != record.story_id || record.dqset.story_id != record.story_id) {
        throw SchemaError(where + ": story_id mismatch");
    }
    const Json& views = fields::require(value, "views", where);
    if (!views.is_object()) {
        throw SchemaError(where + ": views must be an object");
    }
    for (const auto& [name, payload] : views.items()) {
        record.views[interfaces::parse_view_kind(name)] = payload;
    }
    if (value.contains("view_errors")) {
        for (const auto& [name, error] : value["view_errors"].items()) {
            record.view_errors[interfaces::parse_view_kind(name)] = {fields::require_string(error, "error", where),
                                                                     fields::require_string(error, "message", where)};
        }
    }
    for (ViewKind kind : interfaces::kAllViewKinds) {
        if (!record.views.count(kind) && !record.view_errors.count(kind)) {
            throw SchemaError(where + ": view '" + kind_name(kind) + "' is neither built nor recorded as failed");
        }
    }
    return record;
}

Json to_json(const StorySummary& summary) {
    Json views = Json::array();
    for (ViewKind kind : summary.views) {
        views.push_back(kind_name(kind));
    }
    return {{"story_id", summary.story_id},         {"title", summary.title},
            {"processed_at", summary.processed_at}, {"source_count", summary.source_count},
            {"question_count", summary.question_count}, {"views", std::move(views)}};
}

Json to_json(const QuestionsFile& file) {
    return {{"story_id", file.story_id}, {"questions", file.questions}};
}

QuestionsFile questions_from_json(const Json& value) {
    const std::string where = "questions file";
    QuestionsFile file;
    file.story_id = fields::require_string(value, "story_id", where);
    for (const auto& q : fields::require_array(value, "questions", where)) {
        if (!q.is_string() || q.get<std::string>().empty()) {
            throw SchemaError(where + ": questions must be non-empty strings");
        }
        file.questions.push_back(q.get<std::string>());
    }
    if (file.questions.size() != 4) {
        throw SchemaError(where + ": expected 4 questions, got " + std::to_string(file.questions.size()));
    }
    return file;
}

Json to_json(const ExerciseSession& session) {
    Json assignments = Json::array();
    for (const auto& a : session.assignments) {
        assignments.push_back({{"story_id", a.story_id},
                               {"interface_kind", kind_name(a.kind)},
                               {"started_at", a.started_at ? Json(*a.started_at) : Json(nullptr)},
                               {"submission", a.submission ? to_json(*a.submission) : Json(nullptr)}});
    }
    return {{"session_id", session.session_id},
            {"participant_id", session.participant_id},
            {"seed", session.seed},
            {"created_at", session.created_at},
            {"status", session.status == SessionStatus::Open ? "open" : "submitted"},
            {"tab_switches", session.tab_switches},
            {"assignments", std::move(assignments)}};
}

ExerciseSession session_from_json(const Json& value) {
    const std::string where = "session";
    ExerciseSession session;
    session.session_id = fields::require_string(value, "session_id", where);
    session.participant_id = fields::require_string(value, "participant_id", where);
    const Json& seed = fields::require(value, "seed", where);
    if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<long long>() >= 0)) {
        throw SchemaError(where + ": seed must be a non-negative integer");
    }
    session.seed = seed.get<std::uint64_t>();
    session.created_at = fields::require_string(value, "created_at", where);
    session.tab_switches = fields::require_index(value, "tab_switches", where);
    const std::string status = fields::require_string(value, "status", where);
    if (status != "open" && status != "submitted") {
        throw SchemaError(where + ": unknown status '" + status + "'");
    }
    session.status = status == "open" ? SessionStatus::Open : SessionStatus::Submitted;
    std::set<std::string> stories;
    std::set<ViewKind> kinds;
    for (const auto& a : fields::require_array(value, "assignments", where)) {
        Assignment assignment;
        assignment.story_id = fields::require_string(a, "story_id", where);
        assignment.kind = interfaces::parse_view_kind(fields::require_string(a, "interface_kind", where));
        assignment.started_at = optional_string(a, "started_at", where);
        if (a.contains("submission") && !a["submission"].is_null()) {
            assignment.submission = submission_from_json(a["submission"], where);
        }
        stories.insert(assignment.story_id);
        kinds.insert(assignment.kind);
        session.assignments.push_back(std::move(assignment));
    }
    const std::set<ViewKind> expected(std::begin(kExerciseKinds), std::end(kExerciseKinds));
    if (session.assignments.size() != 3 || stories.size() != 3 || kinds != expected) {
        throw SchemaError(where + ": assignments must pair three distinct stories with a permutation of "
                                  "article, headlines, annotated");
    }
    return session;
}

std::vector<ViewKind> shuffled_kinds(std::uint64_t seed) {
    std::vector<ViewKind> kinds(std::begin(kExerciseKinds), std::end(kExerciseKinds));
    std::mt19937_64 rng(evalkit::sub_seed(seed, 3, 0));
    for (std::size_t i = kinds.size() - 1; i > 0; --i) {
        const std::uint64_t n = i + 1;
        const std::uint64_t threshold = (0 - n) % n;
        std::uint64_t r = rng();
        while (r < threshold) {
            r = rng();
        }
        std::swap(kinds[i], kinds[r % n]);
    }
    return kinds;
}

std::size_t visible_word_count(const Json& payload) {
    static const std::set<std::string> textKeys = {"text",        "headline",     "question_text", "span_text",
                                                   "paragraph_text", "intro_summary", "story_title"};
    std::size_t words = 0;
    std::vector<const Json*> stack{&payload};
    while (!stack.empty()) {
        const Json* node = stack.back();
        stack.pop_back();
        if (node->is_object()) {
            for (const auto& [key, child] : node->items()) {
                if (child.is_string() && textKeys.count(key)) {
                    words += count_words(child.get<std::string>());
                } else if (child.is_structured()) {
                    stack.push_back(&child);
                }
            }
        } else if (node->is_array()) {
            for (const auto& child : *node) {
                stack.push_back(&child);
            }
        }
    }
    return words;
}

Store::Store(std::filesystem::path root, Clock clock)
    : Root(std::move(root))
    , Now(std::move(clock))
{
    std::error_code ec;
    for (const char* sub : {"stories", "questions", "sessions"}) {
        std::filesystem::create_directories(Root / sub, ec);
        if (ec) {
            throw IoError("cannot create '" + (Root / sub).string() + "': " + ec.message());
        }
    }
}

std::string Store::now() const {
    return Now ? Now() : utc_now();
}

std::shared_ptr<std::mutex> Store::key_mutex(const std::string& key) const {
    std::lock_guard lock(KeysMutex);
    auto& slot = Keys[key];
    if (!slot) {
        slot = std::make_shared<std::mutex>();
    }
    return slot;
}

void Store::audit(const std::string& event, const std::string& key, const Json& detail) const {
    Json line = {{"time", now()}, {"event", event}, {"key", key}, {"detail", detail}};
    std::lock_guard lock(AuditMutex);
    std::ofstream out(Root / "audit.log", std::ios::app | std::ios::binary);
    out << line.dump() << '\n';
}

std::filesystem::path Store::story_path(const std::string& id) const {
    if (!is_safe_id(id)) {
        throw NotFound("no story '" + id + "'");
    }
    return Root / "stories" / (id + ".json");
}

std::filesystem::path Store::session_path(const std::string& id) const {
    if (!is_safe_id(id)) {
        throw NotFound("no session '" + id + "'");
    }
    return Root / "sessions" / (id + ".json");
}

void Store::put_story(const ProcessedStoryRecord& record) {
    if (!is_safe_id(record.story_id)) {
        throw SchemaError("story_id '" + record.story_id + "' cannot be stored");
    }
    const std::string key = "story:" + record.story_id;
    const auto mutex = key_mutex(key);
    std::lock_guard lock(*mutex);
    const auto path = story_path(record.story_id);
    Json detail = {{"processed_at", record.processed_at}};
    if (std::filesystem::exists(path)) {
        // Last writer wins; keep a trace of what was replaced.
        try {
            detail["replaced_processed_at"] = Json::parse(corpus::read_file(path)).value("processed_at", "");
        } catch (const std::exception&) {
            detail["replaced_processed_at"] = nullptr;
        }
        audit("overwrite", key, detail);
    } else {
        audit("put", key, detail);
    }
    corpus::write_file_atomic(path, to_json(record).dump(2) + "\n");
}

bool Store::has_story(const std::string& storyId) const {
    return is_safe_id(storyId) && std::filesystem::exists(story_path(storyId));
}

ProcessedStoryRecord Store::get_story(const std::string& storyId) const {
    const auto path = story_path(storyId);
    if (!std::filesystem::exists(path)) {
        throw NotFound("no story '" + storyId + "'");
    }
    Json doc;
    try {
        doc = Json::parse(corpus::read_file(path));
    } catch (const Json::parse_error& e) {
        throw SchemaError(path.string() + ": " + e.what());
    }
    return record_from_json(doc);
}

std::vector<StorySummary> Store::list_stories() const {
    std::vector<StorySummary> out;
    for (const auto& entry : std::filesystem::directory_iterator(Root / "stories")) {
        if (!entry.is_regular_file() || entry.path().extension() != ".json") {
            continue;
        }
        const auto record = get_story(entry.path().stem().string());
        StorySummary s;
        s.story_id = record.story_id;
        s.title = record.story.title();
        s.processed_at = record.processed_at;
        s.source_count = record.story.articles().size();
        s.question_count = record.dqset.questions.size();
        for (const auto& [kind, payload] : record.views) {
            s.views.push_back(kind);
        }
        out.push_back(std::move(s));
    }
    std::sort(out.begin(), out.end(), [](const StorySummary& a, const StorySummary& b) {
        if (a.processed_at != b.processed_at) {
            return a.processed_at > b.processed_at;
        }
        return a.story_id < b.story_id;
    });
    return out;
}

Json Store::get_view(const std::string& storyId, ViewKind kind) const {
    const auto record = get_story(storyId);
    const auto it = record.views.find(kind);
    if (it == record.views.end()) {
        const auto error = record.view_errors.find(kind);
        throw ViewsIncomplete("story '" + storyId + "' has no " + kind_name(kind) + " view"
                              + (error == record.view_errors.end() ? "" : ": " + error->second.error + ": "
                                                                              + error->second.message));
    }
    return it->second;
}

void Store::put_questions(const QuestionsFile& questions) {
    if (!is_safe_id(questions.story_id)) {
        throw SchemaError("story_id '" + questions.story_id + "' cannot be stored");
    }
    questions_from_json(to_json(questions)); // validates
    const std::string key = "questions:" + questions.story_id;
    const auto mutex = key_mutex(key);
    std::lock_guard lock(*mutex);
    audit("put", key, Json::object());
    corpus::write_file_atomic(Root / "questions" / (questions.story_id + ".json"), to_json(questions).dump(2) + "\n");
}

QuestionsFile Store::get_questions(const std::string& storyId) const {
    const auto path = Root / "questions" / (storyId + ".json");
    if (!is_safe_id(storyId) || !std::filesystem::exists(path)) {
        throw NotFound("no comprehension questions for story '" + storyId + "'");
    }
    Json doc;
    try {
        doc = Json::parse(corpus::read_file(path));
    } catch (const Json::parse_error& e) {
        throw SchemaError(path.string() + ": " + e.what());
    }
    auto file = questions_from_json(doc);
    if (file.story_id != storyId) {
        throw SchemaError(path.string() + ": story_id mismatch");
    }
    return file;
}

void Store::save_session(const ExerciseSession& session) const {
    corpus::write_file_atomic(session_path(session.session_id), to_json(session).dump(2) + "\n");
}

ExerciseSession Store::start_exercise(const std::string& participantId, const std::vector<std::string>& storyChoices,
                                      std::optional<std::uint64_t> seed) {
    if (participantId.empty()) {
        throw InvalidRequest("participant_id must not be empty");
    }
    const std::set<std::string> distinct(storyChoices.begin(), storyChoices.end());
    if (storyChoices.size() != 3 || distinct.size() != 3) {
        throw InvalidRequest("an exercise needs three distinct stories");
    }
    for (const auto& id : storyChoices) {
        const auto record = get_story(id);
        for (ViewKind kind : kExerciseKinds) {
            if (!record.views.count(kind)) {
                throw ViewsIncomplete("story '" + id + "' has no " + kind_name(kind) + " view");
            }
        }
        get_questions(id);
    }

    ExerciseSession session;
    session.seed = seed.value_or(random_u64());
    session.participant_id = participantId;
    session.created_at = now();
    const auto kinds = shuffled_kinds(session.seed);
    for (std::size_t i = 0; i < 3; ++i) {
        Assignment a;
        a.story_id = storyChoices[i];
        a.kind = kinds[i];
        session.assignments.push_back(std::move(a));
    }
    session.assignments[0].started_at = session.created_at;
    for (;;) {
        session.session_id = hex16(random_u64());
        const auto mutex = key_mutex("session:" + session.session_id);
        std::lock_guard lock(*mutex);
        if (std::filesystem::exists(session_path(session.session_id))) {
            continue;
        }
        save_session(session);
        break;
    }
    audit("start_exercise", "session:" + session.session_id, {{"participant_id", participantId}});
    return session;
}

ExerciseSession Store::get_session(const std::string& sessionId) const {
    const auto path = session_path(sessionId);
    if (!std::filesystem::exists(path)) {
        throw NotFound("no session '" + sessionId + "'");
    }
    Json doc;
    try {
        doc = Json::parse(corpus::read_file(path));
    } catch (const Json::parse_error& e) {
        throw SchemaError(path.string() + ": " + e.what());
    }
    return session_from_json(doc);
}

std::vector<ExerciseSession> Store::list_sessions() const {
    std::vector<std::string> ids;
    for (const auto& entry : std::filesystem::directory_iterator(Root / "sessions")) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") {
            ids.push_back(entry.path().stem().string());
        }
    }
    std::sort(ids.begin(), ids.end());
    std::vector<ExerciseSession> out;
    for (const auto& id : ids) {
        out.push_back(get_session(id));
    }
    return out;
}

ExerciseSession Store::submit_exercise(const std::string& sessionId, std::size_t assignmentIndex,
                                       const std::vector<std::string>& answers, const ClientStats& stats) {
    const auto mutex = key_mutex("session:" + sessionId);
    std::lock_guard lock(*mutex);
    ExerciseSession session = get_session(sessionId);
    if (session.status == SessionStatus::Submitted) {
        throw SessionClosed("session '" + sessionId + "' is complete");
    }
    if (assignmentIndex >= session.assignments.size()) {
        throw InvalidRequest("assignment index " + std::to_string(assignmentIndex) + " out of range");
    }
    if (answers.size() != 4) {
        throw InvalidRequest("expected 4 answers, got " + std::to_string(answers.size()));
    }
    Assignment& assignment = session.assignments[assignmentIndex];
    if (assignment.submission) {
        throw AlreadySubmitted("assignment " + std::to_string(assignmentIndex) + " of session '" + sessionId
                               + "' was already submitted");
    }
    Submission submission;
    submission.answers = answers;
    submission.stats = stats;
    submission.submitted_at = now();
    submission.words_shown = visible_word_count(get_view(assignment.story_id, assignment.kind));
    assignment.submission = std::move(submission);
    if (!assignment.started_at) {
        assignment.started_at = assignment.submission->submitted_at;
    }
    session.tab_switches += stats.tab_switches;

    const bool done = std::all_of(session.assignments.begin(), session.assignments.end(),
                                  [](const Assignment& a) { return a.submission.has_value(); });
    if (done) {
        session.status = SessionStatus::Submitted;
    } else {
        for (auto& a : session.assignments) {
            if (!a.submission && !a.started_at) {
                a.started_at = session.assignments[assignmentIndex].submission->submitted_at;
                break;
            }
        }
    }
    save_session(session);
    audit("submit", "session:" + sessionId, {{"assignment", assignmentIndex}});
    return session;
}

std::vector<evalkit::ExerciseResponse> Store::export_responses() const {
    std::vector<evalkit::ExerciseResponse> out;
    for (const auto& session : list_sessions()) {
        for (const auto& a : session.assignments) {
            if (!a.submission) {
                continue;
            }
            for (std::size_t q = 0; q < a.submission->answers.size(); ++q) {
                evalkit::ExerciseResponse r;
                r.participant_id = session.participant_id;
                r.story_id = a.story_id;
                r.interface_kind = kind_name(a.kind);
                r.question_index = q;
                r.answer_text = a.submission->answers[q];
                r.is_blank = evalkit::is_blank_answer(r.answer_text);
                r.links_opened = a.submission->stats.links_opened;
                r.words_shown = a.submission->words_shown;
                r.duration_seconds = a.submission->stats.duration_seconds;
                out.push_back(std::move(r));
            }
        }
    }
    return out;
}

} // namespace assembly::service
