#pragma once

#include "assembly/corpus/story.hpp"
#include "assembly/discordq/types.hpp"
#include "assembly/evalkit/evalkit.hpp"
#include "assembly/interfaces/views.hpp"
#include "assembly/json.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace assembly::service {

struct ViewError {
    std::string error; // error name, e.g. "EmptyQuestionSet"
    std::string message;
};

struct ProcessedStoryRecord {
    std::string story_id;
    corpus::Story story;
    discordq::DiscordQuestionSet dqset;
    std::map<interfaces::ViewKind, Json> views;
    std::map<interfaces::ViewKind, ViewError> view_errors;
    std::string processed_at; // ISO 8601 UTC

    bool complete() const { return view_errors.empty() && views.size() == interfaces::kAllViewKinds.size(); }
};

// Builds every view; a failing kind lands in view_errors.
ProcessedStoryRecord build_record(const corpus::Story& story, const discordq::DiscordQuestionSet& dqset,
                                  std::string processedAt);

Json to_json(const ProcessedStoryRecord& record);
ProcessedStoryRecord record_from_json(const Json& value);

struct StorySummary {
    std::string story_id;
    std::string title;
    std::string processed_at;
    std::size_t source_count = 0;
    std::size_t question_count = 0;
    std::vector<interfaces::ViewKind> views;
};

Json to_json(const StorySummary& summary);

struct QuestionsFile {
    std::string story_id;
    std::vector<std::string> questions; // exactly four
};

Json to_json(const QuestionsFile& file);
QuestionsFile questions_from_json(const Json& value);

// Kinds a reading exercise cycles through.
inline constexpr interfaces::ViewKind kExerciseKinds[] = {interfaces::ViewKind::Article, interfaces::ViewKind::Headlines,
                                                          interfaces::ViewKind::Annotated};

struct ClientStats {
    std::size_t links_opened = 0;
    std::size_t tab_switches = 0;
    std::size_t duration_seconds = 0;
};

struct Submission {
    std::vector<std::string> answers;
    ClientStats stats;
    std::size_t words_shown = 0;
    std::string submitted_at;
};

struct Assignment {
    std::string story_id;
    interfaces::ViewKind kind = interfaces::ViewKind::Article;
    std::optional<std::string> started_at;
    std::optional<Submission> submission;
};

enum class SessionStatus { Open, Submitted };

struct ExerciseSession {
    std::string session_id;
    std::string participant_id;
    std::uint64_t seed = 0;
    std::string created_at;
    std::vector<Assignment> assignments;
    std::size_t tab_switches = 0;
    SessionStatus status = SessionStatus::Open;
};

Json to_json(const ExerciseSession& session);
ExerciseSession session_from_json(const Json& value);

// Seeded uniform permutation of kExerciseKinds.
std::vector<interfaces::ViewKind> shuffled_kinds(std::uint64_t seed);

// Words of visible text in a view payload.
std::size_t visible_word_count(const Json& payload);

// File-backed store rooted at a directory:
//   stories/<id>.json    ProcessedStoryRecord
//   questions/<id>.json  QuestionsFile
//   sessions/<id>.json   ExerciseSession
//   audit.log            one JSON object per line
// Every write goes through a temp file and rename, serialized per key.
class Store {
public:
    using Clock = std::function<std::string()>;

    explicit Store(std::filesystem::path root, Clock clock = {});

    const std::filesystem::path& root() const noexcept { return Root; }

    void put_story(const ProcessedStoryRecord& record);
    ProcessedStoryRecord get_story(const std::string& storyId) const;
    bool has_story(const std::string& storyId) const;
    // Sorted by processed_at descending, then story_id.
    std::vector<StorySummary> list_stories() const;
    // NotFound for an unknown story; ViewsIncomplete when the kind failed to build.
    Json get_view(const std::string& storyId, interfaces::ViewKind kind) const;

    void put_questions(const QuestionsFile& questions);
    QuestionsFile get_questions(const std::string& storyId) const;

    // InvalidRequest unless exactly three distinct stories; NotFound for a
    // missing story or questions file; ViewsIncomplete when an exercise view
    // is missing. Without a seed one is drawn at random.
    ExerciseSession start_exercise(const std::string& participantId, const std::vector<std::string>& storyChoices,
                                   std::optional<std::uint64_t> seed = std::nullopt);
    ExerciseSession get_session(const std::string& sessionId) const;
    std::vector<ExerciseSession> list_sessions() const;
    // SessionClosed once every assignment is in; AlreadySubmitted for a
    // repeated index; InvalidRequest for a bad index or answer count.
    ExerciseSession submit_exercise(const std::string& sessionId, std::size_t assignmentIndex,
                                    const std::vector<std::string>& answers, const ClientStats& stats);

    // One row per submitted answer, in evalkit's study-data format.
    std::vector<evalkit::ExerciseResponse> export_responses() const;

private:
    std::shared_ptr<std::mutex> key_mutex(const std::string& key) const;
    void audit(const std::string& event, const std::string& key, const Json& detail) const;
    std::string now() const;
    std::filesystem::path story_path(const std::string& id) const;
    std::filesystem::path session_path(const std::string& id) const;
    void save_session(const ExerciseSession& session) const;

    std::filesystem::path Root;
    Clock Now;
    mutable std::mutex KeysMutex;
    mutable std::map<std::string, std::shared_ptr<std::mutex>> Keys;
    mutable std::mutex AuditMutex;
};

// Current UTC time as YYYY-MM-DDTHH:MM:SSZ.
std::string utc_now();

// Ids are used as file names; letters, digits, '-', '_' and '.' only.
bool is_safe_id(const std::string& id);

} // namespace assembly::service
