#include "assembly/corpus/story_io.hpp"
#include "assembly/error.hpp"
#include "assembly/interfaces/payload.hpp"
#include "assembly/service/http.hpp"
#include "assembly/service/store.hpp"

#include "../support/builders.hpp"
#include "../support/fixture_corpus.hpp"

#include <doctest.h>
#include <httplib.h>

#include <atomic>
#include <fstream>
#include <set>
#include <thread>

using namespace assembly;
using namespace assembly::service;
using interfaces::ViewKind;

namespace {

struct Counter {
    int next = 0;
    std::string operator()() {
        char buffer[32];
        std::snprintf(buffer, sizeof buffer, "2022-10-01T00:00:%02dZ", next++ % 60);
        return buffer;
    }
};

// A store holding the three fixture stories and their question files.
void fill(Store& store) {
    int i = 0;
    for (const auto& f : test_support::processed_fixtures()) {
        store.put_story(build_record(f.story, f.set, "2022-10-0" + std::to_string(++i) + "T12:00:00Z"));
        store.put_questions(
            {f.story.story_id(), {"Question one?", "Question two?", "Question three?", "Question four?"}});
    }
}

std::vector<std::string> story_ids() {
    std::vector<std::string> ids;
    for (const auto& f : test_support::processed_fixtures()) {
        ids.push_back(f.story.story_id());
    }
    return ids;
}

std::string read_text(const std::filesystem::path& path) {
    return corpus::read_file(path);
}

} // namespace

TEST_CASE("fixture corpus yields questions for every story") {
    REQUIRE(test_support::processed_fixtures().size() == 3);
    for (const auto& f : test_support::processed_fixtures()) {
        CHECK(f.set.questions.size() >= 2);
        CHECK_FALSE(f.set.pipeline_stats.reference_warning);
    }
}

TEST_CASE("build_record builds every view or records the failure") {
    const auto& f = test_support::processed_fixtures().front();
    const auto record = build_record(f.story, f.set, "2022-10-01T00:00:00Z");
    CHECK(record.complete());
    CHECK(record.views.size() == 5);

    discordq::DiscordQuestionSet empty;
    empty.story_id = f.story.story_id();
    const auto partial = build_record(f.story, empty, "2022-10-01T00:00:00Z");
    CHECK_FALSE(partial.complete());
    CHECK(partial.view_errors.at(ViewKind::Grid).error == "EmptyQuestionSet");
    CHECK(partial.view_errors.at(ViewKind::Recomposed).error == "EmptyQuestionSet");
    CHECK(partial.views.count(ViewKind::Annotated) == 1);
    CHECK(record_from_json(to_json(partial)).view_errors.size() == 2);
}

TEST_CASE("put then get_view returns the same payload bytes") {
    Store store(test_support::temp_dir("svc-roundtrip"), Counter{});
    fill(store);
    const auto& f = test_support::processed_fixtures().front();
    for (ViewKind kind : interfaces::kAllViewKinds) {
        CHECK(store.get_view(f.story.story_id(), kind).dump() == interfaces::build_view_payload(kind, f.story, f.set).dump());
    }
    CHECK_THROWS_AS(store.get_view("unknown-story", ViewKind::Grid), NotFound);
    CHECK_THROWS_AS(store.get_view("../etc/passwd", ViewKind::Grid), NotFound);
    CHECK_THROWS_AS(store.get_questions("unknown-story"), NotFound);
}

TEST_CASE("records survive a restart bit-identically") {
    const auto root = test_support::temp_dir("svc-restart");
    std::string before;
    {
        Store store(root);
        const auto& f = test_support::processed_fixtures()[1];
        store.put_story(build_record(f.story, f.set, "2022-10-01T00:00:00Z"));
        before = to_json(store.get_story(f.story.story_id())).dump();
    }
    Store reopened(root);
    CHECK(to_json(reopened.get_story(story_ids()[1])).dump() == before);
    CHECK(read_text(root / "stories" / (story_ids()[1] + ".json")) == to_json(reopened.get_story(story_ids()[1])).dump(2) + "\n");
}

TEST_CASE("list_stories sorts by processed_at descending") {
    Store store(test_support::temp_dir("svc-list"), Counter{});
    fill(store);
    const auto list = store.list_stories();
    REQUIRE(list.size() == 3);
    CHECK(list[0].processed_at == "2022-10-03T12:00:00Z");
    CHECK(list[1].processed_at == "2022-10-02T12:00:00Z");
    CHECK(list[2].processed_at == "2022-10-01T12:00:00Z");
    CHECK(list[0].story_id == story_ids()[2]);
    CHECK(list[0].views.size() == 5);
    CHECK(list[0].source_count == 13);
}

TEST_CASE("overwrites are last-writer-wins with an audit entry") {
    Store store(test_support::temp_dir("svc-overwrite"), Counter{});
    fill(store);
    const auto& f = test_support::processed_fixtures().front();
    store.put_story(build_record(f.story, f.set, "2022-12-31T00:00:00Z"));
    CHECK(store.get_story(f.story.story_id()).processed_at == "2022-12-31T00:00:00Z");
    const std::string log = read_text(store.root() / "audit.log");
    CHECK(log.find("\"event\":\"overwrite\"") != std::string::npos);
    CHECK(log.find("\"replaced_processed_at\":\"2022-10-01T12:00:00Z\"") != std::string::npos);
}

TEST_CASE("questions files") {
    CHECK_THROWS_AS(questions_from_json(Json::parse(R"({"story_id": "s", "questions": ["a?", "b?"]})")), SchemaError);
    CHECK_THROWS_AS(questions_from_json(Json::parse(R"({"questions": ["a?", "b?", "c?", "d?"]})")), SchemaError);
    const auto q = questions_from_json(Json::parse(R"({"story_id": "s", "questions": ["a?", "b?", "c?", "d?"]})"));
    CHECK(q.questions.size() == 4);
    for (const auto& entry : std::filesystem::directory_iterator(test_support::fixtures_dir() / "questions")) {
        CHECK_NOTHROW(questions_from_json(Json::parse(corpus::read_file(entry.path()))));
    }
}

TEST_CASE("shuffled kinds are seeded permutations covering all orders") {
    std::map<std::vector<ViewKind>, int> counts;
    const std::set<ViewKind> triple(std::begin(kExerciseKinds), std::end(kExerciseKinds));
    for (std::uint64_t seed = 0; seed < 600; ++seed) {
        const auto kinds = shuffled_kinds(seed);
        CHECK(std::set<ViewKind>(kinds.begin(), kinds.end()) == triple);
        CHECK(kinds == shuffled_kinds(seed));
        ++counts[kinds];
    }
    REQUIRE(counts.size() == 6);
    for (const auto& [order, n] : counts) {
        CHECK(n > 60);
        CHECK(n < 140);
    }
}

TEST_CASE("start_exercise") {
    Store store(test_support::temp_dir("svc-start"), Counter{});
    fill(store);
    const auto ids = story_ids();
    const auto session = store.start_exercise("worker-1", ids, 42);
    REQUIRE(session.assignments.size() == 3);
    std::set<ViewKind> kinds;
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(session.assignments[i].story_id == ids[i]);
        kinds.insert(session.assignments[i].kind);
    }
    CHECK(kinds.size() == 3);
    CHECK(session.assignments[0].started_at.has_value());
    CHECK(session.status == SessionStatus::Open);
    CHECK(to_json(store.get_session(session.session_id)) == to_json(session));

    CHECK_THROWS_AS(store.start_exercise("w", {ids[0], ids[0], ids[1]}), InvalidRequest);
    CHECK_THROWS_AS(store.start_exercise("w", {ids[0], ids[1]}), InvalidRequest);
    CHECK_THROWS_AS(store.start_exercise("", ids), InvalidRequest);
    CHECK_THROWS_AS(store.start_exercise("w", {ids[0], ids[1], "nope"}), NotFound);

    // Different seeds may order the kinds differently.
    std::set<std::vector<ViewKind>> orders;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        std::vector<ViewKind> order;
        for (const auto& a : store.start_exercise("worker-2", ids, seed).assignments) {
            order.push_back(a.kind);
        }
        orders.insert(order);
    }
    CHECK(orders.size() > 1);
}

TEST_CASE("start_exercise needs the exercise views and questions") {
    Store store(test_support::temp_dir("svc-incomplete"));
    const auto& fx = test_support::processed_fixtures();
    for (const auto& f : fx) {
        store.put_story(build_record(f.story, f.set, "2022-10-01T00:00:00Z"));
    }
    CHECK_THROWS_AS(store.start_exercise("w", story_ids()), NotFound); // no questions yet
    for (const auto& id : story_ids()) {
        store.put_questions({id, {"a?", "b?", "c?", "d?"}});
    }
    auto broken = build_record(fx[0].story, fx[0].set, "2022-10-01T00:00:00Z");
    broken.views.erase(ViewKind::Headlines);
    broken.view_errors[ViewKind::Headlines] = {"IoError", "disk full"};
    store.put_story(broken);
    CHECK_THROWS_AS(store.start_exercise("w", story_ids()), ViewsIncomplete);
    CHECK_THROWS_AS(store.get_view(story_ids()[0], ViewKind::Headlines), ViewsIncomplete);
}

TEST_CASE("submit_exercise") {
    Store store(test_support::temp_dir("svc-submit"), Counter{});
    fill(store);
    const auto session = store.start_exercise("worker-9", story_ids(), 7);
    const auto id = session.session_id;

    CHECK_THROWS_AS(store.submit_exercise(id, 0, {"a", "b"}, {}), InvalidRequest);
    CHECK_THROWS_AS(store.submit_exercise(id, 3, {"a", "b", "c", "d"}, {}), InvalidRequest);
    CHECK_THROWS_AS(store.submit_exercise("missing", 0, {"a", "b", "c", "d"}, {}), NotFound);

    auto after = store.submit_exercise(id, 1, {"Rates went up.", "No answer", "", "  "}, {2, 1, 301});
    const auto& submission = *after.assignments[1].submission;
    CHECK(submission.answers[1] == "No answer");
    CHECK(submission.answers[3] == "  ");
    CHECK(submission.stats.duration_seconds == 301);
    CHECK(submission.words_shown > 0);
    CHECK(after.tab_switches == 1);
    CHECK(after.assignments[1].started_at.has_value());
    CHECK_THROWS_AS(store.submit_exercise(id, 1, {"a", "b", "c", "d"}, {}), AlreadySubmitted);

    store.submit_exercise(id, 0, {"a", "b", "c", "d"}, {0, 2, 200});
    after = store.submit_exercise(id, 2, {"a", "b", "c", "d"}, {1, 0, 250});
    CHECK(after.status == SessionStatus::Submitted);
    CHECK(after.tab_switches == 3);
    CHECK_THROWS_AS(store.submit_exercise(id, 2, {"a", "b", "c", "d"}, {}), SessionClosed);
    CHECK_THROWS_AS(store.submit_exercise(id, 0, {"a", "b", "c", "d"}, {}), SessionClosed);

    const auto rows = store.export_responses();
    REQUIRE(rows.size() == 12);
    std::size_t blanks = 0;
    for (const auto& r : rows) {
        blanks += r.is_blank ? 1 : 0;
        CHECK(r.participant_id == "worker-9");
    }
    CHECK(blanks == 3);
    const auto metrics = evalkit::aggregate(rows);
    CHECK(metrics.size() == 3);
}

TEST_CASE("persisted sessions keep the session invariant") {
    Store store(test_support::temp_dir("svc-persisted"), Counter{});
    fill(store);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        store.start_exercise("p" + std::to_string(seed), story_ids(), seed);
    }
    const auto sessions = store.list_sessions();
    CHECK(sessions.size() == 10);
    for (const auto& s : sessions) {
        std::set<ViewKind> kinds;
        std::set<std::string> stories;
        for (const auto& a : s.assignments) {
            kinds.insert(a.kind);
            stories.insert(a.story_id);
        }
        CHECK(kinds.size() == 3);
        CHECK(stories.size() == 3);
    }
    Json bad = to_json(sessions[0]);
    bad["assignments"][1]["interface_kind"] = bad["assignments"][0]["interface_kind"];
    CHECK_THROWS_AS(session_from_json(bad), SchemaError);
}

TEST_CASE("concurrent readers never see a partial record") {
    Store store(test_support::temp_dir("svc-concurrent"), Counter{});
    fill(store);
    const auto& f = test_support::processed_fixtures().front();
    std::atomic<bool> stop{false};
    std::atomic<int> reads{0};
    std::atomic<int> failures{0};
    std::vector<std::thread> readers;
    for (int r = 0; r < 3; ++r) {
        readers.emplace_back([&] {
            while (!stop) {
                try {
                    store.get_view(f.story.story_id(), ViewKind::Annotated);
                    ++reads;
                } catch (...) {
                    ++failures;
                }
            }
        });
    }
    std::vector<std::thread> writers;
    for (int w = 0; w < 2; ++w) {
        writers.emplace_back([&, w] {
            for (int i = 0; i < 15; ++i) {
                store.put_story(build_record(f.story, f.set, "2023-01-0" + std::to_string(w + 1) + "T00:00:00Z"));
            }
        });
    }
    for (auto& t : writers) t.join();
    stop = true;
    for (auto& t : readers) t.join();
    CHECK(failures == 0);
    CHECK(reads > 0);
    const auto processedAt = store.get_story(f.story.story_id()).processed_at;
    CHECK((processedAt == "2023-01-01T00:00:00Z" || processedAt == "2023-01-02T00:00:00Z"));

    // Distinct sessions submit independently.
    std::vector<std::string> ids;
    for (int i = 0; i < 4; ++i) {
        ids.push_back(store.start_exercise("c" + std::to_string(i), story_ids(), static_cast<std::uint64_t>(i)).session_id);
    }
    std::vector<std::thread> submitters;
    for (const auto& id : ids) {
        submitters.emplace_back([&store, id] {
            for (std::size_t a = 0; a < 3; ++a) {
                store.submit_exercise(id, a, {"w", "x", "y", "z"}, {});
            }
        });
    }
    for (auto& t : submitters) t.join();
    for (const auto& id : ids) {
        CHECK(store.get_session(id).status == SessionStatus::Submitted);
    }
}

TEST_CASE("visible word count") {
    CHECK(visible_word_count(Json::parse(R"({"text": "one two  three", "url": "a b c", "blocks": [{"headline": "four five"}]})")) == 5);
}

TEST_CASE("HTTP API") {
    Store store(test_support::temp_dir("svc-http"), Counter{});
    fill(store);
    HttpService http(store);
    const int port = http.bind_any_port("127.0.0.1");
    REQUIRE(port > 0);
    std::thread server([&] { http.listen_after_bind(); });
    http.wait_until_ready();
    httplib::Client client("127.0.0.1", port);
    const auto ids = story_ids();

    auto res = client.Get("/stories");
    REQUIRE(res);
    CHECK(res->status == 200);
    const Json stories = Json::parse(res->body);
    CHECK(stories.size() == 3);
    CHECK(stories[0]["story_id"] == ids[2]);

    res = client.Get("/stories/" + ids[0] + "/views/annotated");
    REQUIRE(res);
    CHECK(res->status == 200);
    CHECK(res->body == store.get_view(ids[0], ViewKind::Annotated).dump());
    CHECK(res->get_header_value("Content-Type") == "application/json");

    CHECK(client.Get("/stories/" + ids[0] + "/views/timeline")->status == 400);
    CHECK(client.Get("/stories/nope/views/grid")->status == 404);
    CHECK(Json::parse(client.Get("/stories/nope/views/grid")->body)["error"] == "NotFound");
    CHECK(client.Get("/stories/" + ids[0] + "/questions")->status == 200);
    CHECK(Json::parse(client.Get("/stories/" + ids[0] + "/questions")->body)["questions"].size() == 4);

    CHECK(client.Post("/sessions", "not json", "application/json")->status == 400);
    CHECK(client.Post("/sessions", R"({"participant_id": "x", "story_ids": ["a", "a", "b"]})", "application/json")->status == 400);
    const Json request = {{"participant_id", "web-1"}, {"story_ids", ids}, {"seed", 9}};
    res = client.Post("/sessions", request.dump(), "application/json");
    REQUIRE(res);
    CHECK(res->status == 201);
    const Json session = Json::parse(res->body);
    const std::string sid = session["session_id"];
    CHECK(session["assignments"].size() == 3);

    const Json answers = {{"answers", {"Because inflation peaked.", "No answer", "", "Stocks fell."}},
                          {"client_stats", {{"links_opened", 1}, {"tab_switches", 0}, {"duration_seconds", 280}}}};
    const std::string submitPath = "/sessions/" + sid + "/assignments/0/submit";
    CHECK(client.Post(submitPath, answers.dump(), "application/json")->status == 200);
    res = client.Post(submitPath, answers.dump(), "application/json");
    CHECK(res->status == 409);
    CHECK(Json::parse(res->body)["error"] == "AlreadySubmitted");
    CHECK(client.Post("/sessions/" + sid + "/assignments/x/submit", answers.dump(), "application/json")->status == 400);
    CHECK(client.Post("/sessions/" + sid + "/assignments/1/submit", answers.dump(), "application/json")->status == 200);
    CHECK(client.Post("/sessions/" + sid + "/assignments/2/submit", answers.dump(), "application/json")->status == 200);
    res = client.Post(submitPath, answers.dump(), "application/json");
    CHECK(Json::parse(res->body)["error"] == "SessionClosed");

    res = client.Get("/sessions/" + sid);
    CHECK(Json::parse(res->body)["status"] == "submitted");
    CHECK(client.Get("/sessions/unknown")->status == 404);

    res = client.Get("/export/responses");
    REQUIRE(res);
    const auto rows = evalkit::responses_from_json(Json::parse(res->body));
    CHECK(rows.size() == 12);
    res = client.Get("/export/responses?format=csv");
    CHECK(evalkit::responses_from_csv(res->body) == rows);

    CHECK(client.Get("/no/such/route")->status == 404);

    http.stop();
    server.join();
}
