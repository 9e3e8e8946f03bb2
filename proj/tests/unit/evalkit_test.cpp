#include "assembly/error.hpp"
#include "assembly/evalkit/evalkit.hpp"

#include "../support/cohort.hpp"

#include <doctest.h>

#include <filesystem>
#include <random>

using namespace assembly;
using namespace assembly::evalkit;

namespace {

const std::filesystem::path kStudy = std::filesystem::path(ASSEMBLY_FIXTURES_DIR) / "study";

ExerciseResponse response(const std::string& participant, const std::string& kind, std::optional<int> aspects,
                          const std::string& story = "s1", std::size_t question = 0) {
    ExerciseResponse r;
    r.participant_id = participant;
    r.story_id = story;
    r.interface_kind = kind;
    r.question_index = question;
    r.is_blank = !aspects;
    r.answer_text = aspects ? "some answer" : "";
    for (int i = 1; aspects && i <= *aspects; ++i) {
        r.aspect_ids.insert(i);
    }
    return r;
}

// Straight loop over responses, no shared helpers.
InterfaceMetrics naive_metrics(const std::vector<ExerciseResponse>& rs) {
    InterfaceMetrics m;
    double total = 0;
    double buckets[4] = {0, 0, 0, 0};
    std::map<SessionKey, const ExerciseResponse*> sessions;
    for (const auto& r : rs) {
        const double s = r.is_blank ? 0 : static_cast<double>(r.aspect_ids.size());
        total += s;
        buckets[r.is_blank ? 0 : (s == 0 ? 1 : (s == 1 ? 2 : 3))] += 1;
        sessions.emplace(SessionKey{r.participant_id, r.interface_kind, r.story_id}, &r);
    }
    const double n = static_cast<double>(rs.size());
    m.score_mean = total / n;
    m.pct_no_ans = 100 * buckets[0] / n;
    m.pct_s0 = 100 * buckets[1] / n;
    m.pct_s1 = 100 * buckets[2] / n;
    m.pct_s2plus = 100 * buckets[3] / n;
    double links = 0, any = 0, words = 0, secs = 0;
    for (const auto& [key, r] : sessions) {
        links += static_cast<double>(r->links_opened);
        any += r->links_opened > 0 ? 1 : 0;
        words += static_cast<double>(r->words_shown);
        secs += static_cast<double>(r->duration_seconds);
    }
    const double k = static_cast<double>(sessions.size());
    m.links_mean = links / k;
    m.pct_any_link = 100 * any / k;
    m.words_mean = words / k;
    m.minutes_mean = secs / k / 60;
    return m;
}

} // namespace

TEST_CASE("score is the aspect count") {
    auto r = response("p", "article", 2);
    r.aspect_ids = {1, 3};
    CHECK(score(r) == 2);
    CHECK(score(response("p", "article", std::nullopt)) == 0);
    CHECK(score(response("p", "article", 0)) == 0);
}

TEST_CASE("aggregate example with disjoint buckets") {
    const auto m = aggregate_group({response("a", "x", 2, "s1", 0), response("a", "x", std::nullopt, "s1", 1),
                                    response("a", "x", 1, "s1", 2), response("a", "x", 3, "s1", 3)});
    CHECK(m.score_mean == doctest::Approx(1.5));
    CHECK(m.pct_no_ans == doctest::Approx(25));
    CHECK(m.pct_s0 == doctest::Approx(0));
    CHECK(m.pct_s1 == doctest::Approx(25));
    CHECK(m.pct_s2plus == doctest::Approx(50));

    const auto blanks = aggregate_group({response("a", "x", std::nullopt), response("b", "x", std::nullopt)});
    CHECK(blanks.score_mean == 0);
    CHECK(blanks.pct_no_ans == 100);

    const auto zero = aggregate_group({response("a", "x", 0)});
    CHECK(zero.pct_s0 == 100);
    CHECK(zero.pct_no_ans == 0);

    CHECK_THROWS_AS(aggregate_group({}), EmptyGroup);
    CHECK_THROWS_AS(aggregate({}), EmptyGroup);
}

TEST_CASE("six-participant fixture matches the hand-computed metrics") {
    const auto responses = load_responses(kStudy / "responses.json");
    REQUIRE(responses.size() == 72);
    check_aspects(responses, load_aspect_catalogs(kStudy / "aspects"));
    const auto metrics = aggregate(responses);
    REQUIRE(metrics.size() == 3);
    struct Expected {
        const char* kind;
        double values[9];
    };
    // Values from tests/oracles/study_fixture.py.
    const Expected expected[] = {
        {"annotated", {1.75, 0.0, 8.333333333333334, 25.0, 66.66666666666667, 1.3333333333333333, 66.66666666666667,
                       1003.3333333333334, 6.061111111111112}},
        {"article", {0.6666666666666666, 16.666666666666668, 29.166666666666668, 41.666666666666664, 12.5,
                     0.3333333333333333, 33.333333333333336, 793.3333333333334, 5.1194444444444445}},
        {"headlines", {0.4583333333333333, 29.166666666666668, 33.333333333333336, 29.166666666666668,
                       8.333333333333334, 2.5, 83.33333333333333, 249.16666666666666, 4.372222222222222}},
    };
    for (const auto& e : expected) {
        const auto& m = metrics.at(e.kind);
        const double got[] = {m.score_mean, m.pct_no_ans, m.pct_s0,       m.pct_s1,      m.pct_s2plus,
                              m.links_mean, m.pct_any_link, m.words_mean, m.minutes_mean};
        for (int i = 0; i < 9; ++i) {
            CHECK(got[i] == doctest::Approx(e.values[i]).epsilon(1e-12));
        }
        CHECK(m.sessions == 6);
        CHECK(m.responses == 24);
    }
}

TEST_CASE("fixture pairwise p-values match the oracle") {
    const auto p = pairwise_all(load_responses(kStudy / "responses.json"));
    CHECK(p.at({"annotated", "article"}) == doctest::Approx(0.00012273138569293143).epsilon(1e-6));
    CHECK(p.at({"annotated", "headlines"}) == doctest::Approx(2.5444682679659917e-5).epsilon(1e-6));
    CHECK(p.at({"article", "headlines"}) == doctest::Approx(0.25315665571911796).epsilon(1e-6));
}

TEST_CASE("study data parsing") {
    SUBCASE("blank detection") {
        CHECK(is_blank_answer(""));
        CHECK(is_blank_answer("  No Answer \n"));
        CHECK_FALSE(is_blank_answer("no answers here"));
        const auto rows = responses_from_json(Json::parse(
            R"({"responses": [{"participant_id": "p", "story_id": "s", "interface_kind": "article",
                "question_index": 0, "answer_text": "No answer"}]})"));
        CHECK(rows[0].is_blank);
    }
    SUBCASE("blank answers cannot carry aspects") {
        CHECK_THROWS_AS(responses_from_json(Json::parse(
                            R"([{"participant_id": "p", "story_id": "s", "interface_kind": "article",
                                 "question_index": 0, "answer_text": "", "aspect_ids": [1]}])")),
                        SchemaError);
    }
    SUBCASE("missing fields") {
        CHECK_THROWS_AS(responses_from_json(Json::parse(R"([{"participant_id": "p"}])")), SchemaError);
        CHECK_THROWS_AS(responses_from_csv("participant_id,story_id\np,s\n"), SchemaError);
    }
    SUBCASE("csv round trip with quoting") {
        auto rows = load_responses(kStudy / "responses.json");
        rows[0].answer_text = "commas, \"quotes\"\nand a newline";
        rows[1].prediction = PredictionCategory::Hypothetical;
        CHECK(responses_from_csv(to_csv(rows)) == rows);
        CHECK(responses_from_json(to_json(rows)) == rows);
    }
    SUBCASE("csv minimal columns") {
        const auto rows = responses_from_csv(
            "participant_id,story_id,interface_kind,question_index,answer_text,aspect_ids\r\n"
            "p1,s1,annotated,2,\"Rates, mostly\",1;4\r\n"
            "p1,s1,annotated,3,,\r\n");
        REQUIRE(rows.size() == 2);
        CHECK(rows[0].aspect_ids == std::set<int>{1, 4});
        CHECK(rows[0].answer_text == "Rates, mostly");
        CHECK(rows[1].is_blank);
        CHECK_THROWS_AS(responses_from_csv("participant_id,story_id,interface_kind,question_index,answer_text\n"
                                           "p,s,k,x,a\n"),
                        SchemaError);
    }
    SUBCASE("session statistics must agree") {
        auto a = response("p", "article", 1, "s1", 0);
        auto b = response("p", "article", 1, "s1", 1);
        b.links_opened = 2;
        CHECK_THROWS_AS(aggregate({a, b}), SchemaError);
    }
    SUBCASE("unknown aspect ids") {
        auto rows = load_responses(kStudy / "responses.json");
        rows[0].aspect_ids = {9};
        CHECK_THROWS_AS(check_aspects(rows, load_aspect_catalogs(kStudy / "aspects")), SchemaError);
        CHECK_THROWS_AS(load_aspect_catalogs(kStudy / "missing"), IoError);
    }
}

TEST_CASE("bucket percentages and oracle equivalence on random fixtures") {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<ExerciseResponse> rs;
        const std::size_t sessions = 1 + rng() % 6;
        for (std::size_t s = 0; s < sessions; ++s) {
            const std::size_t links = rng() % 3;
            const std::size_t words = rng() % 1000;
            const std::size_t secs = rng() % 600;
            const std::size_t answers = 1 + rng() % 4;
            for (std::size_t q = 0; q < answers; ++q) {
                const int pick = static_cast<int>(rng() % 6);
                auto r = response("p" + std::to_string(s), "k", pick == 0 ? std::nullopt : std::optional<int>(pick - 1),
                                  "s" + std::to_string(s), q);
                r.links_opened = links;
                r.words_shown = words;
                r.duration_seconds = secs;
                rs.push_back(r);
            }
        }
        const auto m = aggregate_group(rs);
        CHECK(std::abs(m.pct_no_ans + m.pct_s0 + m.pct_s1 + m.pct_s2plus - 100) <= 0.1);
        CHECK(m.score_mean >= 0);
        CHECK(m.score_mean <= 4);
        const auto ref = naive_metrics(rs);
        CHECK(m.score_mean == doctest::Approx(ref.score_mean));
        CHECK(m.pct_no_ans == doctest::Approx(ref.pct_no_ans));
        CHECK(m.pct_s0 == doctest::Approx(ref.pct_s0));
        CHECK(m.pct_s1 == doctest::Approx(ref.pct_s1));
        CHECK(m.pct_s2plus == doctest::Approx(ref.pct_s2plus));
        CHECK(m.links_mean == doctest::Approx(ref.links_mean));
        CHECK(m.pct_any_link == doctest::Approx(ref.pct_any_link));
        CHECK(m.words_mean == doctest::Approx(ref.words_mean));
        CHECK(m.minutes_mean == doctest::Approx(ref.minutes_mean));
    }
}

TEST_CASE("Welch test against the high-precision oracle") {
    // tests/oracles/welch_oracle.py
    const auto summary = welch_from_summary(19.8, 5.2, 21, 23.4, 4.9, 19);
    CHECK(std::abs(summary.p - 0.030067254539613445942) < 1e-6);
    CHECK(summary.t == doctest::Approx(-2.2538315755238271445).epsilon(1e-12));
    CHECK(summary.df == doctest::Approx(37.928854093037987028).epsilon(1e-12));

    const auto sample = welch_test({0.25, 1.5, 0.75, 1.0, 2.0, 0.5, 1.25}, {1.75, 2.5, 1.0, 3.0, 2.25, 1.5});
    CHECK(std::abs(sample.p - 0.027665882312510989032) < 1e-6);
    CHECK(sample.df == doctest::Approx(9.811795051735267569).epsilon(1e-12));
}

TEST_CASE("Welch test edge cases") {
    CHECK(pairwise_test({1, 2, 3, 4}, {1, 2, 3, 4}) == 1.0);
    CHECK(pairwise_test({2, 2, 2}, {2, 2}) == 1.0);
    CHECK(pairwise_test({2, 2, 2}, {3, 3}) == 0.0);
    std::vector<double> a;
    std::vector<double> b;
    for (int i = 0; i < 30; ++i) {
        a.push_back(i % 2 ? 0.1 : -0.1);
        b.push_back(10 + (i % 2 ? 0.1 : -0.1));
    }
    CHECK(pairwise_test(a, b) < 1e-6);
    CHECK_THROWS_AS(pairwise_test({1}, {1, 2}), InsufficientData);
    CHECK_THROWS_AS(pairwise_test({1, 2}, {}), InsufficientData);
}

TEST_CASE("Welch test is symmetric") {
    std::mt19937 rng(17);
    std::normal_distribution<double> d(0, 1);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> a(2 + rng() % 20);
        std::vector<double> b(2 + rng() % 20);
        for (auto& x : a) x = d(rng);
        for (auto& x : b) x = d(rng) + 0.5;
        CHECK(std::abs(pairwise_test(a, b) - pairwise_test(b, a)) <= 1e-12);
    }
}

TEST_CASE("participant bootstrap") {
    const auto rs = load_responses(kStudy / "responses.json");
    const auto full = pairwise_all(rs);
    BootstrapOptions options;
    options.seed = 3;
    const auto result = bootstrap_participants(rs, {6, 4}, options);
    for (const auto& [pair, p] : full) {
        CHECK(result.at(6).at(pair) == (p < 0.05 ? 1.0 : 0.0));
    }
    options.seed = 4;
    CHECK(bootstrap_participants(rs, {6}, options).at(6) == result.at(6));
    for (const auto& [pair, f] : result.at(4)) {
        CHECK(f >= 0);
        CHECK(f <= 1);
    }
    options.seed = 3;
    CHECK(bootstrap_participants(rs, {6, 4}, options) == result);
    CHECK_THROWS_AS(bootstrap_participants(rs, {7}, options), SizeTooLarge);
    CHECK_THROWS_AS(bootstrap_participants(rs, {0}, options), SizeTooLarge);

    options.with_replacement = true;
    const auto replaced = bootstrap_participants(rs, {6, 12}, options);
    CHECK(replaced.size() == 2);
    CHECK(bootstrap_participants(rs, {6, 12}, options) == replaced);

    CHECK(sub_seed(1, 5, 0) != sub_seed(1, 5, 1));
    CHECK(sub_seed(1, 5, 0) != sub_seed(1, 10, 0));
    CHECK(sub_seed(1, 5, 0) == sub_seed(1, 5, 0));
    CHECK(default_bootstrap_sizes().size() == 19);
}

TEST_CASE("synthetic cohort with a 1.5 sd effect") {
    const auto cohort = test_support::synthetic_cohort(95, 11);
    BootstrapOptions options;
    options.seed = 7;
    const auto sizes = default_bootstrap_sizes();
    const auto curve = bootstrap_participants(cohort, sizes, options);
    REQUIRE(curve.size() == 19);
    const PairKey contrast{"annotated", "article"};
    CHECK(curve.at(60).at(contrast) >= 0.9);
    std::vector<double> x;
    std::vector<double> y;
    for (const auto& [size, row] : curve) {
        x.push_back(static_cast<double>(size));
        y.push_back(row.at(contrast));
    }
    CHECK(spearman(x, y) > 0);
}

TEST_CASE("story bootstrap enumerates every subset") {
    const auto rs = load_responses(kStudy / "responses.json");
    const auto four = bootstrap_stories(rs, 4);
    CHECK(four.subsets == 5);
    const auto three = bootstrap_stories(rs, 3);
    CHECK(three.subsets == 10);
    const auto all = bootstrap_stories(rs, 5);
    CHECK(all.subsets == 1);
    CHECK(all.fraction == (pairwise_all(rs).at({"annotated", "article"}) < 0.05 ? 1.0 : 0.0));
    CHECK_THROWS_AS(bootstrap_stories(rs, 0), InvalidRequest);
    CHECK_THROWS_AS(bootstrap_stories(rs, 6), InvalidRequest);

    // Recount keep=4 by dropping each story in turn.
    std::size_t significant = 0;
    for (const std::string dropped : {"s1", "s2", "s3", "s4", "s5"}) {
        std::vector<ExerciseResponse> subset;
        for (const auto& r : rs) {
            if (r.story_id != dropped) subset.push_back(r);
        }
        auto groups = scores_by_interface(subset);
        if (groups["annotated"].size() >= 2 && groups["article"].size() >= 2
            && pairwise_test(groups["annotated"], groups["article"]) < 0.05) {
            ++significant;
        }
    }
    CHECK(four.significant == significant);
    CHECK(four.fraction == doctest::Approx(static_cast<double>(significant) / 5));
}

TEST_CASE("prediction breakdown") {
    using P = PredictionCategory;
    const auto b = prediction_breakdown({P::OneSided, P::Hypothetical, P::TwoSided, P::TwoSided});
    CHECK(b.pct_one_sided == 25);
    CHECK(b.pct_hypothetical == 25);
    CHECK(b.pct_two_sided == 50);
    const auto one = prediction_breakdown({P::TwoSided, P::TwoSided});
    CHECK(one.pct_two_sided == 100);
    CHECK(one.pct_one_sided == 0);
    CHECK_THROWS_AS(prediction_breakdown({}), EmptyInput);
    CHECK_THROWS_AS(parse_prediction_category("maybe"), SchemaError);
}

TEST_CASE("spearman correlation") {
    CHECK(spearman({1, 2, 3}, {10, 20, 30}) == doctest::Approx(1));
    CHECK(spearman({1, 2, 3}, {3, 2, 1}) == doctest::Approx(-1));
    // scipy.stats.spearmanr
    CHECK(spearman({1, 2, 3, 4, 5}, {1, 1, 2, 2, 3}) == doctest::Approx(0.9486832980505138).epsilon(1e-12));
    CHECK(spearman({3, 1, 4, 1, 5, 9, 2, 6}, {2, 7, 1, 8, 2, 8, 1, 8})
          == doctest::Approx(0.19885368120992467).epsilon(1e-12));
    CHECK(spearman({1, 2, 3}, {4, 4, 4}) == 0);
}

TEST_CASE("evaluation report") {
    const auto rs = load_responses(kStudy / "responses.json");
    EvaluationOptions options;
    options.bootstrap.seed = 7;
    const auto report = evaluate(rs, options);
    CHECK(report.significance.bootstrap_participants.size() == 1); // only size 5 fits 6 participants
    CHECK(report.significance.bootstrap_stories.size() == 2);
    CHECK(report.predictions.at("annotated").pct_two_sided == 75);
    CHECK(report.predictions.at("article").pct_one_sided == 50);
    const Json json = to_json(report);
    CHECK(json["significance"]["seed"] == 7);
    CHECK(json["significance"]["bootstrap_stories"]["4"]["subsets"] == 5);
    CHECK(json["metrics"]["annotated"]["score_mean"] == 1.75);
    CHECK(to_json(evaluate(rs, options)).dump() == json.dump());
    const std::string tables = format_tables(report);
    CHECK(tables.find("Annotated Article") != std::string::npos);
    CHECK(tables.find("%NoAns") != std::string::npos);
    CHECK(tables.find("%2-side") != std::string::npos);
}
