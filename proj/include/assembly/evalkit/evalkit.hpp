#pragma once

#include "assembly/json.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace assembly::evalkit {

enum class PredictionCategory { OneSided, Hypothetical, TwoSided };

const char* to_string(PredictionCategory category);
PredictionCategory parse_prediction_category(const std::string& name);

struct ExerciseResponse {
    std::string participant_id;
    std::string story_id;
    std::string interface_kind;
    std::size_t question_index = 0;
    std::string answer_text;
    bool is_blank = false;
    std::set<int> aspect_ids;
    std::size_t links_opened = 0;
    std::size_t words_shown = 0;
    std::size_t duration_seconds = 0;
    // Only set on answers to prediction questions.
    std::optional<PredictionCategory> prediction;

    bool operator==(const ExerciseResponse&) const = default;
};

// Empty after trimming, or "No answer" in any case.
bool is_blank_answer(const std::string& text);

// Rows of a study file. JSON is an array of objects (or {"responses": [...]});
// CSV has a header row naming the fields and aspect_ids separated by ';'.
// is_blank is derived from answer_text when absent. A blank answer carrying
// aspects is a SchemaError.
std::vector<ExerciseResponse> responses_from_json(const Json& doc);
std::vector<ExerciseResponse> responses_from_csv(const std::string& text);
std::vector<ExerciseResponse> load_responses(const std::filesystem::path& path);

Json to_json(const ExerciseResponse& response);
Json to_json(const std::vector<ExerciseResponse>& responses);
std::string to_csv(const std::vector<ExerciseResponse>& responses);

struct Aspect {
    int aspect_id = 0;
    std::string description;
};

// Catalog files in a directory: {"story_id", "question_index", "aspects": [...]}.
using AspectCatalog = std::map<std::pair<std::string, std::size_t>, std::vector<Aspect>>;
AspectCatalog load_aspect_catalogs(const std::filesystem::path& dir);

// SchemaError when a response names an aspect missing from its catalog entry.
// Responses whose (story, question) has no catalog are left alone.
void check_aspects(const std::vector<ExerciseResponse>& responses, const AspectCatalog& catalog);

int score(const ExerciseResponse& response);

struct InterfaceMetrics {
    double score_mean = 0;
    double pct_no_ans = 0;
    double pct_s0 = 0;
    double pct_s1 = 0;
    double pct_s2plus = 0;
    double links_mean = 0;
    double pct_any_link = 0;
    double words_mean = 0;
    double minutes_mean = 0;
    std::size_t responses = 0;
    std::size_t sessions = 0;
};

// A session is one participant's exercise with one interface on one story.
// links_opened, words_shown and duration_seconds describe the session and
// must agree across its rows.
struct SessionKey {
    std::string participant_id;
    std::string interface_kind;
    std::string story_id;
    auto operator<=>(const SessionKey&) const = default;
};

// Per-interface metrics, keyed by interface_kind. Score and bucket columns
// are over responses, the rest over sessions. EmptyGroup when a requested
// kind has no responses.
std::map<std::string, InterfaceMetrics> aggregate(const std::vector<ExerciseResponse>& responses);
InterfaceMetrics aggregate_group(const std::vector<ExerciseResponse>& group);

struct WelchResult {
    double t = 0;
    double df = 0;
    double p = 1;
};

// Two-sided Welch unequal-variance t-test. Both groups constant and equal
// gives p = 1; constant and different gives p = 0. InsufficientData when a
// group has fewer than two observations.
WelchResult welch_test(const std::vector<double>& a, const std::vector<double>& b);
WelchResult welch_from_summary(double meanA, double sdA, std::size_t nA, double meanB, double sdB, std::size_t nB);
double pairwise_test(const std::vector<double>& a, const std::vector<double>& b);

// Observations fed to the tests: mean score per session (default) or every
// response score.
enum class TestUnit { Session, Response };

std::map<std::string, std::vector<double>> scores_by_interface(const std::vector<ExerciseResponse>& responses,
                                                               TestUnit unit = TestUnit::Session);

// Unordered interface pairs as "a|b" with a < b.
using PairKey = std::pair<std::string, std::string>;
std::string pair_name(const PairKey& pair);

std::map<PairKey, double> pairwise_all(const std::vector<ExerciseResponse>& responses,
                                       TestUnit unit = TestUnit::Session);

struct BootstrapOptions {
    std::size_t resamples = 40;
    double alpha = 0.05;
    std::uint64_t seed = 0;
    bool with_replacement = false;
    TestUnit unit = TestUnit::Session;
};

// Deterministic 64-bit seed for one (seed, size, iteration) draw.
std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t size, std::uint64_t iteration);

// size -> pair -> fraction of resamples with p < alpha. A pair whose groups
// are too small in a resample counts as not significant. SizeTooLarge when a
// size exceeds the participant count (without replacement) or is zero.
std::map<std::size_t, std::map<PairKey, double>>
bootstrap_participants(const std::vector<ExerciseResponse>& responses, const std::vector<std::size_t>& sizes,
                       const BootstrapOptions& options);

struct StoryBootstrap {
    std::size_t keep = 0;
    std::size_t subsets = 0;
    std::size_t significant = 0;
    double fraction = 0;
};

// Every keep-sized subset of the stories, testing `contrast` on each.
// InvalidRequest unless 1 <= keep <= story count.
StoryBootstrap bootstrap_stories(const std::vector<ExerciseResponse>& responses, std::size_t keep,
                                 const PairKey& contrast = {"annotated", "article"}, double alpha = 0.05,
                                 TestUnit unit = TestUnit::Session);

struct PredictionBreakdown {
    double pct_one_sided = 0;
    double pct_hypothetical = 0;
    double pct_two_sided = 0;
};

PredictionBreakdown prediction_breakdown(const std::vector<PredictionCategory>& labels);

// Average-rank Spearman correlation. 0 when either side is constant.
double spearman(const std::vector<double>& x, const std::vector<double>& y);

// Sizes 5, 10, ..., 95.
std::vector<std::size_t> default_bootstrap_sizes();

struct SignificanceReport {
    std::map<PairKey, double> pairwise;
    std::map<std::size_t, std::map<PairKey, double>> bootstrap_participants;
    std::map<std::size_t, StoryBootstrap> bootstrap_stories;
    std::uint64_t seed = 0;
};

struct EvaluationReport {
    std::map<std::string, InterfaceMetrics> metrics;
    std::map<std::string, PredictionBreakdown> predictions;
    SignificanceReport significance;
};

struct EvaluationOptions {
    BootstrapOptions bootstrap;
    // Sizes above the participant count are skipped.
    std::vector<std::size_t> sizes = default_bootstrap_sizes();
    // Story subset sizes; defaults to n-1 and n-2 of n stories.
    std::vector<std::size_t> story_keeps;
    PairKey contrast{"annotated", "article"};
};

EvaluationReport evaluate(const std::vector<ExerciseResponse>& responses, const EvaluationOptions& options);

Json to_json(const InterfaceMetrics& metrics);
Json to_json(const SignificanceReport& report);
Json to_json(const EvaluationReport& report);

// Plain-text tables: interface metrics, prediction categories, pairwise p.
std::string format_tables(const EvaluationReport& report);

// Display label of an interface kind ("annotated" -> "Annotated Article").
std::string interface_label(const std::string& kind);

} // namespace assembly::evalkit
