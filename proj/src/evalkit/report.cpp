#include "assembly/evalkit/evalkit.hpp"

#include "assembly/error.hpp"

#include <cstdio>

namespace assembly::evalkit {

namespace {

std::string fixed(double value, int decimals) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.*f", decimals, value);
    return buffer;
}

std::string pad(const std::string& text, std::size_t width, bool left = false) {
    if (text.size() >= width) {
        return text;
    }
    const std::string fill(width - text.size(), ' ');
    return left ? text + fill : fill + text;
}

} // namespace

std::string interface_label(const std::string& kind) {
    static const std::map<std::string, std::string> labels = {
        {"article", "News Article"},     {"headlines", "Headlines"}, {"annotated", "Annotated Article"},
        {"recomposed", "Recomposed Article"}, {"grid", "Question Grid"},
    };
    const auto it = labels.find(kind);
    return it == labels.end() ? kind : it->second;
}

EvaluationReport evaluate(const std::vector<ExerciseResponse>& responses, const EvaluationOptions& options) {
    EvaluationReport report;
    report.metrics = aggregate(responses);

    std::map<std::string, std::vector<PredictionCategory>> labels;
    for (const auto& r : responses) {
        if (r.prediction) {
            labels[r.interface_kind].push_back(*r.prediction);
        }
    }
    for (const auto& [kind, list] : labels) {
        report.predictions[kind] = prediction_breakdown(list);
    }

    auto& sig = report.significance;
    sig.seed = options.bootstrap.seed;
    const auto groups = scores_by_interface(responses, options.bootstrap.unit);
    for (auto a = groups.begin(); a != groups.end(); ++a) {
        for (auto b = std::next(a); b != groups.end(); ++b) {
            if (a->second.size() >= 2 && b->second.size() >= 2) {
                sig.pairwise[{a->first, b->first}] = pairwise_test(a->second, b->second);
            }
        }
    }

    std::set<std::string> participants;
    std::set<std::string> stories;
    for (const auto& r : responses) {
        participants.insert(r.participant_id);
        stories.insert(r.story_id);
    }
    std::vector<std::size_t> sizes;
    for (std::size_t size : options.sizes) {
        if (size > 0 && (options.bootstrap.with_replacement || size <= participants.size())) {
            sizes.push_back(size);
        }
    }
    sig.bootstrap_participants = bootstrap_participants(responses, sizes, options.bootstrap);

    std::vector<std::size_t> keeps = options.story_keeps;
    if (keeps.empty()) {
        for (std::size_t drop : {1, 2}) {
            if (stories.size() > drop) {
                keeps.push_back(stories.size() - drop);
            }
        }
    }
    for (std::size_t keep : keeps) {
        sig.bootstrap_stories[keep] =
            bootstrap_stories(responses, keep, options.contrast, options.bootstrap.alpha, options.bootstrap.unit);
    }
    return report;
}

Json to_json(const InterfaceMetrics& m) {
    Json out = Json::object();
    out["score_mean"] = m.score_mean;
    out["pct_no_ans"] = m.pct_no_ans;
    out["pct_s0"] = m.pct_s0;
    out["pct_s1"] = m.pct_s1;
    out["pct_s2plus"] = m.pct_s2plus;
    out["links_mean"] = m.links_mean;
    out["pct_any_link"] = m.pct_any_link;
    out["words_mean"] = m.words_mean;
    out["minutes_mean"] = m.minutes_mean;
    out["responses"] = m.responses;
    out["sessions"] = m.sessions;
    return out;
}

Json to_json(const SignificanceReport& report) {
    Json out = Json::object();
    out["seed"] = report.seed;
    Json pairwise = Json::object();
    for (const auto& [pair, p] : report.pairwise) {
        pairwise[pair_name(pair)] = p;
    }
    out["pairwise"] = std::move(pairwise);
    Json participants = Json::object();
    for (const auto& [size, row] : report.bootstrap_participants) {
        Json fractions = Json::object();
        for (const auto& [pair, fraction] : row) {
            fractions[pair_name(pair)] = fraction;
        }
        participants[std::to_string(size)] = std::move(fractions);
    }
    out["bootstrap_participants"] = std::move(participants);
    Json storiesJson = Json::object();
    for (const auto& [keep, result] : report.bootstrap_stories) {
        storiesJson[std::to_string(keep)] = {
            {"subsets", result.subsets}, {"significant", result.significant}, {"fraction", result.fraction}};
    }
    out["bootstrap_stories"] = std::move(storiesJson);
    return out;
}

Json to_json(const EvaluationReport& report) {
    Json out = Json::object();
    Json metrics = Json::object();
    for (const auto& [kind, m] : report.metrics) {
        metrics[kind] = to_json(m);
    }
    out["metrics"] = std::move(metrics);
    Json predictions = Json::object();
    for (const auto& [kind, p] : report.predictions) {
        predictions[kind] = {{"pct_one_sided", p.pct_one_sided},
                             {"pct_hypothetical", p.pct_hypothetical},
                             {"pct_two_sided", p.pct_two_sided}};
    }
    out["predictions"] = std::move(predictions);
    out["significance"] = to_json(report.significance);
    return out;
}

std::string format_tables(const EvaluationReport& report) {
    std::string out;
    out += pad("Interface", 20, true) + pad("Score", 7) + pad("%NoAns", 8) + pad("%S0", 7) + pad("%S1", 7)
           + pad("%S2+", 7) + pad("#Links", 8) + pad("%AnyL", 7) + pad("#Words", 8) + pad("#Min", 7) + "\n";
    for (const auto& [kind, m] : report.metrics) {
        out += pad(interface_label(kind), 20, true) + pad(fixed(m.score_mean, 2), 7) + pad(fixed(m.pct_no_ans, 1), 8)
               + pad(fixed(m.pct_s0, 1), 7) + pad(fixed(m.pct_s1, 1), 7) + pad(fixed(m.pct_s2plus, 1), 7)
               + pad(fixed(m.links_mean, 2), 8) + pad(fixed(m.pct_any_link, 1), 7) + pad(fixed(m.words_mean, 0), 8)
               + pad(fixed(m.minutes_mean, 2), 7) + "\n";
    }
    if (!report.predictions.empty()) {
        out += "\n" + pad("Interface", 20, true) + pad("%1-side", 9) + pad("%Hypo", 8) + pad("%2-side", 9) + "\n";
        for (const auto& [kind, p] : report.predictions) {
            out += pad(interface_label(kind), 20, true) + pad(fixed(p.pct_one_sided, 1), 9)
                   + pad(fixed(p.pct_hypothetical, 1), 8) + pad(fixed(p.pct_two_sided, 1), 9) + "\n";
        }
    }
    if (!report.significance.pairwise.empty()) {
        out += "\nPair-wise Welch t-test on score (p):\n";
        for (const auto& [pair, p] : report.significance.pairwise) {
            out += "  " + pad(interface_label(pair.first) + " vs " + interface_label(pair.second), 42, true)
                   + fixed(p, 4) + (p < 0.05 ? " *" : "") + "\n";
        }
    }
    for (const auto& [keep, result] : report.significance.bootstrap_stories) {
        out += "Story subsets keeping " + std::to_string(keep) + ": " + std::to_string(result.significant) + "/"
               + std::to_string(result.subsets) + " significant\n";
    }
    return out;
}

} // namespace assembly::evalkit
