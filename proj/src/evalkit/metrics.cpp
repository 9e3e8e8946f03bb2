#include "assembly/evalkit/evalkit.hpp"

#include "assembly/error.hpp"

namespace assembly::evalkit {

int score(const ExerciseResponse& response) {
    return response.is_blank ? 0 : static_cast<int>(response.aspect_ids.size());
}

namespace {

struct SessionStats {
    std::size_t links = 0;
    std::size_t words = 0;
    std::size_t seconds = 0;
};

std::map<SessionKey, SessionStats> session_stats(const std::vector<ExerciseResponse>& responses) {
    std::map<SessionKey, SessionStats> sessions;
    for (const auto& r : responses) {
        const SessionKey key{r.participant_id, r.interface_kind, r.story_id};
        const SessionStats stats{r.links_opened, r.words_shown, r.duration_seconds};
        const auto [it, inserted] = sessions.emplace(key, stats);
        if (!inserted
            && (it->second.links != stats.links || it->second.words != stats.words
                || it->second.seconds != stats.seconds)) {
            throw SchemaError("session " + r.participant_id + "/" + r.interface_kind + "/" + r.story_id
                              + ": rows disagree on links_opened, words_shown or duration_seconds");
        }
    }
    return sessions;
}

} // namespace

InterfaceMetrics aggregate_group(const std::vector<ExerciseResponse>& group) {
    if (group.empty()) {
        throw EmptyGroup("no responses for this interface");
    }
    InterfaceMetrics m;
    std::size_t noAns = 0;
    std::size_t s0 = 0;
    std::size_t s1 = 0;
    std::size_t s2 = 0;
    long long total = 0;
    for (const auto& r : group) {
        const int s = score(r);
        total += s;
        if (r.is_blank) {
            ++noAns;
        } else if (s == 0) {
            ++s0;
        } else if (s == 1) {
            ++s1;
        } else {
            ++s2;
        }
    }
    const double n = static_cast<double>(group.size());
    m.responses = group.size();
    m.score_mean = static_cast<double>(total) / n;
    m.pct_no_ans = 100.0 * static_cast<double>(noAns) / n;
    m.pct_s0 = 100.0 * static_cast<double>(s0) / n;
    m.pct_s1 = 100.0 * static_cast<double>(s1) / n;
    m.pct_s2plus = 100.0 * static_cast<double>(s2) / n;

    const auto sessions = session_stats(group);
    double links = 0;
    double words = 0;
    double seconds = 0;
    std::size_t anyLink = 0;
    for (const auto& [key, stats] : sessions) {
        links += static_cast<double>(stats.links);
        words += static_cast<double>(stats.words);
        seconds += static_cast<double>(stats.seconds);
        anyLink += stats.links > 0 ? 1 : 0;
    }
    const double k = static_cast<double>(sessions.size());
    m.sessions = sessions.size();
    m.links_mean = links / k;
    m.pct_any_link = 100.0 * static_cast<double>(anyLink) / k;
    m.words_mean = words / k;
    m.minutes_mean = seconds / k / 60.0;
    return m;
}

std::map<std::string, InterfaceMetrics> aggregate(const std::vector<ExerciseResponse>& responses) {
    if (responses.empty()) {
        throw EmptyGroup("no responses");
    }
    std::map<std::string, std::vector<ExerciseResponse>> groups;
    for (const auto& r : responses) {
        groups[r.interface_kind].push_back(r);
    }
    std::map<std::string, InterfaceMetrics> out;
    for (const auto& [kind, group] : groups) {
        out.emplace(kind, aggregate_group(group));
    }
    return out;
}

PredictionBreakdown prediction_breakdown(const std::vector<PredictionCategory>& labels) {
    if (labels.empty()) {
        throw EmptyInput("no labeled predictions");
    }
    std::size_t counts[3] = {0, 0, 0};
    for (auto label : labels) {
        ++counts[static_cast<int>(label)];
    }
    const double n = static_cast<double>(labels.size());
    return {100.0 * static_cast<double>(counts[0]) / n, 100.0 * static_cast<double>(counts[1]) / n,
            100.0 * static_cast<double>(counts[2]) / n};
}

std::map<std::string, std::vector<double>> scores_by_interface(const std::vector<ExerciseResponse>& responses,
                                                               TestUnit unit) {
    std::map<std::string, std::vector<double>> out;
    if (unit == TestUnit::Response) {
        for (const auto& r : responses) {
            out[r.interface_kind].push_back(score(r));
        }
        return out;
    }
    std::map<SessionKey, std::pair<double, std::size_t>> sessions;
    for (const auto& r : responses) {
        auto& [sum, count] = sessions[{r.participant_id, r.interface_kind, r.story_id}];
        sum += score(r);
        ++count;
    }
    for (const auto& [key, value] : sessions) {
        out[key.interface_kind].push_back(value.first / static_cast<double>(value.second));
    }
    return out;
}

} // namespace assembly::evalkit
