#pragma once

#include "assembly/evalkit/evalkit.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

namespace test_support {

// Every participant reads three of five stories, one per interface. Session
// mean scores are normal with sd 0.5 around a per-interface mean, so the
// annotated/article gap of 0.75 is an effect of 1.5 sd.
inline std::vector<assembly::evalkit::ExerciseResponse> synthetic_cohort(std::size_t participants, unsigned seed,
                                                                        double annotatedMean = 1.75) {
    using assembly::evalkit::ExerciseResponse;
    const std::vector<std::string> kinds{"article", "headlines", "annotated"};
    const std::vector<double> means{1.0, 0.9, annotatedMean};
    std::mt19937 rng(seed);
    std::normal_distribution<double> noise(0.0, 0.5);
    std::vector<ExerciseResponse> out;
    for (std::size_t p = 0; p < participants; ++p) {
        std::vector<int> stories{1, 2, 3, 4, 5};
        std::shuffle(stories.begin(), stories.end(), rng);
        std::vector<std::size_t> order{0, 1, 2};
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t slot = 0; slot < 3; ++slot) {
            const std::size_t k = order[slot];
            const double mean = means[k] + noise(rng);
            int total = static_cast<int>(std::lround(4 * mean));
            total = std::clamp(total, 0, 16);
            for (std::size_t q = 0; q < 4; ++q) {
                ExerciseResponse r;
                r.participant_id = "p" + std::to_string(1000 + p);
                r.story_id = "s" + std::to_string(stories[slot]);
                r.interface_kind = kinds[k];
                r.question_index = q;
                const int share = total / 4 + (static_cast<int>(q) < total % 4 ? 1 : 0);
                r.answer_text = share > 0 ? "answer" : "No answer";
                r.is_blank = share == 0;
                for (int a = 1; a <= share; ++a) {
                    r.aspect_ids.insert(a);
                }
                r.links_opened = static_cast<std::size_t>(rng() % 4);
                r.words_shown = 200 + static_cast<std::size_t>(rng() % 800);
                r.duration_seconds = 200 + static_cast<std::size_t>(rng() % 300);
                out.push_back(std::move(r));
            }
            // Session statistics are shared by the session's rows.
            auto first = out.end() - 4;
            for (auto it = first + 1; it != out.end(); ++it) {
                it->links_opened = first->links_opened;
                it->words_shown = first->words_shown;
                it->duration_seconds = first->duration_seconds;
            }
        }
    }
    return out;
}

} // namespace test_support
