#include "assembly/evalkit/evalkit.hpp"

#include "assembly/error.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace assembly::evalkit {

namespace {

struct Summary {
    double mean = 0;
    double variance = 0; // sample variance
    std::size_t n = 0;
};

Summary summarize(const std::vector<double>& xs) {
    Summary s;
    s.n = xs.size();
    double sum = 0;
    for (double x : xs) {
        sum += x;
    }
    s.mean = sum / static_cast<double>(s.n);
    double sq = 0;
    for (double x : xs) {
        sq += (x - s.mean) * (x - s.mean);
    }
    s.variance = sq / static_cast<double>(s.n - 1);
    return s;
}

WelchResult welch(const Summary& a, const Summary& b) {
    if (a.n < 2 || b.n < 2) {
        throw InsufficientData("Welch test needs at least two observations per group (got "
                               + std::to_string(a.n) + " and " + std::to_string(b.n) + ")");
    }
    const double va = a.variance / static_cast<double>(a.n);
    const double vb = b.variance / static_cast<double>(b.n);
    const double se2 = va + vb;
    WelchResult r;
    if (se2 == 0.0) {
        r.df = static_cast<double>(a.n + b.n - 2);
        if (a.mean == b.mean) {
            r.t = 0;
            r.p = 1;
        } else {
            r.t = a.mean > b.mean ? INFINITY : -INFINITY;
            r.p = 0;
        }
        return r;
    }
    r.t = (a.mean - b.mean) / std::sqrt(se2);
    r.df = se2 * se2 / (va * va / static_cast<double>(a.n - 1) + vb * vb / static_cast<double>(b.n - 1));
    const boost::math::students_t dist(r.df);
    r.p = std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(r.t))));
    return r;
}

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Unbiased draw in [0, n).
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
        const std::uint64_t r = rng();
        if (r >= threshold) {
            return r % n;
        }
    }
}

std::vector<PairKey> interface_pairs(const std::map<std::string, std::vector<double>>& groups) {
    std::vector<PairKey> pairs;
    for (auto a = groups.begin(); a != groups.end(); ++a) {
        for (auto b = std::next(a); b != groups.end(); ++b) {
            pairs.emplace_back(a->first, b->first);
        }
    }
    return pairs;
}

bool significant(const std::vector<double>& a, const std::vector<double>& b, double alpha) {
    if (a.size() < 2 || b.size() < 2) {
        return false;
    }
    return pairwise_test(a, b) < alpha;
}

std::vector<double> ranks(const std::vector<double>& xs) {
    std::vector<std::size_t> order(xs.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return xs[i] < xs[j]; });
    std::vector<double> out(xs.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && xs[order[j + 1]] == xs[order[i]]) {
            ++j;
        }
        const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) {
            out[order[k]] = rank;
        }
        i = j + 1;
    }
    return out;
}

} // namespace

WelchResult welch_test(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() < 2 || b.size() < 2) {
        throw InsufficientData("Welch test needs at least two observations per group (got "
                               + std::to_string(a.size()) + " and " + std::to_string(b.size()) + ")");
    }
    return welch(summarize(a), summarize(b));
}

WelchResult welch_from_summary(double meanA, double sdA, std::size_t nA, double meanB, double sdB, std::size_t nB) {
    return welch({meanA, sdA * sdA, nA}, {meanB, sdB * sdB, nB});
}

double pairwise_test(const std::vector<double>& a, const std::vector<double>& b) {
    return welch_test(a, b).p;
}

std::string pair_name(const PairKey& pair) {
    return pair.first + "|" + pair.second;
}

std::map<PairKey, double> pairwise_all(const std::vector<ExerciseResponse>& responses, TestUnit unit) {
    const auto groups = scores_by_interface(responses, unit);
    std::map<PairKey, double> out;
    for (const auto& pair : interface_pairs(groups)) {
        out[pair] = pairwise_test(groups.at(pair.first), groups.at(pair.second));
    }
    return out;
}

std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t size, std::uint64_t iteration) {
    return splitmix(splitmix(splitmix(seed) ^ size) ^ iteration);
}

std::map<std::size_t, std::map<PairKey, double>>
bootstrap_participants(const std::vector<ExerciseResponse>& responses, const std::vector<std::size_t>& sizes,
                       const BootstrapOptions& options) {
    // Observations per participant and interface, participants in id order.
    std::map<std::string, std::map<std::string, std::vector<ExerciseResponse>>> byParticipant;
    for (const auto& r : responses) {
        byParticipant[r.participant_id][r.interface_kind].push_back(r);
    }
    std::vector<std::map<std::string, std::vector<double>>> observations;
    for (const auto& [participant, kinds] : byParticipant) {
        std::map<std::string, std::vector<double>> obs;
        for (const auto& [kind, rows] : kinds) {
            obs[kind] = scores_by_interface(rows, options.unit).at(kind);
        }
        observations.push_back(std::move(obs));
    }
    const auto pairs = interface_pairs(scores_by_interface(responses, options.unit));
    const std::size_t pool = observations.size();

    std::map<std::size_t, std::map<PairKey, double>> out;
    for (std::size_t size : sizes) {
        if (size == 0 || (!options.with_replacement && size > pool) || pool == 0) {
            throw SizeTooLarge("cannot draw " + std::to_string(size) + " of " + std::to_string(pool) + " participants");
        }
        std::map<PairKey, std::size_t> hits;
        std::vector<std::size_t> index(pool);
        for (std::size_t iteration = 0; iteration < options.resamples; ++iteration) {
            std::mt19937_64 rng(sub_seed(options.seed, size, iteration));
            std::vector<std::size_t> drawn;
            if (options.with_replacement) {
                for (std::size_t i = 0; i < size; ++i) {
                    drawn.push_back(bounded(rng, pool));
                }
            } else {
                std::iota(index.begin(), index.end(), 0);
                for (std::size_t i = 0; i < size; ++i) {
                    std::swap(index[i], index[i + bounded(rng, pool - i)]);
                }
                drawn.assign(index.begin(), index.begin() + static_cast<std::ptrdiff_t>(size));
            }
            // Draw order must not affect the sums.
            std::sort(drawn.begin(), drawn.end());
            std::map<std::string, std::vector<double>> groups;
            for (std::size_t p : drawn) {
                for (const auto& [kind, values] : observations[p]) {
                    auto& g = groups[kind];
                    g.insert(g.end(), values.begin(), values.end());
                }
            }
            for (const auto& pair : pairs) {
                hits[pair] += significant(groups[pair.first], groups[pair.second], options.alpha) ? 1 : 0;
            }
        }
        auto& row = out[size];
        for (const auto& pair : pairs) {
            row[pair] = options.resamples == 0
                            ? 0.0
                            : static_cast<double>(hits[pair]) / static_cast<double>(options.resamples);
        }
    }
    return out;
}

StoryBootstrap bootstrap_stories(const std::vector<ExerciseResponse>& responses, std::size_t keep,
                                 const PairKey& contrast, double alpha, TestUnit unit) {
    std::set<std::string> storySet;
    for (const auto& r : responses) {
        storySet.insert(r.story_id);
    }
    const std::vector<std::string> stories(storySet.begin(), storySet.end());
    const std::size_t n = stories.size();
    if (keep < 1 || keep > n) {
        throw InvalidRequest("story subset size " + std::to_string(keep) + " outside 1.." + std::to_string(n));
    }
    StoryBootstrap result;
    result.keep = keep;
    // Lexicographic combinations via a selection mask.
    std::vector<bool> mask(n, false);
    std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(keep), true);
    do {
        std::set<std::string> kept;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask[i]) {
                kept.insert(stories[i]);
            }
        }
        std::vector<ExerciseResponse> subset;
        for (const auto& r : responses) {
            if (kept.count(r.story_id)) {
                subset.push_back(r);
            }
        }
        auto groups = scores_by_interface(subset, unit);
        ++result.subsets;
        result.significant += significant(groups[contrast.first], groups[contrast.second], alpha) ? 1 : 0;
    } while (std::prev_permutation(mask.begin(), mask.end()));
    result.fraction = static_cast<double>(result.significant) / static_cast<double>(result.subsets);
    return result;
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw InsufficientData("spearman needs two equally sized samples of at least two values");
    }
    const auto rx = ranks(x);
    const auto ry = ranks(y);
    const double n = static_cast<double>(x.size());
    const double mean = (n + 1) / 2;
    double sxy = 0;
    double sxx = 0;
    double syy = 0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        sxy += (rx[i] - mean) * (ry[i] - mean);
        sxx += (rx[i] - mean) * (rx[i] - mean);
        syy += (ry[i] - mean) * (ry[i] - mean);
    }
    if (sxx == 0 || syy == 0) {
        return 0;
    }
    return sxy / std::sqrt(sxx * syy);
}

std::vector<std::size_t> default_bootstrap_sizes() {
    std::vector<std::size_t> sizes;
    for (std::size_t s = 5; s <= 95; s += 5) {
        sizes.push_back(s);
    }
    return sizes;
}

} // namespace assembly::evalkit
