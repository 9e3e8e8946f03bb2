#pragma once

#include "assembly/corpus/story.hpp"

#include <random>
#include <string>
#include <vector>

namespace test_support {

// Random multi-source story. A handful of facts are each told in one of
// several phrasings; every source picks some facts and adds filler of its own.
// Phrasing weights vary per fact so some questions fail diversity, and fact
// spread varies so some fail coverage.
inline assembly::corpus::Story synthetic_story(std::mt19937_64& rng, const std::string& id, std::size_t sources,
                                               std::size_t fillerParagraphs = 2) {
    static const std::vector<std::string> kSubjects{"board", "council", "union", "company", "court", "agency",
                                                    "league", "ministry", "museum", "airline", "port", "college"};
    static const std::vector<std::string> kVerbs{"raised", "lowered", "approved", "delayed", "banned",
                                                 "expanded", "closed", "opened", "doubled", "reviewed"};
    static const std::vector<std::string> kObjects{"fees", "rates", "wages", "taxes", "prices", "routes",
                                                   "permits", "grants", "tariffs", "quotas", "fares", "rents"};
    static const std::vector<std::string> kCauses{"demand surged", "costs climbed", "voters complained",
                                                  "revenue slumped", "inspectors warned", "members voted"};
    static const std::vector<std::string> kPurposes{"calm critics", "save money", "meet demand", "avoid delays"};
    static const std::vector<std::string> kOrdinals{"second", "third", "fourth", "fifth"};
    static const std::vector<std::string> kFiller{"harbor", "violin", "meadow", "lantern", "copper", "orchard",
                                                  "glacier", "saddle", "pepper", "canyon", "marble", "walnut",
                                                  "falcon", "ribbon", "thistle", "quarry", "beacon", "tundra"};
    auto pick = [&](const std::vector<std::string>& pool) { return pool[rng() % pool.size()]; };
    auto cap = [](std::string s) {
        s[0] = static_cast<char>(s[0] - 'a' + 'A');
        return s;
    };

    struct Fact {
        std::string subject, verb, object, cause, purpose, ordinal;
        double spread = 0;
        std::vector<double> weights;
    };
    std::vector<Fact> facts(2 + rng() % 3);
    for (auto& f : facts) {
        f.subject = pick(kSubjects);
        f.verb = pick(kVerbs);
        f.object = pick(kObjects);
        f.cause = pick(kCauses);
        f.purpose = pick(kPurposes);
        f.ordinal = pick(kOrdinals);
        f.spread = 0.15 + 0.8 * std::uniform_real_distribution<double>(0, 1)(rng);
        f.weights = {1.0 + rng() % 6, 1.0 + rng() % 3, 1.0 + rng() % 3, 1.0 + rng() % 3};
    }
    auto tell = [&](const Fact& f, std::size_t phrasing) {
        switch (phrasing) {
        case 0:
            return "The " + f.subject + " " + f.verb + " " + f.object + " because " + f.cause + ".";
        case 1:
            return "As it had said it would do, the " + f.subject + " " + f.verb + " its " + f.object + " once more.";
        case 2:
            return cap(f.object) + " were " + f.verb + " by the " + f.subject + " to " + f.purpose + ".";
        default:
            return cap(f.subject) + " officials " + f.verb + " " + f.object + " for a " + f.ordinal + " time.";
        }
    };

    std::vector<assembly::corpus::SourceArticle> articles;
    std::uniform_real_distribution<double> unit(0, 1);
    for (std::size_t s = 0; s < sources; ++s) {
        const std::string domain = "src" + std::to_string(s) + "-" + id + ".com";
        std::vector<std::string> paragraphs;
        for (const auto& f : facts) {
            if (unit(rng) < f.spread) {
                std::discrete_distribution<std::size_t> phrasing(f.weights.begin(), f.weights.end());
                paragraphs.push_back(tell(f, phrasing(rng)));
            }
        }
        for (std::size_t k = 0; k < fillerParagraphs; ++k) {
            std::string filler = "Reporter " + std::to_string(s) + " noted the";
            for (int w = 0; w < 8; ++w) {
                filler += " " + pick(kFiller);
            }
            paragraphs.insert(paragraphs.begin() + static_cast<std::ptrdiff_t>(rng() % (paragraphs.size() + 1)),
                              filler + ".");
        }
        const bool partial = s >= 10 && rng() % 20 == 0;
        std::optional<std::string> summary;
        if (rng() % 2 == 0) {
            summary = "Summary from " + domain + " about the " + facts.front().subject + ".";
        }
        articles.push_back(assembly::corpus::SourceArticle::create(
            {domain, "https://" + domain + "/news/" + id, "Headline " + std::to_string(s) + " on " + id,
             partial ? std::nullopt : summary, partial ? std::vector<std::string>{} : paragraphs, partial}));
    }
    return assembly::corpus::Story::create(id, "Synthetic story " + id,
                                           assembly::corpus::Timestamp::parse("2022-08-02T10:00:00Z"),
                                           std::move(articles));
}

} // namespace test_support
