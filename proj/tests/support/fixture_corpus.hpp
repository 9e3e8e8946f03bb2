#pragma once

#include "assembly/corpus/story_io.hpp"
#include "assembly/discordq/pipeline.hpp"

#include <filesystem>
#include <vector>

namespace test_support {

inline std::filesystem::path fixtures_dir() {
    return ASSEMBLY_FIXTURES_DIR;
}

struct ProcessedFixture {
    assembly::corpus::Story story;
    assembly::discordq::DiscordQuestionSet set;
};

// The bundled corpus run through the baseline pipeline against the bundled
// reference corpus.
inline const std::vector<ProcessedFixture>& processed_fixtures() {
    static const std::vector<ProcessedFixture> cached = [] {
        const auto stories = assembly::corpus::load_corpus_dir(fixtures_dir() / "corpus");
        const auto reference = assembly::corpus::load_corpus_dir(fixtures_dir() / "reference");
        std::vector<ProcessedFixture> out;
        for (const auto& s : stories) {
            out.push_back({s, assembly::discordq::run_pipeline(s, reference, assembly::discordq::PipelineConfig{})});
        }
        return out;
    }();
    return cached;
}

} // namespace test_support
