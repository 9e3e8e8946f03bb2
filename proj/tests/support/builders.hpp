#pragma once

#include "assembly/corpus/story.hpp"
#include "assembly/discordq/types.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace test_support {

using assembly::corpus::SourceArticle;
using assembly::corpus::Story;
using assembly::corpus::Timestamp;

inline SourceArticle article(const std::string& domain, std::vector<std::string> paragraphs,
                             std::optional<std::string> summary = std::nullopt) {
    return SourceArticle::create({domain, "https://" + domain + "/story", "Headline from " + domain,
                                  std::move(summary), std::move(paragraphs), false});
}

inline SourceArticle partial(const std::string& domain) {
    return SourceArticle::create({domain, "https://" + domain + "/story", "Headline from " + domain,
                                  std::nullopt, {}, true});
}

inline Story story(const std::string& id, std::vector<SourceArticle> articles) {
    return Story::create(id, "Story " + id, Timestamp::parse("2022-08-02T10:00:00Z"), std::move(articles));
}

// One span per (source, paragraph), all in a single group when `groupOf` is
// empty, otherwise group k holds the spans with groupOf[i] == k.
inline assembly::discordq::DiscordQuestion question_with(const std::string& text,
                                                         const std::vector<assembly::discordq::ParagraphRef>& refs,
                                                         const std::vector<int>& groupOf = {}) {
    assembly::discordq::DiscordQuestion q;
    q.question.question_id = text;
    q.question.text = text;
    int groups = 1;
    for (int g : groupOf) {
        groups = std::max(groups, g + 1);
    }
    q.groups.resize(static_cast<std::size_t>(groups));
    for (int g = 0; g < groups; ++g) {
        q.groups[static_cast<std::size_t>(g)].group_id = g;
    }
    for (std::size_t i = 0; i < refs.size(); ++i) {
        assembly::discordq::AnswerSpan span;
        span.source_domain = refs[i].first;
        span.paragraph_index = refs[i].second;
        span.char_start = 0;
        span.char_end = 1;
        span.span_text = "x";
        const int g = groupOf.empty() ? 0 : groupOf[i];
        q.groups[static_cast<std::size_t>(g)].members.push_back(span);
    }
    for (auto& group : q.groups) {
        group.label = "x";
    }
    std::erase_if(q.groups, [](const auto& group) { return group.members.empty(); });
    return q;
}

inline std::filesystem::path temp_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("assembly_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace test_support
