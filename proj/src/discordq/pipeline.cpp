#include "assembly/discordq/pipeline.hpp"

#include "assembly/corpus/utf8.hpp"
#include "assembly/discordq/stages.hpp"
#include "assembly/discordq/text.hpp"
#include "assembly/error.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>

namespace assembly::discordq {

std::string span_problem(const AnswerSpan& span, const corpus::SourceArticle& article) {
    if (span.source_domain != article.source_domain()) {
        return "span names source " + span.source_domain + " but belongs to " + article.source_domain();
    }
    if (span.paragraph_index >= article.paragraphs().size()) {
        return "paragraph index " + std::to_string(span.paragraph_index) + " out of range for "
               + article.source_domain();
    }
    const std::string& paragraph = article.paragraphs()[span.paragraph_index];
    if (!(span.char_start < span.char_end && span.char_end <= utf8::length(paragraph))) {
        return "offsets [" + std::to_string(span.char_start) + ", " + std::to_string(span.char_end)
               + ") invalid for paragraph " + std::to_string(span.paragraph_index) + " of "
               + article.source_domain();
    }
    if (utf8::substr(paragraph, span.char_start, span.char_end) != span.span_text) {
        return "span_text does not match paragraph substring in " + article.source_domain();
    }
    return {};
}

namespace {

void check_candidates(const std::vector<CandidateQuestion>& candidates, const corpus::SourceArticle& article) {
    for (const auto& candidate : candidates) {
        if (candidate.question_id.empty()) {
            throw StageFailure("generate", "candidate without question_id from " + article.source_domain());
        }
        if (candidate.text.empty() || candidate.text.back() != '?') {
            throw StageFailure("generate", "candidate " + candidate.question_id + " is not a question");
        }
        if (candidate.origin_source != article.source_domain()) {
            throw StageFailure("generate", "candidate " + candidate.question_id + " has origin_source "
                                               + candidate.origin_source + ", expected " + article.source_domain());
        }
        if (candidate.origin_paragraph >= article.paragraphs().size()) {
            throw StageFailure("generate", "candidate " + candidate.question_id + " has origin_paragraph out of range");
        }
    }
}

void check_groups(const std::vector<AnswerGroup>& groups, const std::vector<AnswerSpan>& spans) {
    std::set<int> ids;
    std::vector<AnswerSpan> members;
    for (const auto& group : groups) {
        if (group.members.empty()) {
            throw StageFailure("consolidate", "group " + std::to_string(group.group_id) + " has no members");
        }
        if (!ids.insert(group.group_id).second) {
            throw StageFailure("consolidate", "duplicate group_id " + std::to_string(group.group_id));
        }
        members.insert(members.end(), group.members.begin(), group.members.end());
    }
    auto key = [](const AnswerSpan& s) {
        return std::tie(s.source_domain, s.paragraph_index, s.char_start, s.char_end, s.span_text);
    };
    auto less = [&](const AnswerSpan& a, const AnswerSpan& b) { return key(a) < key(b); };
    std::vector<AnswerSpan> expected = spans;
    std::sort(members.begin(), members.end(), less);
    std::sort(expected.begin(), expected.end(), less);
    if (members != expected) {
        throw StageFailure("consolidate", "groups are not a partition of the answers");
    }
}

} // namespace

DiscordQuestionSet run_pipeline(const corpus::Story& story, const ReferenceCorpus& references,
                                const PipelineConfig& config, const StageAdapters& adapters) {
    config.validate();
    const std::size_t sourceCount = story.full_article_count();
    if (sourceCount < config.min_sources) {
        throw TooFewSources("story " + story.story_id() + " has " + std::to_string(sourceCount)
                            + " non-partial sources, at least " + std::to_string(config.min_sources) + " required");
    }

    DiscordQuestionSet result;
    result.story_id = story.story_id();
    PipelineStats& stats = result.pipeline_stats;
    stats.source_count = sourceCount;
    stats.stopwords_version = text::kStopwordListVersion;
    stats.reference_articles = references.article_count(story.story_id());
    stats.reference_warning = stats.reference_articles == 0;

    std::vector<const corpus::SourceArticle*> articles;
    for (const auto& article : story.articles()) {
        if (!article.is_partial()) {
            articles.push_back(&article);
        }
    }

    // Generation. Identical texts collapse onto the first occurrence.
    std::vector<CandidateQuestion> candidates;
    std::set<std::string> seenTexts;
    std::set<std::string> seenIds;
    for (const auto* article : articles) {
        std::vector<CandidateQuestion> generated =
            adapters.generate ? adapters.generate(*article) : generate_questions_baseline(*article);
        check_candidates(generated, *article);
        stats.candidates_generated += generated.size();
        for (auto& candidate : generated) {
            if (!seenIds.insert(candidate.question_id).second) {
                throw StageFailure("generate", "duplicate question_id " + candidate.question_id);
            }
            if (seenTexts.insert(candidate.text).second) {
                candidates.push_back(std::move(candidate));
            }
        }
    }
    stats.candidates_unique = candidates.size();

    // Answering, one article at a time so each article is prepared once.
    std::vector<std::vector<AnswerSpan>> spans(candidates.size());
    std::vector<std::vector<std::string>> terms;
    if (!adapters.answer) {
        terms.reserve(candidates.size());
        for (const auto& candidate : candidates) {
            terms.push_back(question_terms(candidate));
        }
    }
    for (const auto* article : articles) {
        if (adapters.answer) {
            std::vector<std::optional<AnswerSpan>> answers = adapters.answer(*article, candidates);
            if (answers.size() != candidates.size()) {
                throw StageFailure("answer", "expected " + std::to_string(candidates.size()) + " answers from "
                                                 + article->source_domain() + ", got "
                                                 + std::to_string(answers.size()));
            }
            for (std::size_t q = 0; q < answers.size(); ++q) {
                if (!answers[q]) {
                    continue;
                }
                if (std::string problem = span_problem(*answers[q], *article); !problem.empty()) {
                    throw StageFailure("answer", problem);
                }
                spans[q].push_back(std::move(*answers[q]));
            }
        } else {
            const PreparedArticle prepared(*article);
            for (std::size_t q = 0; q < candidates.size(); ++q) {
                if (auto span = answer_prepared(terms[q], prepared, config)) {
                    spans[q].push_back(std::move(*span));
                }
            }
        }
    }

    std::vector<DiscordQuestion> qualified;
    for (std::size_t q = 0; q < candidates.size(); ++q) {
        if (spans[q].empty()) {
            continue;
        }
        ++stats.answered;
        std::vector<AnswerGroup> groups =
            adapters.consolidate ? adapters.consolidate(spans[q]) : consolidate(spans[q], config);
        if (adapters.consolidate) {
            check_groups(groups, spans[q]);
        }

        // The reference scan is the expensive criterion, so it only runs
        // for candidates that already pass coverage and diversity.
        Verdict verdict = qualify(candidates[q], groups, sourceCount, 0.0, config);
        if (verdict.accepted) {
            const std::vector<std::string> questionTerms =
                terms.empty() ? question_terms(candidates[q]) : terms[q];
            const ForeignRate foreign = references.rate(questionTerms, story.story_id(), config);
            verdict = qualify(candidates[q], groups, sourceCount, foreign.rate, config);
        }
        if (!verdict.accepted) {
            switch (*verdict.reason) {
            case RejectionReason::Coverage:
                ++stats.rejected.coverage;
                break;
            case RejectionReason::Diversity:
                ++stats.rejected.diversity;
                break;
            case RejectionReason::Specificity:
                ++stats.rejected.specificity;
                break;
            }
            continue;
        }
        qualified.push_back(DiscordQuestion{candidates[q], std::move(groups)});
    }
    stats.qualified = qualified.size();

    result.questions = deduplicate(std::move(qualified), config);
    stats.deduplicated = result.questions.size();
    return result;
}

DiscordQuestionSet run_pipeline(const corpus::Story& story, const std::vector<corpus::Story>& reference_stories,
                                const PipelineConfig& config, const StageAdapters& adapters) {
    const ReferenceCorpus references(reference_stories);
    return run_pipeline(story, references, config, adapters);
}

} // namespace assembly::discordq
