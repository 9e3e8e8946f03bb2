#include "assembly/interfaces/views.hpp"

#include "assembly/error.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace assembly::interfaces {

namespace {

using discordq::AnswerGroup;
using discordq::AnswerSpan;
using discordq::DiscordQuestion;
using discordq::DiscordQuestionSet;

constexpr std::size_t kSummaryTargetWords = 60;

std::size_t source_index(const corpus::Story& story, const std::string& domain) {
    const auto index = story.index_of(domain);
    if (!index) {
        throw SchemaError("question set cites source '" + domain + "' which is not part of story '"
                          + story.story_id() + "'");
    }
    return *index;
}

const corpus::SourceArticle& article_of(const corpus::Story& story, const std::string& domain) {
    return story.articles()[source_index(story, domain)];
}

// Groups ranked largest first; equal sizes keep their input order.
std::vector<const AnswerGroup*> ranked_groups(const DiscordQuestion& question) {
    std::vector<const AnswerGroup*> groups;
    for (const auto& group : question.groups) {
        groups.push_back(&group);
    }
    std::stable_sort(groups.begin(), groups.end(),
                     [](const AnswerGroup* a, const AnswerGroup* b) { return a->members.size() > b->members.size(); });
    return groups;
}

// More answers first, then smaller text, then smaller id.
bool question_precedes(const DiscordQuestion& a, const DiscordQuestion& b) {
    if (a.answer_count() != b.answer_count()) {
        return a.answer_count() > b.answer_count();
    }
    if (a.question.text != b.question.text) {
        return a.question.text < b.question.text;
    }
    return a.question.question_id < b.question.question_id;
}

ArticleView article_view(const corpus::Story& story, const corpus::SourceArticle& article) {
    ArticleView view;
    view.story_id = story.story_id();
    view.basis_source = article.source_domain();
    view.headline = article.headline();
    view.byline = article.source_domain();
    view.url = article.url();
    for (std::size_t p = 0; p < article.paragraphs().size(); ++p) {
        view.blocks.emplace_back(ParagraphBlock{p, article.paragraphs()[p]});
    }
    return view;
}

std::string leading_words(const corpus::SourceArticle& article, std::size_t limit) {
    std::string out;
    std::size_t count = 0;
    for (const auto& paragraph : article.paragraphs()) {
        std::istringstream words(paragraph);
        std::string word;
        while (count < limit && words >> word) {
            out += (count ? " " : "") + word;
            ++count;
        }
    }
    return out;
}

AnswerParagraph answer_paragraph(const corpus::Story& story, const AnswerSpan& span, int groupId) {
    const auto& article = article_of(story, span.source_domain);
    AnswerParagraph answer;
    answer.source_domain = span.source_domain;
    answer.paragraph_index = span.paragraph_index;
    if (span.paragraph_index >= article.paragraphs().size()) {
        throw SchemaError("answer span of '" + span.source_domain + "' names a missing paragraph");
    }
    answer.paragraph_text = article.paragraphs()[span.paragraph_index];
    answer.bold_start = span.char_start;
    answer.bold_end = span.char_end;
    answer.url = article.url();
    answer.group_id = groupId;
    return answer;
}

} // namespace

std::string_view to_string(ViewKind kind) {
    switch (kind) {
    case ViewKind::Annotated:
        return "annotated";
    case ViewKind::Recomposed:
        return "recomposed";
    case ViewKind::Grid:
        return "grid";
    case ViewKind::Headlines:
        return "headlines";
    case ViewKind::Article:
        return "article";
    }
    return "unknown";
}

ViewKind parse_view_kind(std::string_view name) {
    for (ViewKind kind : kAllViewKinds) {
        if (to_string(kind) == name) {
            return kind;
        }
    }
    throw InvalidRequest("unknown view kind '" + std::string(name)
                         + "' (expected annotated, recomposed, grid, headlines or article)");
}

std::size_t ArticleView::annotation_count() const {
    return static_cast<std::size_t>(std::count_if(blocks.begin(), blocks.end(), [](const ArticleBlock& block) {
        return std::holds_alternative<Annotation>(block);
    }));
}

std::size_t annotation_count(const DiscordQuestionSet& set, std::string_view source_domain) {
    return static_cast<std::size_t>(std::count_if(set.questions.begin(), set.questions.end(), [&](const auto& q) {
        return q.answering_sources().count(std::string(source_domain)) > 0;
    }));
}

std::string select_basis(const corpus::Story& story, const DiscordQuestionSet& set) {
    const corpus::SourceArticle* best = nullptr;
    std::size_t bestCount = 0;
    for (const auto& article : story.articles()) {
        if (article.is_partial()) {
            continue;
        }
        const std::size_t count = annotation_count(set, article.source_domain());
        if (count == 0) {
            continue;
        }
        const bool better = best == nullptr || count > bestCount
            || (count == bestCount
                && (article.word_count() > best->word_count()
                    || (article.word_count() == best->word_count() && article.source_domain() < best->source_domain())));
        if (better) {
            best = &article;
            bestCount = count;
        }
    }
    return best ? best->source_domain() : corpus::median_article(story);
}

ArticleView build_annotated(const corpus::Story& story, const DiscordQuestionSet& set) {
    const std::string basis = select_basis(story, set);
    const corpus::SourceArticle& basisArticle = article_of(story, basis);

    std::map<std::size_t, std::vector<const DiscordQuestion*>> byAnchor;
    for (const auto& question : set.questions) {
        std::optional<std::size_t> anchor;
        for (const auto& group : question.groups) {
            for (const auto& member : group.members) {
                if (member.source_domain == basis && (!anchor || member.paragraph_index < *anchor)) {
                    anchor = member.paragraph_index;
                }
            }
        }
        if (anchor) {
            if (*anchor >= basisArticle.paragraphs().size()) {
                throw SchemaError("question '" + question.question.question_id + "' anchors past the end of " + basis);
            }
            byAnchor[*anchor].push_back(&question);
        }
    }

    ArticleView view = article_view(story, basisArticle);
    std::vector<ArticleBlock> blocks;
    for (auto& block : view.blocks) {
        const std::size_t paragraph = std::get<ParagraphBlock>(block).paragraph_index;
        blocks.push_back(std::move(block));
        auto it = byAnchor.find(paragraph);
        if (it == byAnchor.end()) {
            continue;
        }
        auto& questions = it->second;
        std::sort(questions.begin(), questions.end(),
                  [](const DiscordQuestion* a, const DiscordQuestion* b) { return question_precedes(*a, *b); });
        for (const DiscordQuestion* question : questions) {
            Annotation annotation;
            annotation.question_id = question->question.question_id;
            annotation.question_text = question->question.text;
            annotation.anchor_paragraph = paragraph;
            annotation.answer_count = question->answer_count();
            // One answer per other source, earliest paragraph of that source.
            std::map<std::size_t, const AnswerSpan*> perSource;
            for (const auto& group : question->groups) {
                for (const auto& member : group.members) {
                    if (member.source_domain == basis) {
                        continue;
                    }
                    const std::size_t index = source_index(story, member.source_domain);
                    auto [slot, inserted] = perSource.emplace(index, &member);
                    if (!inserted
                        && std::tie(member.paragraph_index, member.char_start)
                               < std::tie(slot->second->paragraph_index, slot->second->char_start)) {
                        slot->second = &member;
                    }
                }
            }
            for (const auto& [index, member] : perSource) {
                annotation.answers.push_back(
                    {member->source_domain, member->span_text, story.articles()[index].url()});
            }
            blocks.emplace_back(std::move(annotation));
        }
    }
    view.blocks = std::move(blocks);
    return view;
}

ArticleView build_news_article(const corpus::Story& story) {
    return article_view(story, article_of(story, corpus::median_article(story)));
}

std::string select_summary(const corpus::Story& story, std::optional<std::string> fallback_source) {
    const std::string* best = nullptr;
    std::size_t bestDistance = 0;
    for (const auto& article : story.articles()) {
        const auto& summary = article.summary();
        if (!summary || corpus::count_words(*summary) == 0) {
            continue;
        }
        const std::size_t words = corpus::count_words(*summary);
        const std::size_t distance = words > kSummaryTargetWords ? words - kSummaryTargetWords : kSummaryTargetWords - words;
        if (best == nullptr || distance < bestDistance) {
            best = &*summary;
            bestDistance = distance;
        }
    }
    if (best) {
        return *best;
    }
    const std::string source = fallback_source ? *fallback_source : corpus::median_article(story);
    return leading_words(article_of(story, source), kSummaryTargetWords);
}

std::vector<Selection> compose_sequence(const std::vector<DiscordQuestion>& questions) {
    std::vector<std::set<discordq::ParagraphRef>> paragraphs;
    paragraphs.reserve(questions.size());
    for (const auto& question : questions) {
        paragraphs.push_back(question.answering_paragraphs());
    }
    std::set<discordq::ParagraphRef> seen;
    std::vector<bool> taken(questions.size(), false);
    std::vector<Selection> selections;
    for (;;) {
        std::optional<std::size_t> best;
        std::size_t bestScore = 0;
        for (std::size_t q = 0; q < questions.size(); ++q) {
            if (taken[q]) {
                continue;
            }
            std::size_t score = 0;
            for (const auto& ref : paragraphs[q]) {
                score += seen.count(ref) == 0;
            }
            if (score == 0) {
                continue;
            }
            if (!best || score > bestScore || (score == bestScore && question_precedes(questions[q], questions[*best]))) {
                best = q;
                bestScore = score;
            }
        }
        if (!best) {
            break;
        }
        taken[*best] = true;
        seen.insert(paragraphs[*best].begin(), paragraphs[*best].end());
        selections.push_back({*best, bestScore});
    }
    return selections;
}

RecomposedArticleView compose_recomposed(const corpus::Story& story, const DiscordQuestionSet& set) {
    if (set.questions.empty()) {
        throw EmptyQuestionSet("story '" + story.story_id() + "' has no discord questions to compose");
    }
    RecomposedArticleView view;
    view.story_id = story.story_id();
    view.story_title = story.title();
    for (const auto& article : story.articles()) {
        view.byline_sources.push_back(article.source_domain());
    }
    view.byline = "Sources: ";
    for (std::size_t i = 0; i < view.byline_sources.size(); ++i) {
        view.byline += (i ? ", " : "") + view.byline_sources[i];
    }
    view.intro_summary = select_summary(story, select_basis(story, set));

    for (const Selection& selection : compose_sequence(set.questions)) {
        const DiscordQuestion& question = set.questions[selection.question];
        QuestionUnit unit;
        unit.question_id = question.question.question_id;
        unit.question_text = question.question.text;
        unit.score = selection.score;

        const auto groups = ranked_groups(question);
        std::set<const AnswerSpan*> primary;
        for (const AnswerGroup* group : groups) {
            if (unit.primary_answers.size() == 2) {
                break;
            }
            const AnswerSpan& representative = group->members.front();
            if (!unit.primary_answers.empty() && unit.primary_answers.front().source_domain == representative.source_domain) {
                continue;
            }
            unit.primary_answers.push_back(answer_paragraph(story, representative, group->group_id));
            primary.insert(&representative);
        }

        struct Remaining {
            std::size_t rank;
            std::size_t groupSize;
            std::size_t source;
            const AnswerSpan* span;
            int groupId;
        };
        std::vector<Remaining> remaining;
        for (std::size_t rank = 0; rank < groups.size(); ++rank) {
            for (const auto& member : groups[rank]->members) {
                if (primary.count(&member) == 0) {
                    remaining.push_back({rank, groups[rank]->members.size(), source_index(story, member.source_domain),
                                         &member, groups[rank]->group_id});
                }
            }
        }
        std::stable_sort(remaining.begin(), remaining.end(), [](const Remaining& a, const Remaining& b) {
            return std::tie(b.groupSize, a.rank, a.source, a.span->paragraph_index, a.span->char_start)
                 < std::tie(a.groupSize, b.rank, b.source, b.span->paragraph_index, b.span->char_start);
        });
        for (const auto& entry : remaining) {
            unit.carousel_answers.push_back(answer_paragraph(story, *entry.span, entry.groupId));
        }
        view.units.push_back(std::move(unit));
    }
    return view;
}

QuestionGridView build_grid(const corpus::Story& story, const DiscordQuestionSet& set) {
    if (set.questions.empty()) {
        throw EmptyQuestionSet("story '" + story.story_id() + "' has no discord questions for the grid");
    }
    QuestionGridView view;
    view.story_id = story.story_id();

    std::vector<std::size_t> rowOrder(set.questions.size());
    std::iota(rowOrder.begin(), rowOrder.end(), 0);
    std::stable_sort(rowOrder.begin(), rowOrder.end(), [&](std::size_t a, std::size_t b) {
        return question_precedes(set.questions[a], set.questions[b]);
    });

    const auto& articles = story.articles();
    std::vector<std::size_t> answered(articles.size(), 0);
    for (const auto& question : set.questions) {
        for (const auto& source : question.answering_sources()) {
            ++answered[source_index(story, source)];
        }
    }
    std::vector<std::size_t> colOrder(articles.size());
    std::iota(colOrder.begin(), colOrder.end(), 0);
    std::stable_sort(colOrder.begin(), colOrder.end(),
                     [&](std::size_t a, std::size_t b) { return answered[a] > answered[b]; });
    std::vector<std::size_t> colOf(articles.size());
    for (std::size_t c = 0; c < colOrder.size(); ++c) {
        colOf[colOrder[c]] = c;
        view.cols.push_back({articles[colOrder[c]].source_domain(), answered[colOrder[c]], articles[colOrder[c]].url()});
    }

    for (std::size_t r = 0; r < rowOrder.size(); ++r) {
        const DiscordQuestion& question = set.questions[rowOrder[r]];
        view.rows.push_back({question.question.question_id, question.question.text, question.answer_count()});
        const auto groups = ranked_groups(question);
        std::map<std::size_t, GridCell> cells;
        for (std::size_t rank = 0; rank < groups.size(); ++rank) {
            for (const auto& member : groups[rank]->members) {
                const std::size_t source = source_index(story, member.source_domain);
                GridCell cell{r, colOf[source], groups[rank]->group_id, rank % kGridPalette.size(), member.span_text,
                              articles[source].url()};
                cells.emplace(cell.col, std::move(cell));
            }
        }
        for (auto& [col, cell] : cells) {
            view.cells.push_back(std::move(cell));
        }
    }
    return view;
}

HeadlineListView build_headline_list(const corpus::Story& story) {
    HeadlineListView view;
    view.story_id = story.story_id();
    view.story_title = story.title();
    for (const auto& article : story.articles()) {
        view.entries.push_back({article.source_domain(), article.headline(), article.url(), article.is_partial()});
    }
    return view;
}

} // namespace assembly::interfaces
