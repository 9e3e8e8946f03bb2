#include "assembly/discordq/stages.hpp"

#include "assembly/corpus/utf8.hpp"
#include "assembly/discordq/text.hpp"

#include <algorithm>
#include <numeric>

namespace assembly::discordq {

PreparedArticle::PreparedArticle(const corpus::SourceArticle& article)
    : Article(&article)
{
    for (const auto& paragraph : article.paragraphs()) {
        Paragraph prepared;
        prepared.terms = text::content_terms(paragraph);
        for (const auto& range : text::split_sentences(paragraph)) {
            const std::string_view sentence =
                std::string_view(paragraph).substr(range.begin, range.end - range.begin);
            Sentence s;
            s.char_start = utf8::char_index(paragraph, range.begin);
            s.char_end = s.char_start + utf8::length(sentence);
            s.terms = text::content_terms(sentence);
            prepared.sentences.push_back(std::move(s));
        }
        Paragraphs.push_back(std::move(prepared));
    }
}

std::vector<std::string> question_terms(const CandidateQuestion& question) {
    return text::content_terms(question.text);
}

std::optional<AnswerSpan> answer_prepared(const std::vector<std::string>& questionTerms,
                                          const PreparedArticle& prepared, const PipelineConfig& config) {
    const corpus::SourceArticle& article = prepared.article();
    if (article.is_partial() || questionTerms.empty()) {
        return std::nullopt;
    }
    std::optional<std::size_t> bestParagraph;
    double bestScore = 0.0;
    for (std::size_t p = 0; p < prepared.Paragraphs.size(); ++p) {
        const double score = text::jaccard(questionTerms, prepared.Paragraphs[p].terms);
        if (score > bestScore) {
            bestScore = score;
            bestParagraph = p;
        }
    }
    if (!bestParagraph || bestScore + kFractionEpsilon < config.qa_overlap_threshold) {
        return std::nullopt;
    }

    const auto& sentences = prepared.Paragraphs[*bestParagraph].sentences;
    if (sentences.empty()) {
        return std::nullopt;
    }
    std::size_t bestSentence = 0;
    double bestSentenceScore = -1.0;
    for (std::size_t s = 0; s < sentences.size(); ++s) {
        const double score = text::jaccard(questionTerms, sentences[s].terms);
        if (score > bestSentenceScore) {
            bestSentenceScore = score;
            bestSentence = s;
        }
    }

    const std::string& paragraph = article.paragraphs()[*bestParagraph];
    AnswerSpan span;
    span.source_domain = article.source_domain();
    span.paragraph_index = *bestParagraph;
    span.char_start = sentences[bestSentence].char_start;
    span.char_end = sentences[bestSentence].char_end;
    span.span_text = utf8::substr(paragraph, span.char_start, span.char_end);
    return span;
}

std::optional<AnswerSpan> answer_question_baseline(const CandidateQuestion& question,
                                                   const corpus::SourceArticle& article,
                                                   const PipelineConfig& config) {
    const PreparedArticle prepared(article);
    return answer_prepared(question_terms(question), prepared, config);
}

namespace {

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : Parent(n) { std::iota(Parent.begin(), Parent.end(), 0); }

    std::size_t find(std::size_t x) {
        while (Parent[x] != x) {
            Parent[x] = Parent[Parent[x]];
            x = Parent[x];
        }
        return x;
    }

    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) {
            Parent[std::max(a, b)] = std::min(a, b);
        }
    }

private:
    std::vector<std::size_t> Parent;
};

} // namespace

std::vector<AnswerGroup> consolidate(const std::vector<AnswerSpan>& answers, const PipelineConfig& config) {
    const std::size_t n = answers.size();
    std::vector<std::vector<std::string>> terms;
    terms.reserve(n);
    for (const auto& answer : answers) {
        terms.push_back(text::all_terms(answer.span_text));
    }

    DisjointSets sets(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (text::jaccard(terms[i], terms[j]) + kFractionEpsilon >= config.consolidation_similarity_threshold) {
                sets.unite(i, j);
            }
        }
    }

    // Roots are the smallest member index, so clusters come out in order of
    // their first member.
    std::vector<std::vector<std::size_t>> clusters;
    std::vector<std::size_t> clusterOfRoot(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t root = sets.find(i);
        if (clusterOfRoot[root] == n) {
            clusterOfRoot[root] = clusters.size();
            clusters.emplace_back();
        }
        clusters[clusterOfRoot[root]].push_back(i);
    }
    std::stable_sort(clusters.begin(), clusters.end(),
                     [](const auto& a, const auto& b) { return a.size() > b.size(); });

    std::vector<AnswerGroup> groups;
    groups.reserve(clusters.size());
    for (const auto& cluster : clusters) {
        AnswerGroup group;
        group.group_id = static_cast<int>(groups.size());
        for (std::size_t index : cluster) {
            group.members.push_back(answers[index]);
        }
        group.label = group.members.front().span_text;
        groups.push_back(std::move(group));
    }
    return groups;
}

} // namespace assembly::discordq
