#include "assembly/interfaces/payload.hpp"

#include "assembly/error.hpp"

namespace assembly::interfaces {

namespace {

Json answer_paragraph_json(const AnswerParagraph& answer) {
    Json value;
    value["source_domain"] = answer.source_domain;
    value["paragraph_index"] = answer.paragraph_index;
    value["paragraph_text"] = answer.paragraph_text;
    value["bold_char_range"] = {answer.bold_start, answer.bold_end};
    value["url"] = answer.url;
    value["group_id"] = answer.group_id;
    return value;
}

} // namespace

Json to_json(const ArticleView& view, ViewKind kind) {
    Json value;
    value["kind"] = to_string(kind);
    value["story_id"] = view.story_id;
    value["basis_source"] = view.basis_source;
    value["headline"] = view.headline;
    value["byline"] = view.byline;
    value["url"] = view.url;
    Json blocks = Json::array();
    for (const auto& block : view.blocks) {
        Json entry;
        if (const auto* paragraph = std::get_if<ParagraphBlock>(&block)) {
            entry["type"] = "paragraph";
            entry["paragraph_index"] = paragraph->paragraph_index;
            entry["text"] = paragraph->text;
        } else {
            const auto& annotation = std::get<Annotation>(block);
            entry["type"] = "annotation";
            entry["question_id"] = annotation.question_id;
            entry["question_text"] = annotation.question_text;
            entry["anchor_paragraph"] = annotation.anchor_paragraph;
            entry["answer_count"] = annotation.answer_count;
            entry["collapsed_default"] = annotation.collapsed_default;
            Json answers = Json::array();
            for (const auto& answer : annotation.answers) {
                answers.push_back({{"source_domain", answer.source_domain},
                                   {"span_text", answer.span_text},
                                   {"url", answer.url}});
            }
            entry["answers"] = std::move(answers);
        }
        blocks.push_back(std::move(entry));
    }
    value["blocks"] = std::move(blocks);
    return value;
}

Json to_json(const RecomposedArticleView& view) {
    Json value;
    value["kind"] = to_string(ViewKind::Recomposed);
    value["story_id"] = view.story_id;
    value["story_title"] = view.story_title;
    value["byline_sources"] = view.byline_sources;
    value["byline"] = view.byline;
    value["intro_summary"] = view.intro_summary;
    Json units = Json::array();
    for (const auto& unit : view.units) {
        Json entry;
        entry["question_id"] = unit.question_id;
        entry["question_text"] = unit.question_text;
        entry["score"] = unit.score;
        entry["primary_answers"] = Json::array();
        for (const auto& answer : unit.primary_answers) {
            entry["primary_answers"].push_back(answer_paragraph_json(answer));
        }
        entry["carousel_answers"] = Json::array();
        for (const auto& answer : unit.carousel_answers) {
            entry["carousel_answers"].push_back(answer_paragraph_json(answer));
        }
        units.push_back(std::move(entry));
    }
    value["units"] = std::move(units);
    return value;
}

Json to_json(const QuestionGridView& view) {
    Json value;
    value["kind"] = to_string(ViewKind::Grid);
    value["story_id"] = view.story_id;
    Json palette = Json::array();
    for (std::size_t i = 0; i < kGridPalette.size(); ++i) {
        palette.push_back({{"style_index", i},
                           {"color", std::string(kGridPalette[i].color)},
                           {"shape", std::string(kGridPalette[i].shape)}});
    }
    value["palette"] = std::move(palette);
    Json rows = Json::array();
    for (const auto& row : view.rows) {
        rows.push_back({{"question_id", row.question_id},
                        {"question_text", row.question_text},
                        {"answer_count", row.answer_count}});
    }
    value["row_questions"] = std::move(rows);
    Json cols = Json::array();
    for (const auto& col : view.cols) {
        cols.push_back({{"source_domain", col.source_domain},
                        {"questions_answered", col.questions_answered},
                        {"url", col.url}});
    }
    value["col_sources"] = std::move(cols);
    Json cells = Json::array();
    for (const auto& cell : view.cells) {
        cells.push_back({{"row", cell.row},
                         {"col", cell.col},
                         {"group_id", cell.group_id},
                         {"style_index", cell.style_index},
                         {"span_text", cell.span_text},
                         {"url", cell.url}});
    }
    value["cells"] = std::move(cells);
    return value;
}

Json to_json(const HeadlineListView& view) {
    Json value;
    value["kind"] = to_string(ViewKind::Headlines);
    value["story_id"] = view.story_id;
    value["story_title"] = view.story_title;
    Json entries = Json::array();
    for (const auto& entry : view.entries) {
        entries.push_back({{"source_domain", entry.source_domain},
                           {"headline", entry.headline},
                           {"url", entry.url},
                           {"is_partial", entry.is_partial}});
    }
    value["entries"] = std::move(entries);
    return value;
}

Json build_view_payload(ViewKind kind, const corpus::Story& story, const discordq::DiscordQuestionSet& set) {
    switch (kind) {
    case ViewKind::Annotated:
        return to_json(build_annotated(story, set), kind);
    case ViewKind::Recomposed:
        return to_json(compose_recomposed(story, set));
    case ViewKind::Grid:
        return to_json(build_grid(story, set));
    case ViewKind::Headlines:
        return to_json(build_headline_list(story));
    case ViewKind::Article:
        return to_json(build_news_article(story), kind);
    }
    throw InvalidRequest("unknown view kind");
}

} // namespace assembly::interfaces
