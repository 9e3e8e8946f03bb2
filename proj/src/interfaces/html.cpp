#include "assembly/corpus/utf8.hpp"
#include "assembly/error.hpp"
#include "assembly/interfaces/payload.hpp"
#include "assembly/json_fields.hpp"

#include <map>
#include <sstream>

namespace assembly::interfaces {

using namespace json_fields;

namespace {

constexpr const char* kStyle = R"(body{font-family:Georgia,serif;max-width:46rem;margin:2rem auto;padding:0 1rem;line-height:1.5;color:#222}
h1{font-size:1.8rem;line-height:1.2}
.byline{color:#666;font-size:.9rem}
details.annotation{border:1px solid #ccd;border-radius:6px;margin:.5rem 0 1rem;padding:.4rem .8rem;background:#f7f8fc}
details.annotation summary{cursor:pointer;font-weight:bold}
details.annotation li{margin:.3rem 0}
a{color:#1a55c4}
.unit{border:1px solid #ddd;border-radius:6px;padding:.6rem 1rem;margin:1rem 0}
.carousel{display:flex;overflow-x:auto;gap:1rem;padding-bottom:.5rem}
.carousel .answer{flex:0 0 18rem;border-left:3px solid #ccd;padding-left:.6rem;font-size:.95rem}
table.grid{border-collapse:collapse;font-size:.85rem}
table.grid th,table.grid td{border:1px solid #eee;padding:2px 4px;text-align:center}
table.grid th.q{text-align:left;max-width:22rem}
table.grid th.src{writing-mode:vertical-rl;font-weight:normal}
.shape{font-size:1.1rem;text-decoration:none}
ul.headlines li{margin:.4rem 0}
.partial{color:#888;font-size:.8rem})";

std::string page(const std::string& title, const std::string& body) {
    std::ostringstream out;
    out << "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n<title>" << escape_html(title)
        << "</title>\n<style>\n" << kStyle << "\n</style>\n</head>\n<body>\n" << body << "</body>\n</html>\n";
    return out.str();
}

std::string link(const std::string& url, const std::string& text) {
    return "<a href=\"" + escape_html(url) + "\" target=\"_blank\" rel=\"noopener\">" + escape_html(text) + "</a>";
}

std::string render_article(const Json& payload) {
    const std::string where = "article payload";
    std::ostringstream body;
    const std::string headline = require_string(payload, "headline", where);
    body << "<h1>" << escape_html(headline) << "</h1>\n";
    body << "<p class=\"byline\">" << link(require_string(payload, "url", where), require_string(payload, "byline", where))
         << "</p>\n";
    for (const auto& block : require_array(payload, "blocks", where)) {
        const std::string type = require_string(block, "type", "block");
        if (type == "paragraph") {
            body << "<p>" << escape_html(require_string(block, "text", "paragraph block")) << "</p>\n";
        } else if (type == "annotation") {
            // No "open" attribute: annotations start collapsed.
            body << "<details class=\"annotation\" data-question-id=\""
                 << escape_html(require_string(block, "question_id", "annotation")) << "\">\n<summary>"
                 << escape_html(require_string(block, "question_text", "annotation")) << "</summary>\n<ul>\n";
            for (const auto& answer : require_array(block, "answers", "annotation")) {
                body << "<li>" << escape_html(require_string(answer, "span_text", "annotation answer")) << " "
                     << link(require_string(answer, "url", "annotation answer"),
                             require_string(answer, "source_domain", "annotation answer"))
                     << "</li>\n";
            }
            body << "</ul>\n</details>\n";
        } else {
            throw SchemaError("unknown block type '" + type + "'");
        }
    }
    return page(headline, body.str());
}

std::string render_answer(const Json& answer) {
    const std::string where = "answer paragraph";
    const std::string text = require_string(answer, "paragraph_text", where);
    const Json& range = require(answer, "bold_char_range", where);
    if (!range.is_array() || range.size() != 2 || !range[0].is_number_unsigned() || !range[1].is_number_unsigned()) {
        throw SchemaError(where + ": bold_char_range must hold two offsets");
    }
    const std::size_t length = utf8::length(text);
    const std::size_t start = std::min(range[0].get<std::size_t>(), length);
    const std::size_t end = std::min(std::max(range[1].get<std::size_t>(), start), length);
    std::ostringstream out;
    out << escape_html(utf8::substr(text, 0, start)) << "<b>" << escape_html(utf8::substr(text, start, end)) << "</b>"
        << escape_html(utf8::substr(text, end, length)) << " "
        << link(require_string(answer, "url", where), require_string(answer, "source_domain", where));
    return out.str();
}

std::string render_recomposed(const Json& payload) {
    const std::string where = "recomposed payload";
    const std::string title = require_string(payload, "story_title", where);
    std::ostringstream body;
    body << "<h1>" << escape_html(title) << "</h1>\n<p class=\"byline\">"
         << escape_html(require_string(payload, "byline", where)) << "</p>\n<p>"
         << escape_html(require_string(payload, "intro_summary", where)) << "</p>\n";
    for (const auto& unit : require_array(payload, "units", where)) {
        body << "<section class=\"unit\">\n<h2>" << escape_html(require_string(unit, "question_text", "unit"))
             << "</h2>\n<ul>\n";
        for (const auto& answer : require_array(unit, "primary_answers", "unit")) {
            body << "<li>" << render_answer(answer) << "</li>\n";
        }
        body << "</ul>\n";
        const Json& carousel = require_array(unit, "carousel_answers", "unit");
        if (!carousel.empty()) {
            body << "<div class=\"carousel\">\n";
            for (const auto& answer : carousel) {
                body << "<div class=\"answer\">" << render_answer(answer) << "</div>\n";
            }
            body << "</div>\n";
        }
        body << "</section>\n";
    }
    return page(title, body.str());
}

const char* shape_glyph(std::string_view shape) {
    if (shape == "circle") return "&#9679;";
    if (shape == "square") return "&#9632;";
    if (shape == "triangle") return "&#9650;";
    if (shape == "diamond") return "&#9670;";
    if (shape == "star") return "&#9733;";
    if (shape == "hexagon") return "&#11042;";
    if (shape == "cross") return "&#10006;";
    return "&#9711;";
}

std::string render_grid(const Json& payload) {
    const std::string where = "grid payload";
    const Json& palette = require_array(payload, "palette", where);
    const Json& rows = require_array(payload, "row_questions", where);
    const Json& cols = require_array(payload, "col_sources", where);
    std::map<std::pair<std::size_t, std::size_t>, const Json*> cells;
    for (const auto& cell : require_array(payload, "cells", where)) {
        cells[{require_index(cell, "row", "cell"), require_index(cell, "col", "cell")}] = &cell;
    }
    std::ostringstream body;
    body << "<h1>Question Grid</h1>\n<table class=\"grid\">\n<tr><th></th>";
    for (const auto& col : cols) {
        body << "<th class=\"src\">" << escape_html(require_string(col, "source_domain", "column")) << "</th>";
    }
    body << "</tr>\n";
    for (std::size_t r = 0; r < rows.size(); ++r) {
        body << "<tr><th class=\"q\">" << escape_html(require_string(rows[r], "question_text", "row")) << "</th>";
        for (std::size_t c = 0; c < cols.size(); ++c) {
            const auto it = cells.find({r, c});
            if (it == cells.end()) {
                body << "<td></td>";
                continue;
            }
            const Json& cell = *it->second;
            const std::size_t style = require_index(cell, "style_index", "cell");
            if (style >= palette.size()) {
                throw SchemaError("cell style_index outside the palette");
            }
            // The title attribute is the hover panel with the answer span.
            body << "<td><a class=\"shape\" style=\"color:" << escape_html(require_string(palette[style], "color", "palette"))
                 << "\" href=\"" << escape_html(require_string(cell, "url", "cell"))
                 << "\" target=\"_blank\" rel=\"noopener\" title=\"" << escape_html(require_string(cell, "span_text", "cell"))
                 << "\">" << shape_glyph(require_string(palette[style], "shape", "palette")) << "</a></td>";
        }
        body << "</tr>\n";
    }
    body << "</table>\n";
    return page("Question Grid", body.str());
}

std::string render_headlines(const Json& payload) {
    const std::string where = "headlines payload";
    const std::string title = require_string(payload, "story_title", where);
    std::ostringstream body;
    body << "<h1>" << escape_html(title) << "</h1>\n<ul class=\"headlines\">\n";
    for (const auto& entry : require_array(payload, "entries", where)) {
        body << "<li>" << link(require_string(entry, "url", "headline"), require_string(entry, "headline", "headline"))
             << " <span class=\"byline\">" << escape_html(require_string(entry, "source_domain", "headline")) << "</span>";
        if (require_bool(entry, "is_partial", "headline")) {
            body << " <span class=\"partial\">(metadata only)</span>";
        }
        body << "</li>\n";
    }
    body << "</ul>\n";
    return page(title, body.str());
}

} // namespace

std::string escape_html(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
        case '&':
            out += "&amp;";
            break;
        case '<':
            out += "&lt;";
            break;
        case '>':
            out += "&gt;";
            break;
        case '"':
            out += "&quot;";
            break;
        case '\'':
            out += "&#39;";
            break;
        default:
            out += c;
        }
    }
    return out;
}

std::string render_html(const Json& payload) {
    const ViewKind kind = parse_view_kind(require_string(payload, "kind", "payload"));
    switch (kind) {
    case ViewKind::Annotated:
    case ViewKind::Article:
        return render_article(payload);
    case ViewKind::Recomposed:
        return render_recomposed(payload);
    case ViewKind::Grid:
        return render_grid(payload);
    case ViewKind::Headlines:
        return render_headlines(payload);
    }
    throw SchemaError("unknown payload kind");
}

} // namespace assembly::interfaces
