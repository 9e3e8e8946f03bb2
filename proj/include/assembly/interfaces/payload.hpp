#pragma once

#include "assembly/interfaces/views.hpp"
#include "assembly/json.hpp"

#include <string>

// Wire format of the views (the JSON the reading client consumes) and a
// static HTML rendering of the same payloads.
namespace assembly::interfaces {

Json to_json(const ArticleView& view, ViewKind kind);
Json to_json(const RecomposedArticleView& view);
Json to_json(const QuestionGridView& view);
Json to_json(const HeadlineListView& view);

// Builds one view and returns its payload. Errors of the builder propagate.
Json build_view_payload(ViewKind kind, const corpus::Story& story, const discordq::DiscordQuestionSet& set);

// Self-contained page for a payload produced by build_view_payload. Throws
// SchemaError when the payload lacks the fields its kind requires.
std::string render_html(const Json& payload);

std::string escape_html(std::string_view text);

} // namespace assembly::interfaces
