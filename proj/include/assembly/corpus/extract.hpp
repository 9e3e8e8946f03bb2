#pragma once

#include "assembly/corpus/story.hpp"

#include <string>
#include <string_view>

namespace assembly::corpus {

// Host of an http(s) URL with a leading "www." removed. Throws
// MalformedDocument when the URL is not an absolute http(s) URL.
std::string source_domain_from_url(std::string_view url);

// Readability-style extraction of one news page: headline from title
// metadata, summary from description metadata, body paragraphs from <p>
// elements (restricted to <article> when the page has one). Pages that are
// marked as paywalled or have no body text come back partial.
// Throws MalformedDocument when no headline can be recovered.
SourceArticle extract_article(std::string_view document, std::string_view url);

// Decodes named and numeric character references.
std::string decode_entities(std::string_view text);

} // namespace assembly::corpus
