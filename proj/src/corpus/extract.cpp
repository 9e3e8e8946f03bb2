#include "assembly/corpus/extract.hpp"

#include "assembly/corpus/utf8.hpp"
#include "assembly/error.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <regex>
#include <vector>

namespace assembly::corpus {

namespace {

std::string to_lower(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool is_space(char c) {
    return std::isspace(static_cast<unsigned char>(c)) != 0;
}

std::string collapse_whitespace(std::string_view text) {
    std::string out;
    bool pendingSpace = false;
    for (char c : text) {
        if (is_space(c)) {
            pendingSpace = !out.empty();
            continue;
        }
        if (pendingSpace) {
            out += ' ';
            pendingSpace = false;
        }
        out += c;
    }
    return out;
}

struct Tag {
    std::string name;
    bool closing = false;
    std::map<std::string, std::string> attributes;
};

// Parses the tag starting at document[pos] == '<'; advances pos past '>'.
Tag parse_tag(std::string_view document, std::size_t& pos) {
    Tag tag;
    std::size_t i = pos + 1;
    if (i < document.size() && document[i] == '/') {
        tag.closing = true;
        ++i;
    }
    const std::size_t nameStart = i;
    while (i < document.size() && (std::isalnum(static_cast<unsigned char>(document[i])) || document[i] == '-')) {
        ++i;
    }
    tag.name = to_lower(document.substr(nameStart, i - nameStart));

    while (i < document.size() && document[i] != '>') {
        if (is_space(document[i]) || document[i] == '/') {
            ++i;
            continue;
        }
        const std::size_t attrStart = i;
        while (i < document.size() && !is_space(document[i]) && document[i] != '=' && document[i] != '>') {
            ++i;
        }
        std::string name = to_lower(document.substr(attrStart, i - attrStart));
        std::string value;
        while (i < document.size() && is_space(document[i])) {
            ++i;
        }
        if (i < document.size() && document[i] == '=') {
            ++i;
            while (i < document.size() && is_space(document[i])) {
                ++i;
            }
            if (i < document.size() && (document[i] == '"' || document[i] == '\'')) {
                const char quote = document[i++];
                const std::size_t valueStart = i;
                while (i < document.size() && document[i] != quote) {
                    ++i;
                }
                value = std::string(document.substr(valueStart, i - valueStart));
                if (i < document.size()) {
                    ++i;
                }
            } else {
                const std::size_t valueStart = i;
                while (i < document.size() && !is_space(document[i]) && document[i] != '>') {
                    ++i;
                }
                value = std::string(document.substr(valueStart, i - valueStart));
            }
        }
        if (!name.empty()) {
            tag.attributes.emplace(std::move(name), decode_entities(value));
        }
    }
    pos = i < document.size() ? i + 1 : document.size();
    return tag;
}

// Elements whose text never belongs to the article body.
bool is_boilerplate(const std::string& name) {
    static const char* const kNames[] = {"nav", "header", "footer", "aside", "form", "figure",
                                         "noscript", "button", "select", "template", "svg"};
    return std::any_of(std::begin(kNames), std::end(kNames), [&](const char* n) { return name == n; });
}

bool is_raw_text(const std::string& name) {
    return name == "script" || name == "style";
}

bool is_block(const std::string& name) {
    static const char* const kNames[] = {"p", "div", "section", "article", "h1", "h2", "h3", "h4",
                                         "h5", "h6", "ul", "ol", "li", "table", "blockquote", "main"};
    return std::any_of(std::begin(kNames), std::end(kNames), [&](const char* n) { return name == n; });
}

struct Paragraph {
    std::string text;
    bool inArticle = false;
};

struct PageScan {
    std::string title;
    std::string firstH1;
    std::map<std::string, std::string> meta;
    std::vector<Paragraph> paragraphs;
};

PageScan scan(std::string_view document) {
    PageScan page;
    std::vector<std::string> boilerplateStack;
    int articleDepth = 0;
    bool inTitle = false;
    int h1Depth = 0;
    bool inParagraph = false;
    std::string text;
    std::string h1Text;
    bool paragraphInArticle = false;

    auto flushParagraph = [&]() {
        if (inParagraph) {
            std::string collapsed = collapse_whitespace(decode_entities(text));
            if (!collapsed.empty()) {
                page.paragraphs.push_back({std::move(collapsed), paragraphInArticle});
            }
        }
        inParagraph = false;
        text.clear();
    };

    std::size_t pos = 0;
    while (pos < document.size()) {
        const char c = document[pos];
        if (c != '<') {
            const std::size_t next = std::min(document.find('<', pos), document.size());
            const std::string_view chunk = document.substr(pos, next - pos);
            if (inTitle) {
                page.title.append(chunk);
            }
            if (h1Depth > 0) {
                h1Text.append(chunk);
            }
            if (inParagraph && boilerplateStack.empty()) {
                text.append(chunk);
            }
            pos = next;
            continue;
        }
        if (document.substr(pos, 4) == "<!--") {
            const std::size_t end = document.find("-->", pos + 4);
            pos = end == std::string_view::npos ? document.size() : end + 3;
            continue;
        }
        if (pos + 1 < document.size() && (document[pos + 1] == '!' || document[pos + 1] == '?')) {
            const std::size_t end = document.find('>', pos);
            pos = end == std::string_view::npos ? document.size() : end + 1;
            continue;
        }
        if (pos + 1 >= document.size()
            || !(std::isalpha(static_cast<unsigned char>(document[pos + 1])) || document[pos + 1] == '/')) {
            if (inParagraph) {
                text += '<';
            }
            ++pos;
            continue;
        }

        Tag tag = parse_tag(document, pos);
        if (tag.name.empty()) {
            continue;
        }
        if (!tag.closing && is_raw_text(tag.name)) {
            const std::string closer = "</" + tag.name;
            const std::string lowered = to_lower(document.substr(pos));
            const std::size_t end = lowered.find(closer);
            if (end == std::string::npos) {
                pos = document.size();
            } else {
                pos += end;
                const std::size_t gt = document.find('>', pos);
                pos = gt == std::string_view::npos ? document.size() : gt + 1;
            }
            continue;
        }

        if (tag.name == "meta" && !tag.closing) {
            const auto content = tag.attributes.find("content");
            if (content != tag.attributes.end()) {
                for (const char* key : {"name", "property", "itemprop"}) {
                    const auto it = tag.attributes.find(key);
                    if (it != tag.attributes.end()) {
                        page.meta.emplace(to_lower(it->second), content->second);
                    }
                }
            }
            continue;
        }
        if (tag.name == "title") {
            inTitle = !tag.closing;
            continue;
        }
        if (tag.name == "h1") {
            if (!tag.closing) {
                ++h1Depth;
            } else if (h1Depth > 0 && --h1Depth == 0 && page.firstH1.empty()) {
                page.firstH1 = collapse_whitespace(decode_entities(h1Text));
            }
        }
        if (tag.name == "br" && inParagraph) {
            text += ' ';
            continue;
        }
        if (is_boilerplate(tag.name)) {
            if (!tag.closing) {
                boilerplateStack.push_back(tag.name);
            } else {
                const auto it = std::find(boilerplateStack.rbegin(), boilerplateStack.rend(), tag.name);
                if (it != boilerplateStack.rend()) {
                    boilerplateStack.erase(std::next(it).base(), boilerplateStack.end());
                }
            }
            continue;
        }
        if (tag.name == "article") {
            flushParagraph();
            articleDepth += tag.closing ? (articleDepth > 0 ? -1 : 0) : 1;
            continue;
        }
        if (tag.name == "p") {
            flushParagraph();
            if (!tag.closing && boilerplateStack.empty()) {
                inParagraph = true;
                paragraphInArticle = articleDepth > 0;
            }
            continue;
        }
        if (is_block(tag.name)) {
            flushParagraph();
        }
    }
    flushParagraph();
    page.title = collapse_whitespace(decode_entities(page.title));
    return page;
}

std::optional<std::string> meta_value(const PageScan& page, std::initializer_list<const char*> keys) {
    for (const char* key : keys) {
        const auto it = page.meta.find(key);
        if (it != page.meta.end()) {
            std::string value = collapse_whitespace(it->second);
            if (!value.empty()) {
                return value;
            }
        }
    }
    return std::nullopt;
}

bool is_paywalled(std::string_view document, const PageScan& page) {
    static const std::regex kFreeFlag(R"re(isaccessibleforfree"?\s*[:=,]?\s*"?\s*false)re",
                                      std::regex::icase);
    const auto flag = page.meta.find("isaccessibleforfree");
    if (flag != page.meta.end() && to_lower(flag->second) == "false") {
        return true;
    }
    return std::regex_search(document.begin(), document.end(), kFreeFlag);
}

} // namespace

std::string decode_entities(std::string_view text) {
    static const std::map<std::string, char32_t, std::less<>> kNamed = {
        {"amp", U'&'},     {"lt", U'<'},       {"gt", U'>'},       {"quot", U'"'},
        {"apos", U'\''},   {"nbsp", U' '},     {"mdash", U'—'}, {"ndash", U'–'},
        {"hellip", U'…'}, {"lsquo", U'‘'}, {"rsquo", U'’'}, {"ldquo", U'“'},
        {"rdquo", U'”'}, {"copy", U'©'},
    };
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        if (text[i] != '&') {
            out += text[i++];
            continue;
        }
        const std::size_t semi = text.find(';', i + 1);
        if (semi == std::string_view::npos || semi - i > 12) {
            out += text[i++];
            continue;
        }
        const std::string_view name = text.substr(i + 1, semi - i - 1);
        if (!name.empty() && name[0] == '#') {
            char32_t cp = 0;
            bool ok = name.size() > 1;
            const bool hex = ok && (name[1] == 'x' || name[1] == 'X');
            for (std::size_t k = hex ? 2 : 1; ok && k < name.size(); ++k) {
                const char d = name[k];
                if (hex && std::isxdigit(static_cast<unsigned char>(d))) {
                    cp = cp * 16 + static_cast<char32_t>(std::isdigit(static_cast<unsigned char>(d))
                                                             ? d - '0'
                                                             : std::tolower(d) - 'a' + 10);
                } else if (!hex && std::isdigit(static_cast<unsigned char>(d))) {
                    cp = cp * 10 + static_cast<char32_t>(d - '0');
                } else {
                    ok = false;
                }
                if (cp > 0x10FFFF) {
                    ok = false;
                }
            }
            if (ok && name.size() > (hex ? 2u : 1u)) {
                utf8::append(out, cp == 0xA0 ? U' ' : cp);
                i = semi + 1;
                continue;
            }
        } else {
            const auto it = kNamed.find(name);
            if (it != kNamed.end()) {
                utf8::append(out, it->second);
                i = semi + 1;
                continue;
            }
        }
        out += text[i++];
    }
    return out;
}

std::string source_domain_from_url(std::string_view url) {
    static const std::regex kUrl(R"(^https?://([A-Za-z0-9.-]+)(:\d+)?([/?#].*)?$)", std::regex::icase);
    std::match_results<std::string_view::const_iterator> match;
    if (!std::regex_match(url.begin(), url.end(), match, kUrl)) {
        throw MalformedDocument("not an absolute http(s) url: '" + std::string(url) + "'");
    }
    std::string host = to_lower(match[1].str());
    if (host.rfind("www.", 0) == 0) {
        host.erase(0, 4);
    }
    if (host.empty() || host.find('.') == std::string::npos) {
        throw MalformedDocument("url has no registrable host: '" + std::string(url) + "'");
    }
    return host;
}

SourceArticle extract_article(std::string_view document, std::string_view url) {
    SourceArticle::Fields fields;
    fields.source_domain = source_domain_from_url(url);
    fields.url = std::string(url);
    if (document.find_first_not_of(" \t\r\n") == std::string_view::npos) {
        throw MalformedDocument("empty document for '" + fields.url + "'");
    }

    const PageScan page = scan(document);
    if (auto title = meta_value(page, {"og:title", "twitter:title"})) {
        fields.headline = std::move(*title);
    } else if (!page.title.empty()) {
        fields.headline = page.title;
    } else if (!page.firstH1.empty()) {
        fields.headline = page.firstH1;
    } else {
        throw MalformedDocument("no headline recoverable from '" + fields.url + "'");
    }
    fields.summary = meta_value(page, {"description", "og:description", "twitter:description"});

    if (!is_paywalled(document, page)) {
        const bool hasArticle = std::any_of(page.paragraphs.begin(), page.paragraphs.end(),
                                            [](const Paragraph& p) { return p.inArticle; });
        std::string body;
        for (const auto& paragraph : page.paragraphs) {
            if (hasArticle && !paragraph.inArticle) {
                continue;
            }
            body += paragraph.text;
            body += "\n\n";
        }
        fields.paragraphs = paragraph_split(body);
    }
    fields.is_partial = fields.paragraphs.empty();
    return SourceArticle::create(std::move(fields));
}

} // namespace assembly::corpus
