#include "assembly/discordq/stages.hpp"

#include "assembly/discordq/text.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <unordered_set>

namespace assembly::discordq {

namespace {

using text::Token;

enum class VerbKind { Aux, Past, Present, PresentPlural };

struct ClauseParse {
    std::size_t subjectToken = 0; // first subject token
    std::size_t verbToken = 0;
    VerbKind kind = VerbKind::Past;
    std::string subject;          // as written
    std::string subjectInverted;  // with a sentence-initial function word lowercased
    std::string verb;             // as written
    std::size_t predicateBegin = 0; // byte offset just after the verb
    std::size_t predicateEnd = 0;
};

bool contains(const std::unordered_set<std::string_view>& set, std::string_view word) {
    return set.count(word) > 0;
}

const std::unordered_set<std::string_view> kAuxiliaries = {
    "is", "are", "was", "were", "has", "have", "had", "will", "would", "can", "could", "should",
    "may", "might", "must",
};

const std::unordered_set<std::string_view> kLeadIns = {
    "in", "on", "at", "after", "before", "while", "when", "if", "although", "though", "as",
    "since", "despite", "during", "meanwhile", "however", "but", "and", "still", "yet", "also",
    "for", "with", "by", "under", "according", "last", "earlier", "later", "now", "today",
    "yesterday", "then", "so", "instead", "amid", "following", "overall", "separately",
};

const std::unordered_set<std::string_view> kNounPhraseOpeners = {
    "the", "a", "an", "this", "that", "these", "those", "its", "their", "his", "her", "our",
    "my", "your", "of", "to", "for", "in", "on", "at", "by", "with", "from", "and", "or",
    "some", "many", "several", "no", "any", "each", "every",
};

const std::unordered_set<std::string_view> kLowercaseInSubject = {
    "the", "a", "an", "this", "that", "these", "those", "its", "their", "his", "her", "our",
    "he", "she", "they", "we", "it", "some", "many", "most", "several", "all", "both", "each",
    "other", "another", "such", "more", "few", "any", "no", "my", "your", "there",
};

const std::unordered_set<std::string_view> kPresentVerbs = {
    "says", "plans", "expects", "warns", "wants", "needs", "faces", "remains", "seeks",
    "argues", "claims", "believes", "continues", "includes", "shows", "suggests", "hopes",
    "affects", "raises", "cuts", "makes", "takes", "gives", "sees", "gets", "leads", "calls",
    "puts", "keeps", "holds", "begins", "means", "sets", "pays", "runs", "rises", "falls",
    "grows", "loses", "adds", "asks", "tells", "comes", "goes", "helps", "predicts",
    "estimates", "reports", "denies", "insists", "accuses", "blames", "supports", "opposes",
    "threatens", "urges", "requires", "allows", "costs", "plunges", "surges", "jumps",
    "drops", "offers", "announces", "considers", "intends", "fears", "signals", "hits",
    "reaches", "tops", "exceeds", "lacks", "owns", "controls", "uses", "struggles", "agrees",
    "disagrees", "rejects", "accepts", "launches", "proposes", "approves", "blocks", "bans",
    "limits", "increases", "decreases", "reduces", "worsens", "improves", "eases",
};

// Base-form verbs, accepted only after a plural person subject.
const std::unordered_set<std::string_view> kPluralPresentVerbs = {
    "say", "expect", "warn", "want", "need", "fear", "believe", "argue", "predict", "estimate",
    "hope", "plan", "think", "worry", "claim", "insist", "agree", "urge", "oppose", "support",
    "face", "blame", "accuse", "demand", "question", "doubt", "disagree", "remain",
};

const std::unordered_set<std::string_view> kPluralSubjects = {
    "officials", "lawmakers", "analysts", "economists", "experts", "investors", "workers",
    "residents", "people", "leaders", "voters", "critics", "senators", "democrats",
    "republicans", "they", "we", "i", "you", "researchers", "scientists", "students",
    "parents", "consumers", "shoppers", "families", "doctors", "prosecutors", "lawyers",
    "diplomats", "protesters", "manufacturers", "retailers", "employers", "executives",
    "regulators", "authorities", "negotiators", "police",
};

const std::unordered_set<std::string_view> kPersonHeads = {
    "official", "officials", "president", "minister", "spokesperson", "spokesman",
    "spokeswoman", "lawmakers", "lawmaker", "analysts", "analyst", "economists", "economist",
    "experts", "expert", "investors", "workers", "residents", "people", "leaders", "leader",
    "voters", "critics", "senator", "senators", "governor", "mayor", "ceo", "chief",
    "secretary", "chairman", "chair", "director", "police", "protesters", "parents",
    "consumers", "shoppers", "families", "doctors", "researchers", "scientists", "students",
    "judge", "prosecutors", "lawyers", "diplomats", "democrats", "republicans", "he", "she",
    "they", "we", "i", "you", "manufacturers", "retailers", "employers", "executives",
    "regulators", "authorities", "spokesmen", "negotiators",
};

const std::unordered_set<std::string_view> kNumberWords = {
    "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten", "eleven",
    "twelve", "fifteen", "twenty", "thirty", "forty", "fifty", "hundred", "hundreds",
    "thousand", "thousands", "million", "millions", "billion", "billions", "trillion",
    "dozen", "dozens",
};

const std::unordered_set<std::string_view> kScaleWords = {
    "hundred", "thousand", "million", "billion", "trillion", "hundreds", "thousands",
    "millions", "billions",
};

const std::unordered_set<std::string_view> kMoneyWords = {
    "percent", "percentage", "dollars", "dollar", "euros", "euro", "pounds", "cents", "yuan",
    "yen", "rupees", "usd",
};

const std::unordered_set<std::string_view> kApproximators = {
    "about", "around", "nearly", "almost", "roughly", "approximately", "over", "more", "less",
    "than", "at", "least", "up", "to", "some", "an", "estimated", "just", "under", "fewer",
};

// Words ending in "ed" that are not past forms.
const std::unordered_set<std::string_view> kNotPast = {
    "need", "feed", "speed", "proceed", "succeed", "exceed", "breed", "bleed", "seed", "shed",
    "embed", "hundred", "indeed", "naked", "sacred", "wicked", "greed", "weed", "creed",
};

const std::unordered_set<std::string_view> kIrregularPast = {
    "said", "made", "took", "went", "came", "saw", "gave", "found", "told", "became", "left",
    "felt", "brought", "began", "kept", "held", "wrote", "stood", "heard", "meant", "met",
    "ran", "paid", "spoke", "led", "grew", "lost", "fell", "sent", "built", "spent", "rose",
    "won", "sold", "bought", "fought", "thought", "taught", "caught", "struck", "drew",
    "drove", "broke", "chose", "shot", "laid", "hid", "froze", "sought", "shook", "threw",
    "flew", "forgot", "fled", "hung", "swore", "withdrew", "got", "knew", "dealt", "sank",
    "shrank", "swept", "lent", "did", "cut", "hit", "set", "put", "let", "quit", "shut",
};

bool is_space(char c) {
    return std::isspace(static_cast<unsigned char>(c)) != 0;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && is_space(s.front())) {
        s.remove_prefix(1);
    }
    while (!s.empty() && is_space(s.back())) {
        s.remove_suffix(1);
    }
    return s;
}

// Drops trailing punctuation and quotes.
std::string_view strip_trailing(std::string_view s) {
    s = trim(s);
    while (!s.empty()) {
        const unsigned char c = static_cast<unsigned char>(s.back());
        if (c < 0x80 && (std::isalnum(c) || c == ')' || c == '%')) {
            break;
        }
        if (c >= 0x80) {
            // Curly quotes end in 0x9C..0x9D; anything else non-ASCII is text.
            if (s.size() >= 3 && s.substr(s.size() - 3, 2) == "\xE2\x80") {
                s.remove_suffix(3);
                s = trim(s);
                continue;
            }
            break;
        }
        s.remove_suffix(1);
        s = trim(s);
    }
    return s;
}

std::string_view strip_leading_quotes(std::string_view s) {
    s = trim(s);
    while (!s.empty()) {
        if (s.front() == '"' || s.front() == '\'' || s.front() == '(') {
            s.remove_prefix(1);
        } else if (s.substr(0, 3) == "\xE2\x80\x9C" || s.substr(0, 3) == "\xE2\x80\x98") {
            s.remove_prefix(3);
        } else {
            break;
        }
        s = trim(s);
    }
    return s;
}

std::string collapse(std::string_view s) {
    std::string out;
    bool space = false;
    for (char c : s) {
        if (is_space(c)) {
            space = !out.empty();
            continue;
        }
        if (space) {
            out += ' ';
            space = false;
        }
        out += c;
    }
    return out;
}

std::string finish_question(std::string body) {
    body = collapse(body);
    while (!body.empty() && (body.back() == ',' || body.back() == ' ')) {
        body.pop_back();
    }
    if (body.empty()) {
        return body;
    }
    body[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(body[0])));
    body += '?';
    return body;
}

bool starts_upper(std::string_view sentence, const Token& token) {
    return std::isupper(static_cast<unsigned char>(sentence[token.begin])) != 0;
}

bool is_clause_break(char c) {
    return c == ',' || c == ';' || c == ':';
}

bool has_break_between(std::string_view sentence, std::size_t from, std::size_t to) {
    for (std::size_t i = from; i < to && i < sentence.size(); ++i) {
        if (is_clause_break(sentence[i])) {
            return true;
        }
        // em dash
        if (sentence.substr(i, 3) == "\xE2\x80\x94") {
            return true;
        }
    }
    return false;
}

std::optional<VerbKind> classify_verb(std::string_view sentence, const std::vector<Token>& tokens, std::size_t i) {
    const Token& token = tokens[i];
    if (contains(kAuxiliaries, token.lower)) {
        return VerbKind::Aux;
    }
    if (starts_upper(sentence, token)) {
        return std::nullopt;
    }
    if (i > 0 && contains(kNounPhraseOpeners, tokens[i - 1].lower)) {
        return std::nullopt;
    }
    if (contains(kIrregularPast, token.lower)) {
        return VerbKind::Past;
    }
    if (token.lower.size() >= 4 && token.lower.ends_with("ed") && !contains(kNotPast, token.lower)) {
        return VerbKind::Past;
    }
    if (contains(kPresentVerbs, token.lower)) {
        return VerbKind::Present;
    }
    if (i > 0 && contains(kPluralPresentVerbs, token.lower) && contains(kPluralSubjects, tokens[i - 1].lower)) {
        return VerbKind::PresentPlural;
    }
    return std::nullopt;
}

// Parses subject / verb / predicate over tokens [first, last). The predicate
// stops at the first clause break after the verb or at `limitByte`.
std::optional<ClauseParse> parse_clause(std::string_view sentence, const std::vector<Token>& tokens,
                                        std::size_t first, std::size_t last, std::size_t limitByte) {
    if (first + 1 >= last) {
        return std::nullopt;
    }
    const std::size_t searchEnd = std::min(last, first + 9);
    for (std::size_t i = first + 1; i < searchEnd; ++i) {
        if (has_break_between(sentence, tokens[first].begin, tokens[i].begin)) {
            return std::nullopt;
        }
        const auto kind = classify_verb(sentence, tokens, i);
        if (!kind) {
            continue;
        }
        ClauseParse parse;
        parse.subjectToken = first;
        parse.verbToken = i;
        parse.kind = *kind;
        parse.subject = std::string(strip_leading_quotes(
            sentence.substr(tokens[first].begin, tokens[i].begin - tokens[first].begin)));
        parse.subject = std::string(trim(parse.subject));
        if (parse.subject.empty()) {
            return std::nullopt;
        }
        parse.subjectInverted = parse.subject;
        const Token& head = tokens[first];
        // A sentence-initial capital is dropped for function words, known
        // common nouns and the first word of a multi-word subject whose
        // second word is lowercase ("Ticket prices"), but not for names. A lone
        // regular plural ("Prices") is taken as a common noun too.
        const bool lonePlural = i == first + 1 && head.lower.size() >= 4 && head.lower.ends_with('s')
            && !head.lower.ends_with("ss") && !head.lower.ends_with("us") && !head.lower.ends_with("is");
        const bool commonNoun = contains(kPersonHeads, head.lower) || contains(kPluralSubjects, head.lower)
            || (i >= first + 2 && !starts_upper(sentence, tokens[first + 1])) || lonePlural;
        if ((contains(kLowercaseInSubject, head.lower) || commonNoun) && head.lower != "i") {
            const std::size_t offset = parse.subject.find_first_not_of("\"'(");
            if (offset != std::string::npos) {
                parse.subjectInverted[offset] =
                    static_cast<char>(std::tolower(static_cast<unsigned char>(parse.subjectInverted[offset])));
            }
        }
        parse.verb = std::string(sentence.substr(tokens[i].begin, tokens[i].end - tokens[i].begin));
        parse.predicateBegin = tokens[i].end;
        std::size_t end = limitByte;
        for (std::size_t b = parse.predicateBegin; b < limitByte; ++b) {
            if (is_clause_break(sentence[b]) || sentence.substr(b, 3) == "\xE2\x80\x94") {
                end = b;
                break;
            }
        }
        parse.predicateEnd = end;
        return parse;
    }
    return std::nullopt;
}

std::string do_support(VerbKind kind) {
    switch (kind) {
    case VerbKind::Present:
        return "does";
    case VerbKind::PresentPlural:
        return "do";
    default:
        return "did";
    }
}

std::string lower_copy(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

// "expect" -> "expects", "worry" -> "worries".
std::string third_person(const std::string& base) {
    if (base.size() > 1 && base.back() == 'y' && std::string_view("aeiou").find(base[base.size() - 2]) == std::string_view::npos) {
        return base.substr(0, base.size() - 1) + "ies";
    }
    if (base.ends_with("s") || base.ends_with("sh") || base.ends_with("ch") || base.ends_with("x") || base.ends_with("o")) {
        return base + "es";
    }
    return base + "s";
}

// "Why <inverted clause>" / "How many X <inverted clause>" share this form.
std::string inverted_clause(const ClauseParse& parse, std::string_view predicate) {
    std::string out;
    if (parse.kind == VerbKind::Aux) {
        out = lower_copy(parse.verb) + " " + parse.subjectInverted;
    } else {
        const std::string verb = lower_copy(parse.verb);
        out = do_support(parse.kind) + " " + parse.subjectInverted + " "
            + (parse.kind == VerbKind::PresentPlural ? verb : text::verb_lemma(verb));
    }
    const std::string_view pred = strip_trailing(predicate);
    if (!pred.empty()) {
        out += " ";
        out += pred;
    }
    return out;
}

bool is_person_subject(std::string_view sentence, const std::vector<Token>& tokens, const ClauseParse& parse) {
    const Token& last = tokens[parse.verbToken - 1];
    if (contains(kPersonHeads, last.lower)) {
        return true;
    }
    const Token& beforeLast = tokens[parse.verbToken - 2 < parse.subjectToken ? parse.subjectToken : parse.verbToken - 2];
    return parse.verbToken - parse.subjectToken >= 2 && starts_upper(sentence, last)
        && starts_upper(sentence, beforeLast) && !text::is_stopword(beforeLast.lower);
}

bool is_year(std::string_view sentence, const Token& token) {
    if (token.lower.size() != 4 || !std::all_of(token.lower.begin(), token.lower.end(), ::isdigit)) {
        return false;
    }
    if (token.begin > 0 && (sentence[token.begin - 1] == '$')) {
        return false;
    }
    return token.lower.starts_with("19") || token.lower.starts_with("20");
}

bool is_quantity(std::string_view sentence, const Token& token) {
    if (std::isdigit(static_cast<unsigned char>(token.lower[0]))) {
        return std::all_of(token.lower.begin(), token.lower.end(), ::isdigit) && !is_year(sentence, token);
    }
    return contains(kNumberWords, token.lower);
}

bool preceded_by_currency(std::string_view sentence, const Token& token) {
    if (token.begin == 0) {
        return false;
    }
    const char prev = sentence[token.begin - 1];
    if (prev == '$') {
        return true;
    }
    return token.begin >= 2 && (sentence.substr(token.begin - 2, 2) == "\xC2\xA3"       // pound
                                || (token.begin >= 3 && sentence.substr(token.begin - 3, 3) == "\xE2\x82\xAC")); // euro
}

struct Quantity {
    std::size_t token = 0;
    bool much = false;
    std::string head;
};

std::optional<Quantity> find_quantity(std::string_view sentence, const std::vector<Token>& tokens,
                                      std::size_t first, std::size_t last, std::size_t verbToken) {
    for (std::size_t q = first; q < last; ++q) {
        if (!is_quantity(sentence, tokens[q])) {
            continue;
        }
        Quantity quantity;
        quantity.token = q;
        quantity.much = preceded_by_currency(sentence, tokens[q]);
        std::size_t k = q + 1;
        // Continuation of the number itself: "9.1", "1,200", "5 billion".
        while (k < last) {
            const bool joined = tokens[k].begin == tokens[k - 1].end + 1
                && (sentence[tokens[k - 1].end] == '.' || sentence[tokens[k - 1].end] == ',')
                && std::isdigit(static_cast<unsigned char>(sentence[tokens[k].begin]));
            if (joined || contains(kScaleWords, tokens[k].lower)) {
                ++k;
                continue;
            }
            break;
        }
        if (tokens[k - 1].end < sentence.size() && sentence[tokens[k - 1].end] == '%') {
            quantity.much = true;
        }
        if (k < last && contains(kMoneyWords, tokens[k].lower)) {
            quantity.much = true;
        }
        if (!quantity.much) {
            std::vector<std::string_view> head;
            while (k < last && k != verbToken && head.size() < 2) {
                const Token& t = tokens[k];
                if (text::is_stopword(t.lower) || starts_upper(sentence, t)
                    || !std::isalpha(static_cast<unsigned char>(t.lower[0]))
                    || has_break_between(sentence, tokens[k - 1].end, t.begin)) {
                    break;
                }
                head.push_back(sentence.substr(t.begin, t.end - t.begin));
                ++k;
            }
            if (head.empty()) {
                continue;
            }
            for (std::size_t h = 0; h < head.size(); ++h) {
                quantity.head += (h ? " " : "") + std::string(head[h]);
            }
        }
        return quantity;
    }
    return std::nullopt;
}

// Byte offset where the quantity phrase starts, moved back over a currency
// sign and approximators such as "about" or "more than".
std::size_t quantity_phrase_start(std::string_view sentence, const std::vector<Token>& tokens,
                                  std::size_t q, std::size_t floorToken) {
    std::size_t start = tokens[q].begin;
    while (start > 0 && (sentence[start - 1] == '$')) {
        --start;
    }
    if (start >= 2 && sentence.substr(start - 2, 2) == "\xC2\xA3") {
        start -= 2;
    } else if (start >= 3 && sentence.substr(start - 3, 3) == "\xE2\x82\xAC") {
        start -= 3;
    }
    std::size_t k = q;
    while (k > floorToken + 1 && contains(kApproximators, tokens[k - 1].lower)) {
        --k;
        start = tokens[k].begin;
    }
    return start;
}

} // namespace

std::vector<std::string> question_templates(std::string_view sentence) {
    std::vector<std::string> questions;
    sentence = trim(sentence);
    if (sentence.empty() || sentence.back() == '?') {
        return questions;
    }
    const std::vector<Token> tokens = text::tokenize(sentence);
    if (tokens.size() < 3) {
        return questions;
    }

    std::optional<std::size_t> cue;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (tokens[i].lower == "because"
            || (tokens[i].lower == "due" && i + 1 < tokens.size() && tokens[i + 1].lower == "to")) {
            cue = i;
            break;
        }
    }

    // Main clause token range.
    std::size_t first = 0;
    std::size_t last = tokens.size();
    std::size_t limitByte = sentence.size();
    if (cue && *cue > 0) {
        last = *cue;
        limitByte = tokens[*cue].begin;
    }
    auto token_after_comma = [&](std::size_t from) -> std::optional<std::size_t> {
        const std::size_t comma = sentence.find(',', tokens[from].end);
        if (comma == std::string_view::npos || comma >= limitByte) {
            return std::nullopt;
        }
        for (std::size_t i = from; i < last; ++i) {
            if (tokens[i].begin > comma) {
                return i;
            }
        }
        return std::nullopt;
    };
    bool parsable = true;
    if ((cue && *cue == 0) || contains(kLeadIns, tokens[0].lower)) {
        const auto after = token_after_comma(0);
        if (after) {
            first = *after;
        } else {
            parsable = false;
        }
    }

    std::optional<ClauseParse> main;
    if (parsable) {
        main = parse_clause(sentence, tokens, first, last, limitByte);
    }

    if (main) {
        const std::string_view predicate =
            strip_trailing(sentence.substr(main->predicateBegin, main->predicateEnd - main->predicateBegin));
        if (!predicate.empty()) {
            const std::string wh = is_person_subject(sentence, tokens, *main) ? "who" : "what";
            const std::string verb =
                main->kind == VerbKind::PresentPlural ? third_person(lower_copy(main->verb)) : main->verb;
            questions.push_back(finish_question(wh + " " + verb + " " + std::string(predicate)));
        }
    }

    if (cue && main) {
        // The clause the cue explains is the main clause in both word orders.
        const std::string_view predicate =
            sentence.substr(main->predicateBegin, main->predicateEnd - main->predicateBegin);
        questions.push_back(finish_question("why " + inverted_clause(*main, predicate)));
    }

    if (main) {
        const auto quantity = find_quantity(sentence, tokens, first, last, main->verbToken);
        if (quantity && quantity->token != main->verbToken) {
            const std::string lead = quantity->much ? std::string("how much") : "how many " + quantity->head;
            if (quantity->token > main->verbToken) {
                const std::size_t phraseStart =
                    quantity_phrase_start(sentence, tokens, quantity->token, main->verbToken);
                if (phraseStart >= main->predicateBegin && quantity->token < last
                    && tokens[quantity->token].begin <= main->predicateEnd) {
                    const std::string_view before =
                        sentence.substr(main->predicateBegin, phraseStart - main->predicateBegin);
                    questions.push_back(finish_question(lead + " " + inverted_clause(*main, before)));
                }
            } else if (quantity->token >= main->subjectToken) {
                const std::string_view predicate = strip_trailing(
                    sentence.substr(main->predicateBegin, main->predicateEnd - main->predicateBegin));
                questions.push_back(finish_question(lead + " " + main->verb
                                                    + (predicate.empty() ? "" : " " + std::string(predicate))));
            }
        }
    }

    std::vector<std::string> unique;
    for (auto& q : questions) {
        if (!q.empty() && std::find(unique.begin(), unique.end(), q) == unique.end()) {
            unique.push_back(std::move(q));
        }
    }
    return unique;
}

std::vector<CandidateQuestion> generate_questions_baseline(const corpus::SourceArticle& article) {
    std::vector<CandidateQuestion> candidates;
    if (article.is_partial()) {
        return candidates;
    }
    const auto& paragraphs = article.paragraphs();
    for (std::size_t p = 0; p < paragraphs.size(); ++p) {
        const auto sentences = text::split_sentences(paragraphs[p]);
        for (std::size_t s = 0; s < sentences.size(); ++s) {
            const std::string_view sentence =
                std::string_view(paragraphs[p]).substr(sentences[s].begin, sentences[s].end - sentences[s].begin);
            const auto texts = question_templates(sentence);
            for (std::size_t t = 0; t < texts.size(); ++t) {
                CandidateQuestion candidate;
                candidate.question_id = article.source_domain() + "/p" + std::to_string(p) + "/s"
                    + std::to_string(s) + "/q" + std::to_string(t);
                candidate.text = texts[t];
                candidate.origin_source = article.source_domain();
                candidate.origin_paragraph = p;
                candidates.push_back(std::move(candidate));
            }
        }
    }
    return candidates;
}

} // namespace assembly::discordq
