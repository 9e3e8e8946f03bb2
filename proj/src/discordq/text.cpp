#include "assembly/discordq/text.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <string>
#include <unordered_map>
#include <unordered_set>

namespace assembly::discordq::text {

const char* const kStopwordListVersion = "en-2022.1";

namespace {

bool is_word_byte(unsigned char c) {
    return std::isalnum(c) || c >= 0x80;
}

bool is_vowel(char c) {
    return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

bool is_consonant(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) && !is_vowel(c);
}

bool ends_with(std::string_view word, std::string_view suffix) {
    return word.size() >= suffix.size() && word.substr(word.size() - suffix.size()) == suffix;
}

std::size_t vowel_groups(std::string_view word) {
    std::size_t groups = 0;
    bool inVowel = false;
    for (char c : word) {
        const bool v = is_vowel(c) || (c == 'y' && groups > 0);
        if (v && !inVowel) {
            ++groups;
        }
        inVowel = v;
    }
    return groups;
}

// Embedded English stopword list. Changing it changes pipeline output, so
// bump kStopwordListVersion with any edit.
const std::unordered_set<std::string_view>& stopwords() {
    static const std::unordered_set<std::string_view> kWords = {
        "a", "about", "above", "after", "again", "against", "all", "also", "am", "an", "and", "any",
        "are", "as", "at", "be", "because", "been", "before", "being", "below", "between", "both",
        "but", "by", "can", "could", "did", "do", "does", "doing", "down", "due", "during", "each",
        "few", "for", "from", "further", "had", "has", "have", "having", "he", "her", "here",
        "hers", "herself", "him", "himself", "his", "i", "if", "in", "into", "is", "it", "its",
        "itself", "just", "may", "me", "might", "more", "most", "must", "my", "myself", "no", "nor",
        "not", "now", "of", "off", "on", "once", "only", "or", "other", "our", "ours", "ourselves",
        "out", "over", "own", "s", "said", "same", "says", "she", "should", "so", "some", "such",
        "t", "than", "that", "the", "their", "theirs", "them", "themselves", "then", "there",
        "these", "they", "this", "those", "through", "to", "too", "under", "until", "up", "very",
        "was", "we", "were", "will", "with", "would", "you", "your", "yours", "yourself",
        "yourselves", "while", "been", "since", "yet", "however", "still", "even", "according",
        "per", "via", "amid", "among", "new", "one", "told", "say", "d", "ll", "re", "ve", "m",
    };
    return kWords;
}

const std::unordered_set<std::string_view>& wh_words() {
    static const std::unordered_set<std::string_view> kWords = {
        "who", "whom", "whose", "what", "why", "how", "much", "many", "when", "where", "which",
    };
    return kWords;
}

const std::unordered_map<std::string_view, std::string_view>& irregular_verbs() {
    static const std::unordered_map<std::string_view, std::string_view> kForms = {
        {"said", "say"}, {"made", "make"}, {"took", "take"}, {"taken", "take"}, {"went", "go"},
        {"gone", "go"}, {"came", "come"}, {"saw", "see"}, {"seen", "see"}, {"gave", "give"},
        {"given", "give"}, {"found", "find"}, {"told", "tell"}, {"became", "become"},
        {"left", "leave"}, {"felt", "feel"}, {"brought", "bring"}, {"began", "begin"},
        {"begun", "begin"}, {"kept", "keep"}, {"held", "hold"}, {"wrote", "write"},
        {"written", "write"}, {"stood", "stand"}, {"heard", "hear"}, {"meant", "mean"},
        {"met", "meet"}, {"ran", "run"}, {"paid", "pay"}, {"sat", "sit"}, {"spoke", "speak"},
        {"spoken", "speak"}, {"led", "lead"}, {"grew", "grow"}, {"grown", "grow"},
        {"lost", "lose"}, {"fell", "fall"}, {"fallen", "fall"}, {"sent", "send"},
        {"built", "build"}, {"understood", "understand"}, {"spent", "spend"}, {"rose", "rise"},
        {"risen", "rise"}, {"won", "win"}, {"sold", "sell"}, {"bought", "buy"},
        {"fought", "fight"}, {"thought", "think"}, {"taught", "teach"}, {"caught", "catch"},
        {"struck", "strike"}, {"drew", "draw"}, {"drawn", "draw"}, {"drove", "drive"},
        {"driven", "drive"}, {"broke", "break"}, {"broken", "break"}, {"chose", "choose"},
        {"chosen", "choose"}, {"shot", "shoot"}, {"laid", "lay"}, {"hid", "hide"},
        {"froze", "freeze"}, {"frozen", "freeze"}, {"sought", "seek"}, {"shook", "shake"},
        {"threw", "throw"}, {"thrown", "throw"}, {"flew", "fly"}, {"flown", "fly"},
        {"forgot", "forget"}, {"fled", "flee"}, {"hung", "hang"}, {"swore", "swear"},
        {"withdrew", "withdraw"}, {"withdrawn", "withdraw"}, {"overtook", "overtake"},
        {"undertook", "undertake"}, {"was", "be"}, {"were", "be"}, {"is", "be"}, {"are", "be"},
        {"been", "be"}, {"has", "have"}, {"had", "have"}, {"did", "do"}, {"does", "do"},
        {"done", "do"}, {"got", "get"}, {"gotten", "get"}, {"knew", "know"}, {"known", "know"},
        {"wore", "wear"}, {"woke", "wake"}, {"bore", "bear"}, {"born", "bear"},
        {"dealt", "deal"}, {"fed", "feed"}, {"slid", "slide"}, {"stuck", "stick"},
        {"sank", "sink"}, {"shrank", "shrink"}, {"sped", "speed"}, {"swept", "sweep"},
        {"wept", "weep"}, {"lent", "lend"}, {"bent", "bend"}, {"forecast", "forecast"},
        {"says", "say"}, {"goes", "go"}, {"lay", "lie"},
    };
    return kForms;
}

// Stems left by stripping "-ed" that need their silent e back.
bool needs_silent_e(const std::string& stem) {
    static const std::unordered_set<std::string_view> kStems = {
        "explor", "ignor", "restor", "stor", "scor", "implor", "deplor", "welcom", "becom",
        "overcom", "argu", "continu", "valu", "issu", "rescu", "pursu", "queu", "tri",
    };
    if (kStems.count(stem)) {
        return true;
    }
    const std::size_t n = stem.size();
    if (n < 2) {
        return false;
    }
    const char last = stem[n - 1];
    const char prev = stem[n - 2];
    if (last == 'v' || (last == 'z' && prev != 'z') || last == 'c') {
        return true;
    }
    if (last == 's' && is_vowel(prev) && !ends_with(stem, "cus") && !ends_with(stem, "ss")) {
        return true;
    }
    if (n >= 3 && is_consonant(stem[n - 3])
        && (ends_with(stem, "at") || ends_with(stem, "in") || ends_with(stem, "ur")
            || ends_with(stem, "ut") || ends_with(stem, "id") || ends_with(stem, "ud")
            || ends_with(stem, "ok") || ends_with(stem, "ar") || ends_with(stem, "ir")
            || ends_with(stem, "om") || ends_with(stem, "ib") || ends_with(stem, "ul"))) {
        return true;
    }
    if (ends_with(stem, "uir") || ends_with(stem, "ang") || ends_with(stem, "eng")
        || ends_with(stem, "rg") || ends_with(stem, "dg") || ends_with(stem, "rc")) {
        return true;
    }
    if (last == 'l' && (prev == 'b' || prev == 'p' || prev == 'g' || prev == 't' || prev == 'd'
                        || prev == 'k' || prev == 'f' || prev == 'z')) {
        return true;
    }
    // Monosyllables ending consonant-vowel-consonant: hop(e), vot(e), tim(e).
    if (n >= 3 && is_consonant(last) && last != 'w' && last != 'x' && last != 'y'
        && is_vowel(prev) && is_consonant(stem[n - 3]) && vowel_groups(stem) == 1) {
        return true;
    }
    return false;
}

} // namespace

std::vector<Token> tokenize(std::string_view text) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < text.size()) {
        if (!is_word_byte(static_cast<unsigned char>(text[i]))) {
            ++i;
            continue;
        }
        const std::size_t begin = i;
        while (i < text.size() && is_word_byte(static_cast<unsigned char>(text[i]))) {
            ++i;
        }
        Token token;
        token.begin = begin;
        token.end = i;
        token.lower.reserve(i - begin);
        for (std::size_t k = begin; k < i; ++k) {
            token.lower += static_cast<char>(std::tolower(static_cast<unsigned char>(text[k])));
        }
        tokens.push_back(std::move(token));
    }
    return tokens;
}

bool is_stopword(std::string_view lowerWord) {
    return stopwords().count(lowerWord) > 0;
}

bool is_wh_word(std::string_view lowerWord) {
    return wh_words().count(lowerWord) > 0;
}

std::string verb_lemma(std::string_view word) {
    const auto& irregular = irregular_verbs();
    if (const auto it = irregular.find(word); it != irregular.end()) {
        return std::string(it->second);
    }
    std::string w(word);
    if (w.size() > 4 && ends_with(w, "ied")) {
        return w.substr(0, w.size() - 3) + "y";
    }
    if (w.size() > 3 && ends_with(w, "ed")) {
        std::string stem = w.substr(0, w.size() - 2);
        const std::size_t n = stem.size();
        if (n >= 2 && stem[n - 1] == stem[n - 2] && is_consonant(stem[n - 1])
            && std::string_view("lsz").find(stem[n - 1]) == std::string_view::npos) {
            stem.pop_back();
            return stem;
        }
        if (needs_silent_e(stem)) {
            stem += 'e';
        }
        return stem;
    }
    if (w.size() > 4 && ends_with(w, "ing")) {
        std::string stem = w.substr(0, w.size() - 3);
        const std::size_t n = stem.size();
        if (n >= 2 && stem[n - 1] == stem[n - 2] && is_consonant(stem[n - 1])
            && std::string_view("lsz").find(stem[n - 1]) == std::string_view::npos) {
            stem.pop_back();
        } else if (needs_silent_e(stem)) {
            stem += 'e';
        }
        return stem;
    }
    if (w.size() > 3 && ends_with(w, "ies")) {
        return w.substr(0, w.size() - 3) + "y";
    }
    if (w.size() > 3
        && (ends_with(w, "sses") || ends_with(w, "xes") || ends_with(w, "ches") || ends_with(w, "shes")
            || ends_with(w, "zes"))) {
        return w.substr(0, w.size() - 2);
    }
    if (w.size() > 2 && ends_with(w, "s") && !ends_with(w, "ss") && !ends_with(w, "us")
        && !ends_with(w, "is")) {
        return w.substr(0, w.size() - 1);
    }
    return w;
}

std::string normalize_term(std::string_view word) {
    const auto& irregular = irregular_verbs();
    std::string w;
    if (const auto it = irregular.find(word); it != irregular.end()) {
        w = std::string(it->second);
    } else {
        w = std::string(word);
    }
    if (std::all_of(w.begin(), w.end(), [](unsigned char c) { return std::isdigit(c); })) {
        return w;
    }
    if (w.size() > 4 && ends_with(w, "ies")) {
        w = w.substr(0, w.size() - 3) + "y";
    } else if (w.size() > 5 && ends_with(w, "ing")) {
        w.resize(w.size() - 3);
    } else if (w.size() > 4 && ends_with(w, "ed")) {
        w.resize(w.size() - 2);
    } else if (w.size() > 4 && ends_with(w, "es")) {
        w.resize(w.size() - 2);
    } else if (w.size() > 3 && ends_with(w, "s") && !ends_with(w, "ss") && !ends_with(w, "us")
               && !ends_with(w, "is")) {
        w.pop_back();
    }
    if (w.size() > 3 && w.back() == 'e') {
        w.pop_back();
    }
    const std::size_t n = w.size();
    if (n > 3 && w[n - 1] == w[n - 2] && is_consonant(w[n - 1])) {
        w.pop_back();
    }
    return w;
}

namespace {

std::vector<std::string> sorted_unique(std::vector<std::string> terms) {
    std::sort(terms.begin(), terms.end());
    terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
    return terms;
}

} // namespace

std::vector<std::string> content_terms(std::string_view text) {
    std::vector<std::string> terms;
    for (const auto& token : tokenize(text)) {
        if (is_stopword(token.lower) || is_wh_word(token.lower)) {
            continue;
        }
        terms.push_back(normalize_term(token.lower));
    }
    return sorted_unique(std::move(terms));
}

std::vector<std::string> all_terms(std::string_view text) {
    std::vector<std::string> terms;
    for (const auto& token : tokenize(text)) {
        terms.push_back(normalize_term(token.lower));
    }
    return sorted_unique(std::move(terms));
}

double jaccard(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    std::size_t common = 0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        const int cmp = ia->compare(*ib);
        if (cmp == 0) {
            ++common;
            ++ia;
            ++ib;
        } else if (cmp < 0) {
            ++ia;
        } else {
            ++ib;
        }
    }
    const std::size_t unionSize = a.size() + b.size() - common;
    return unionSize == 0 ? 0.0 : static_cast<double>(common) / static_cast<double>(unionSize);
}

namespace {

bool is_abbreviation(std::string_view paragraph, std::size_t dot) {
    static const std::unordered_set<std::string_view> kAbbrev = {
        "mr", "mrs", "ms", "dr", "prof", "sen", "rep", "gov", "gen", "col", "lt", "sgt", "st",
        "jr", "sr", "inc", "co", "corp", "ltd", "vs", "etc", "no", "jan", "feb", "mar", "apr",
        "jun", "jul", "aug", "sep", "sept", "oct", "nov", "dec", "u.s", "u.k", "e.g", "i.e",
    };
    std::size_t start = dot;
    while (start > 0 && (std::isalpha(static_cast<unsigned char>(paragraph[start - 1])) || paragraph[start - 1] == '.')) {
        --start;
    }
    std::string word;
    for (std::size_t k = start; k < dot; ++k) {
        word += static_cast<char>(std::tolower(static_cast<unsigned char>(paragraph[k])));
    }
    if (word.size() == 1) {
        return true; // initials such as "J. Smith"
    }
    return kAbbrev.count(word) > 0;
}

} // namespace

std::vector<SentenceRange> split_sentences(std::string_view paragraph) {
    std::vector<SentenceRange> sentences;
    auto push = [&](std::size_t begin, std::size_t end) {
        while (begin < end && std::isspace(static_cast<unsigned char>(paragraph[begin]))) {
            ++begin;
        }
        while (end > begin && std::isspace(static_cast<unsigned char>(paragraph[end - 1]))) {
            --end;
        }
        if (begin < end) {
            sentences.push_back({begin, end});
        }
    };

    std::size_t start = 0;
    std::size_t i = 0;
    while (i < paragraph.size()) {
        const char c = paragraph[i];
        if (c != '.' && c != '!' && c != '?') {
            ++i;
            continue;
        }
        std::size_t end = i + 1;
        while (end < paragraph.size() && (paragraph[end] == '.' || paragraph[end] == '!' || paragraph[end] == '?'
                                          || paragraph[end] == '"' || paragraph[end] == '\''
                                          || paragraph[end] == ')')) {
            ++end;
        }
        // Closing curly quote (U+201D) after the terminator.
        if (paragraph.substr(end, 3) == "\xE2\x80\x9D") {
            end += 3;
        }
        const bool atEnd = end >= paragraph.size();
        const bool followedBySpace = !atEnd && std::isspace(static_cast<unsigned char>(paragraph[end]));
        if (!atEnd && !followedBySpace) {
            i = end;
            continue;
        }
        if (c == '.' && !atEnd && is_abbreviation(paragraph, i)) {
            i = end;
            continue;
        }
        if (!atEnd) {
            std::size_t next = end;
            while (next < paragraph.size() && std::isspace(static_cast<unsigned char>(paragraph[next]))) {
                ++next;
            }
            if (next < paragraph.size() && std::islower(static_cast<unsigned char>(paragraph[next]))) {
                i = end;
                continue;
            }
        }
        push(start, end);
        start = end;
        i = end;
    }
    push(start, paragraph.size());
    return sentences;
}

} // namespace assembly::discordq::text
