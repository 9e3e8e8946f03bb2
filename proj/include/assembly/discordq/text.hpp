#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

// Lexical machinery shared by the baseline stages.
namespace assembly::discordq::text {

// Identifier of the embedded stopword list; recorded in pipeline stats since
// the list affects every baseline stage's output.
extern const char* const kStopwordListVersion;

struct Token {
    std::size_t begin = 0; // byte offsets into the tokenized text
    std::size_t end = 0;
    std::string lower;
};

// Word tokens: runs of ASCII letters/digits and non-ASCII bytes. Apostrophes
// and hyphens split words.
std::vector<Token> tokenize(std::string_view text);

bool is_stopword(std::string_view lowerWord);
bool is_wh_word(std::string_view lowerWord);

// Base form of a verb given in any common inflection ("raised" -> "raise").
std::string verb_lemma(std::string_view lowerWord);

// Crude stem used for term matching so that "rates"/"rate" and
// "raised"/"raise" compare equal.
std::string normalize_term(std::string_view lowerWord);

// Sorted, unique normalized terms with stopwords and wh-words removed.
std::vector<std::string> content_terms(std::string_view text);

// Sorted, unique normalized terms with nothing removed.
std::vector<std::string> all_terms(std::string_view text);

// Both inputs sorted and unique. Empty union gives 0.
double jaccard(const std::vector<std::string>& a, const std::vector<std::string>& b);

// Byte ranges of sentences within a paragraph, trimmed, terminal punctuation
// included.
struct SentenceRange {
    std::size_t begin = 0;
    std::size_t end = 0;
};
std::vector<SentenceRange> split_sentences(std::string_view paragraph);

} // namespace assembly::discordq::text
