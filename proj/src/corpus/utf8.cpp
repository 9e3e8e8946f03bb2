#include "assembly/corpus/utf8.hpp"

#include <stdexcept>

namespace assembly::utf8 {

namespace {

bool is_continuation(char c) {
    return (static_cast<unsigned char>(c) & 0xC0) == 0x80;
}

} // namespace

std::size_t length(std::string_view text) {
    std::size_t count = 0;
    for (char c : text) {
        if (!is_continuation(c)) {
            ++count;
        }
    }
    return count;
}

std::size_t byte_offset(std::string_view text, std::size_t index) {
    std::size_t seen = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (is_continuation(text[i])) {
            continue;
        }
        if (seen == index) {
            return i;
        }
        ++seen;
    }
    if (seen == index) {
        return text.size();
    }
    throw std::out_of_range("character index past end of text");
}

std::size_t char_index(std::string_view text, std::size_t byte) {
    return length(text.substr(0, byte));
}

std::string substr(std::string_view text, std::size_t charStart, std::size_t charEnd) {
    const std::size_t begin = byte_offset(text, charStart);
    const std::size_t end = byte_offset(text, charEnd);
    return std::string(text.substr(begin, end - begin));
}

void append(std::string& out, char32_t cp) {
    if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
        cp = 0xFFFD;
    }
    if (cp < 0x80) {
        out += static_cast<char>(cp);
    } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    }
}

} // namespace assembly::utf8
