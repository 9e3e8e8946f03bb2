#pragma once

#include <cstddef>
#include <string>
#include <string_view>

// Character offsets throughout the project count Unicode code points in UTF-8
// text, matching what external Python stages report.
namespace assembly::utf8 {

std::size_t length(std::string_view text);

// Byte offset of code point `index`; index == length(text) maps to text.size().
std::size_t byte_offset(std::string_view text, std::size_t index);

// Code point index of a byte offset that lies on a character boundary.
std::size_t char_index(std::string_view text, std::size_t byte);

std::string substr(std::string_view text, std::size_t charStart, std::size_t charEnd);

void append(std::string& out, char32_t codepoint);

} // namespace assembly::utf8
