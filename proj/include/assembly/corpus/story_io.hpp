#pragma once

#include "assembly/corpus/story.hpp"
#include "assembly/json.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace assembly::corpus {

Json to_json(const SourceArticle& article);
Json to_json(const Story& story);

// Both throw SchemaError on missing fields, wrong types or invariant violations.
SourceArticle article_from_json(const Json& value);
Story story_from_json(const Json& value);

std::string serialize_story(const Story& story);

// Throws IoError when the file cannot be read, SchemaError when it is invalid.
Story load_story(const std::filesystem::path& path);
void save_story(const Story& story, const std::filesystem::path& path);

// Every *.json story file directly under `dir`, in file-name order.
std::vector<Story> load_corpus_dir(const std::filesystem::path& dir);

// Writes `contents` to a sibling temp file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);
std::string read_file(const std::filesystem::path& path);

} // namespace assembly::corpus
