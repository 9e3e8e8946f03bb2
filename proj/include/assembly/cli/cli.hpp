#pragma once

#include "assembly/corpus/story.hpp"

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace assembly::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kDomainError = 1;
inline constexpr int kUsageError = 2;

// Entry point of the `assembly` executable. Progress goes to `out`, errors to
// `err` as "ErrorName: message".
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Story manifest used by `ingest`:
//   { "story_id", "title", "retrieved_at" (optional),
//     "articles": [ { "url", "file" (optional, relative to the manifest) } ] }
// Articles without a file are fetched over HTTP(S).
struct ManifestEntry {
    std::string url;
    std::optional<std::filesystem::path> file;
};

struct StoryManifest {
    std::string story_id;
    std::string title;
    std::optional<std::string> retrieved_at;
    std::vector<ManifestEntry> articles;
};

StoryManifest load_manifest(const std::filesystem::path& path);

// Returns the page body or throws IoError.
using Fetcher = std::function<std::string(const std::string& url)>;
std::string http_fetch(const std::string& url);

// Builds a story from a manifest. Pages that cannot be read or parsed are
// reported through `warn` and skipped.
corpus::Story ingest_manifest(const StoryManifest& manifest, const Fetcher& fetch,
                              const std::function<void(const std::string&)>& warn, const std::string& now);

} // namespace assembly::cli
