#include "assembly/cli/cli.hpp"

#include "assembly/corpus/extract.hpp"
#include "assembly/corpus/story_io.hpp"
#include "assembly/error.hpp"
#include "assembly/json_fields.hpp"

#include <httplib.h>

#include <regex>

namespace assembly::cli {

namespace fields = json_fields;

StoryManifest load_manifest(const std::filesystem::path& path) {
    const std::string where = path.string();
    Json doc;
    try {
        doc = Json::parse(corpus::read_file(path));
    } catch (const Json::parse_error& e) {
        throw SchemaError(where + ": " + e.what());
    }
    StoryManifest manifest;
    manifest.story_id = fields::require_string(doc, "story_id", where);
    manifest.title = fields::require_string(doc, "title", where);
    if (doc.contains("retrieved_at") && !doc["retrieved_at"].is_null()) {
        manifest.retrieved_at = fields::require_string(doc, "retrieved_at", where);
    }
    for (const auto& entry : fields::require_array(doc, "articles", where)) {
        ManifestEntry e;
        e.url = fields::require_string(entry, "url", where);
        if (entry.contains("file") && !entry["file"].is_null()) {
            e.file = path.parent_path() / fields::require_string(entry, "file", where);
        }
        manifest.articles.push_back(std::move(e));
    }
    return manifest;
}

std::string http_fetch(const std::string& url) {
    static const std::regex pattern(R"(^(https?://[^/?#]+)([^#]*)(#.*)?$)", std::regex::icase);
    std::smatch m;
    if (!std::regex_match(url, m, pattern)) {
        throw IoError("cannot fetch '" + url + "': not an http(s) URL");
    }
    httplib::Client client(m[1].str());
    client.set_follow_location(true);
    client.set_connection_timeout(15);
    client.set_read_timeout(30);
    const std::string target = m[2].str().empty() ? "/" : m[2].str();
    const auto res = client.Get(target);
    if (!res) {
        throw IoError("cannot fetch '" + url + "': " + httplib::to_string(res.error()));
    }
    if (res->status != 200) {
        throw IoError("cannot fetch '" + url + "': HTTP " + std::to_string(res->status));
    }
    return res->body;
}

corpus::Story ingest_manifest(const StoryManifest& manifest, const Fetcher& fetch,
                              const std::function<void(const std::string&)>& warn, const std::string& now) {
    std::vector<corpus::SourceArticle> articles;
    for (const auto& entry : manifest.articles) {
        try {
            const std::string document = entry.file ? corpus::read_file(*entry.file) : fetch(entry.url);
            auto article = corpus::extract_article(document, entry.url);
            const bool duplicate = std::any_of(articles.begin(), articles.end(), [&](const corpus::SourceArticle& a) {
                return a.source_domain() == article.source_domain();
            });
            if (duplicate) {
                warn(manifest.story_id + ": skipping second article from " + article.source_domain());
                continue;
            }
            articles.push_back(std::move(article));
        } catch (const Error& e) {
            warn(manifest.story_id + ": skipping " + entry.url + ": " + e.name() + ": " + e.what());
        }
    }
    return corpus::Story::create(manifest.story_id, manifest.title,
                                 corpus::Timestamp::parse(manifest.retrieved_at.value_or(now)), std::move(articles));
}

} // namespace assembly::cli
