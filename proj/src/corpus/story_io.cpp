#include "assembly/corpus/story_io.hpp"

#include "assembly/error.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <sstream>
#include <thread>

namespace assembly::corpus {

namespace {

const Json& require(const Json& object, const char* key, const std::string& where) {
    const auto it = object.find(key);
    if (it == object.end()) {
        throw SchemaError(where + ": missing field '" + key + "'");
    }
    return *it;
}

std::string require_string(const Json& object, const char* key, const std::string& where) {
    const Json& value = require(object, key, where);
    if (!value.is_string()) {
        throw SchemaError(where + ": field '" + key + "' must be a string");
    }
    return value.get<std::string>();
}

} // namespace

Json to_json(const SourceArticle& article) {
    Json value;
    value["source_domain"] = article.source_domain();
    value["url"] = article.url();
    value["headline"] = article.headline();
    value["summary"] = article.summary() ? Json(*article.summary()) : Json(nullptr);
    value["paragraphs"] = article.paragraphs();
    value["is_partial"] = article.is_partial();
    return value;
}

Json to_json(const Story& story) {
    Json value;
    value["story_id"] = story.story_id();
    value["title"] = story.title();
    value["retrieved_at"] = story.retrieved_at().text();
    Json articles = Json::array();
    for (const auto& article : story.articles()) {
        articles.push_back(to_json(article));
    }
    value["articles"] = std::move(articles);
    return value;
}

SourceArticle article_from_json(const Json& value) {
    if (!value.is_object()) {
        throw SchemaError("article entry must be an object");
    }
    SourceArticle::Fields fields;
    fields.source_domain = require_string(value, "source_domain", "article");
    const std::string where = "article '" + fields.source_domain + "'";
    fields.url = require_string(value, "url", where);
    fields.headline = require_string(value, "headline", where);

    const Json& summary = require(value, "summary", where);
    if (summary.is_string()) {
        fields.summary = summary.get<std::string>();
    } else if (!summary.is_null()) {
        throw SchemaError(where + ": field 'summary' must be a string or null");
    }

    const Json& paragraphs = require(value, "paragraphs", where);
    if (!paragraphs.is_array()) {
        throw SchemaError(where + ": field 'paragraphs' must be an array");
    }
    for (const auto& paragraph : paragraphs) {
        if (!paragraph.is_string()) {
            throw SchemaError(where + ": paragraphs must be strings");
        }
        fields.paragraphs.push_back(paragraph.get<std::string>());
    }

    const Json& partial = require(value, "is_partial", where);
    if (!partial.is_boolean()) {
        throw SchemaError(where + ": field 'is_partial' must be a boolean");
    }
    fields.is_partial = partial.get<bool>();
    return SourceArticle::create(std::move(fields));
}

Story story_from_json(const Json& value) {
    if (!value.is_object()) {
        throw SchemaError("story file must hold a JSON object");
    }
    std::string id = require_string(value, "story_id", "story");
    const std::string where = "story '" + id + "'";
    std::string title = require_string(value, "title", where);
    Timestamp retrievedAt = Timestamp::parse(require_string(value, "retrieved_at", where));
    const Json& articles = require(value, "articles", where);
    if (!articles.is_array()) {
        throw SchemaError(where + ": field 'articles' must be an array");
    }
    std::vector<SourceArticle> parsed;
    parsed.reserve(articles.size());
    for (const auto& article : articles) {
        parsed.push_back(article_from_json(article));
    }
    return Story::create(std::move(id), std::move(title), std::move(retrievedAt), std::move(parsed));
}

std::string serialize_story(const Story& story) {
    return to_json(story).dump(2) + "\n";
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) {
        throw IoError("failed reading '" + path.string() + "'");
    }
    return buffer.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
    static std::atomic<unsigned long> counter{0};
    std::error_code ec;
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ostringstream suffix;
    suffix << ".tmp." << std::this_thread::get_id() << "." << counter++;
    std::filesystem::path temp = path;
    temp += suffix.str();
    {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError("cannot write '" + temp.string() + "'");
        }
        out << contents;
        out.flush();
        if (!out) {
            throw IoError("failed writing '" + temp.string() + "'");
        }
    }
    std::filesystem::rename(temp, path, ec);
    if (ec) {
        std::filesystem::remove(temp);
        throw IoError("cannot replace '" + path.string() + "': " + ec.message());
    }
}

Story load_story(const std::filesystem::path& path) {
    const std::string text = read_file(path);
    Json value;
    try {
        value = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw SchemaError("'" + path.string() + "' is not valid JSON: " + e.what());
    }
    return story_from_json(value);
}

void save_story(const Story& story, const std::filesystem::path& path) {
    write_file_atomic(path, serialize_story(story));
}

std::vector<Story> load_corpus_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    if (!std::filesystem::is_directory(dir, ec)) {
        throw IoError("'" + dir.string() + "' is not a directory");
    }
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    std::vector<Story> stories;
    stories.reserve(files.size());
    for (const auto& file : files) {
        stories.push_back(load_story(file));
    }
    return stories;
}

} // namespace assembly::corpus
