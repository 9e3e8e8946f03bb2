#include "assembly/corpus/extract.hpp"
#include "assembly/corpus/story_io.hpp"
#include "assembly/corpus/utf8.hpp"
#include "assembly/error.hpp"

#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <random>

using namespace assembly;
using namespace assembly::corpus;

namespace {

SourceArticle full_article(const std::string& domain, std::size_t words) {
    std::string paragraph;
    for (std::size_t i = 0; i < words; ++i) {
        paragraph += (i ? " w" : "w") + std::to_string(i);
    }
    return SourceArticle::create({domain, "https://" + domain + "/a", "Headline " + domain,
                                  std::nullopt, {paragraph}, false});
}

SourceArticle partial_article(const std::string& domain) {
    return SourceArticle::create({domain, "https://" + domain + "/a", "Paywalled " + domain,
                                  std::nullopt, {}, true});
}

Story story_of(std::vector<SourceArticle> articles) {
    return Story::create("s", "Story", Timestamp::parse("2022-08-02T10:00:00Z"), std::move(articles));
}

std::filesystem::path temp_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("assembly_corpus_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

const char* kFullPage = R"(<!DOCTYPE html>
<html><head>
<title>Fed raises rates - Example News</title>
<meta property="og:title" content="Fed raises rates again">
<meta name="description" content="The central bank acted on Wednesday &amp; markets fell.">
<script>var x = "<p>not a paragraph</p>";</script>
<style>p { color: red; }</style>
</head><body>
<nav><p>Home | World | Business</p></nav>
<article>
<h1>Fed raises rates again</h1>
<p>The Fed raised rates by 75 basis points.</p>
<p>Inflation   peaked in June,
according to officials.</p>
<p>Markets fell <b>sharply</b> after the &ldquo;announcement&rdquo;.</p>
<!-- <p>commented out</p> -->
<p>Analysts expect another hike.</p>
<figure><p>Photo caption</p></figure>
<p>Mortgage costs will rise.</p>
</article>
<footer><p>Copyright 2022</p></footer>
</body></html>)";

} // namespace

TEST_CASE("paragraph_split splits on blank lines") {
    CHECK(paragraph_split("A\n\nB\n\nC") == std::vector<std::string>{"A", "B", "C"});
    CHECK(paragraph_split("A\n\n\n\nB") == std::vector<std::string>{"A", "B"});
    CHECK(paragraph_split("").empty());
    CHECK(paragraph_split("  A line\nstill A  \n \t \n  B ") == std::vector<std::string>{"A line\nstill A", "B"});
    CHECK(paragraph_split("\r\n\r\nA\r\n\r\nB\r\n") == std::vector<std::string>{"A", "B"});
}

TEST_CASE("paragraph_split never leaves blank-line delimiters inside paragraphs") {
    std::mt19937_64 rng(11);
    const char alphabet[] = {'a', 'b', ' ', '\n', '\t', '\r'};
    for (int trial = 0; trial < 500; ++trial) {
        std::string text;
        const int length = static_cast<int>(rng() % 60);
        for (int i = 0; i < length; ++i) {
            text += alphabet[rng() % sizeof(alphabet)];
        }
        for (const auto& paragraph : paragraph_split(text)) {
            REQUIRE_FALSE(paragraph.empty());
            CHECK(paragraph_split(paragraph) == std::vector<std::string>{paragraph});
        }
    }
}

TEST_CASE("count_words uses whitespace tokens") {
    CHECK(count_words("") == 0);
    CHECK(count_words("  one two\tthree\nfour ") == 4);
}

TEST_CASE("extract_article maps title, description and body paragraphs") {
    const SourceArticle article = extract_article(kFullPage, "https://www.example.com/fed");
    CHECK(article.source_domain() == "example.com");
    CHECK(article.headline() == "Fed raises rates again");
    REQUIRE(article.summary().has_value());
    CHECK(*article.summary() == "The central bank acted on Wednesday & markets fell.");
    CHECK_FALSE(article.is_partial());
    REQUIRE(article.paragraphs().size() == 5);
    CHECK(article.paragraphs()[0] == "The Fed raised rates by 75 basis points.");
    CHECK(article.paragraphs()[1] == "Inflation peaked in June, according to officials.");
    CHECK(article.paragraphs()[2] == "Markets fell sharply after the \xE2\x80\x9C" "announcement\xE2\x80\x9D.");
    CHECK(article.paragraphs()[4] == "Mortgage costs will rise.");
    CHECK(article.word_count() == 8 + 7 + 6 + 4 + 4);
}

TEST_CASE("extract_article without description meta has no summary") {
    const SourceArticle article = extract_article(
        "<html><head><title>Plain page</title></head><body><p>Only text here.</p></body></html>",
        "https://plain.org/x");
    CHECK(article.headline() == "Plain page");
    CHECK_FALSE(article.summary().has_value());
    CHECK(article.paragraphs() == std::vector<std::string>{"Only text here."});
}

TEST_CASE("paywalled or empty-body pages are partial") {
    const SourceArticle headlineOnly = extract_article(
        "<html><head><title>Subscribers only</title></head><body><div class=paywall>Subscribe</div></body></html>",
        "https://gazette.com/story");
    CHECK(headlineOnly.is_partial());
    CHECK(headlineOnly.paragraphs().empty());
    CHECK(headlineOnly.headline() == "Subscribers only");

    const SourceArticle flagged = extract_article(
        R"(<html><head><title>Locked</title><meta name="description" content="Teaser.">
<script type="application/ld+json">{"@type":"NewsArticle","isAccessibleForFree": "False"}</script>
</head><body><p>Teaser paragraph.</p></body></html>)",
        "https://locked.com/a");
    CHECK(flagged.is_partial());
    CHECK(flagged.paragraphs().empty());
    CHECK(flagged.summary() == std::optional<std::string>("Teaser."));
}

TEST_CASE("extract_article errors") {
    CHECK_THROWS_AS(extract_article("<html><body><p>No title at all</p></body></html>", "https://x.com/a"),
                    MalformedDocument);
    CHECK_THROWS_AS(extract_article("", "https://x.com/a"), MalformedDocument);
    CHECK_THROWS_AS(extract_article(kFullPage, "not a url"), MalformedDocument);
    // h1 is the last resort for the headline.
    CHECK(extract_article("<body><h1>Only &amp; heading</h1><p>t</p></body>", "http://h.net").headline()
          == "Only & heading");
}

TEST_CASE("decode_entities handles numeric references") {
    CHECK(decode_entities("&#65;&#x42;&amp;&unknown;") == "AB&&unknown;");
    CHECK(decode_entities("caf&#233;") == "caf\xC3\xA9");
}

TEST_CASE("utf8 offsets count code points") {
    const std::string text = "caf\xC3\xA9 au lait";
    CHECK(utf8::length(text) == 12);
    CHECK(utf8::byte_offset(text, 4) == 5);
    CHECK(utf8::substr(text, 3, 6) == "\xC3\xA9 a");
    CHECK(utf8::char_index(text, 5) == 4);
}

TEST_CASE("article invariants are enforced") {
    CHECK_THROWS_AS(SourceArticle::create({"a.com", "https://a.com", "", std::nullopt, {"x"}, false}), SchemaError);
    CHECK_THROWS_AS(SourceArticle::create({"a.com", "https://a.com", "H", std::nullopt, {"x"}, true}), SchemaError);
    CHECK_THROWS_AS(SourceArticle::create({"a.com", "https://a.com", "H", std::nullopt, {" "}, false}), SchemaError);
    CHECK_THROWS_AS(Timestamp::parse("yesterday"), SchemaError);
    CHECK(Timestamp::parse("2022-08-02T10:00:00.125+02:00").text() == "2022-08-02T10:00:00.125+02:00");
}

TEST_CASE("load_story round-trips a 12-source story in file order") {
    std::vector<SourceArticle> articles;
    for (int i = 0; i < 12; ++i) {
        articles.push_back(i % 4 == 3 ? partial_article("src" + std::to_string(i) + ".com")
                                      : full_article("src" + std::to_string(i) + ".com", 10 + i));
    }
    const Story story = story_of(std::move(articles));
    const auto dir = temp_dir("roundtrip");
    save_story(story, dir / "story.json");
    const Story loaded = load_story(dir / "story.json");
    CHECK(loaded == story);
    REQUIRE(loaded.articles().size() == 12);
    for (int i = 0; i < 12; ++i) {
        CHECK(loaded.articles()[i].source_domain() == "src" + std::to_string(i) + ".com");
    }
    CHECK(serialize_story(loaded) == read_file(dir / "story.json"));
}

TEST_CASE("extract, serialize and load round-trip every field") {
    const Story story = story_of({extract_article(kFullPage, "https://www.example.com/fed"),
                                  extract_article("<title>T</title><p>Body</p>", "https://b.org/1")});
    const Story loaded = story_from_json(Json::parse(serialize_story(story)));
    CHECK(loaded == story);
    CHECK(loaded.articles()[0].word_count() == story.articles()[0].word_count());
}

TEST_CASE("load_story schema errors") {
    const auto dir = temp_dir("schema");
    Json value = to_json(story_of({full_article("a.com", 5), full_article("b.com", 6)}));

    Json duplicate = value;
    duplicate["articles"][1]["source_domain"] = "a.com";
    write_file_atomic(dir / "dup.json", duplicate.dump());
    CHECK_THROWS_AS(load_story(dir / "dup.json"), SchemaError);

    Json noHeadline = value;
    noHeadline["articles"][0].erase("headline");
    write_file_atomic(dir / "nohead.json", noHeadline.dump());
    CHECK_THROWS_AS(load_story(dir / "nohead.json"), SchemaError);

    Json wordCountStored = value;
    wordCountStored.erase("title");
    write_file_atomic(dir / "notitle.json", wordCountStored.dump());
    CHECK_THROWS_AS(load_story(dir / "notitle.json"), SchemaError);

    write_file_atomic(dir / "broken.json", "{ not json");
    CHECK_THROWS_AS(load_story(dir / "broken.json"), SchemaError);
    CHECK_THROWS_AS(load_story(dir / "missing.json"), IoError);
}

TEST_CASE("median_article picks the lower median") {
    CHECK(median_article(story_of({full_article("a.com", 300), full_article("b.com", 100),
                                   full_article("c.com", 200)}))
          == "c.com");
    CHECK(median_article(story_of({full_article("a.com", 400), full_article("b.com", 100),
                                   full_article("c.com", 300), full_article("d.com", 200)}))
          == "d.com");
    CHECK(median_article(story_of({full_article("only.com", 7)})) == "only.com");
    // Partial articles are ignored; equal lengths keep story order.
    CHECK(median_article(story_of({partial_article("p.com"), full_article("x.com", 50),
                                   full_article("y.com", 50), full_article("z.com", 50)}))
          == "y.com");
    CHECK_THROWS_AS(median_article(story_of({partial_article("p.com")})), NoFullArticle);
}

TEST_CASE("median_article rank property") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 1 + rng() % 12;
        std::vector<SourceArticle> articles;
        for (std::size_t i = 0; i < n; ++i) {
            articles.push_back(full_article("d" + std::to_string(i) + ".com", 1 + rng() % 8));
        }
        const Story story = story_of(std::move(articles));
        const std::size_t chosen = story.find(median_article(story))->word_count();
        std::size_t atMost = 0;
        std::size_t atLeast = 0;
        for (const auto& article : story.articles()) {
            atMost += article.word_count() <= chosen;
            atLeast += article.word_count() >= chosen;
        }
        // The chosen length is >= floor((n-1)/2) other articles and <= ceil((n-1)/2) others.
        CHECK(atMost - 1 >= (n - 1) / 2);
        CHECK(atLeast - 1 >= n / 2);
    }
}
