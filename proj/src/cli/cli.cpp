#include "assembly/cli/cli.hpp"

#include "assembly/corpus/story_io.hpp"
#include "assembly/discordq/adapters.hpp"
#include "assembly/discordq/filters.hpp"
#include "assembly/discordq/pipeline.hpp"
#include "assembly/discordq/serialize.hpp"
#include "assembly/error.hpp"
#include "assembly/evalkit/evalkit.hpp"
#include "assembly/interfaces/payload.hpp"
#include "assembly/service/http.hpp"
#include "assembly/service/store.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <regex>
#include <sstream>
#include <thread>

namespace assembly::cli {

namespace fs = std::filesystem;

namespace {

struct IngestOptions {
    std::string input;
    std::string out;
    std::string story_id;
    std::string title;
};

struct ProcessOptions {
    std::string corpus;
    std::string reference;
    std::string config;
    std::string out;
    std::string store;
    std::string questions;
    unsigned jobs = 0;
};

struct RenderOptions {
    std::vector<std::string> stories;
    std::string kind = "all";
    std::string format = "json";
    std::string out;
    std::string corpus;
    std::string dqsets;
    std::string data;
};

struct ServeOptions {
    std::string data;
    std::string addr = "127.0.0.1:8080";
};

struct EvaluateOptions {
    std::string responses;
    std::string aspects;
    std::uint64_t seed = 0;
    std::string report;
    std::size_t resamples = 40;
    bool with_replacement = false;
    std::string unit = "session";
};

std::string dqset_file_name(const std::string& storyId) {
    return storyId + ".dqset.json";
}

std::vector<std::pair<fs::path, std::string>> manifests_under(const fs::path& input) {
    std::vector<std::pair<fs::path, std::string>> found;
    if (fs::exists(input / "manifest.json")) {
        found.emplace_back(input / "manifest.json", "");
        return found;
    }
    std::vector<fs::path> dirs;
    for (const auto& entry : fs::directory_iterator(input)) {
        if (entry.is_directory() && fs::exists(entry.path() / "manifest.json")) {
            dirs.push_back(entry.path());
        }
    }
    std::sort(dirs.begin(), dirs.end());
    for (const auto& dir : dirs) {
        found.emplace_back(dir / "manifest.json", "");
    }
    return found;
}

int cmd_ingest(const IngestOptions& o, std::ostream& out) {
    const fs::path input(o.input);
    if (!fs::exists(input)) {
        throw IoError("input '" + o.input + "' does not exist");
    }
    std::vector<StoryManifest> manifests;
    if (fs::is_directory(input)) {
        for (const auto& [path, unused] : manifests_under(input)) {
            manifests.push_back(load_manifest(path));
        }
        if (manifests.empty()) {
            throw IoError("no manifest.json under '" + o.input + "'");
        }
    } else if (input.extension() == ".json") {
        manifests.push_back(load_manifest(input));
    } else {
        // Plain URL list: one URL per line, '#' starts a comment.
        if (o.story_id.empty() || o.title.empty()) {
            throw InvalidRequest("a URL list needs --story-id and --title");
        }
        StoryManifest m;
        m.story_id = o.story_id;
        m.title = o.title;
        std::istringstream lines(corpus::read_file(input));
        std::string line;
        while (std::getline(lines, line)) {
            line = std::regex_replace(line, std::regex(R"(^\s+|\s+$|#.*$)"), "");
            if (!line.empty()) {
                m.articles.push_back({line, std::nullopt});
            }
        }
        manifests.push_back(std::move(m));
    }
    const auto warn = [&out](const std::string& message) { out << "warning: " << message << "\n"; };
    const std::string now = service::utc_now();
    for (const auto& manifest : manifests) {
        const auto story = ingest_manifest(manifest, http_fetch, warn, now);
        corpus::save_story(story, fs::path(o.out) / (story.story_id() + ".json"));
        out << story.story_id() << ": " << story.articles().size() << " articles ("
            << story.full_article_count() << " full)\n";
    }
    return kOk;
}

discordq::PipelineConfig read_config(const std::string& path, discordq::AdapterConfig& adapters) {
    if (path.empty()) {
        return {};
    }
    Json doc;
    try {
        doc = Json::parse(corpus::read_file(path));
    } catch (const Json::parse_error& e) {
        throw SchemaError(path + ": " + e.what());
    }
    if (doc.contains("adapters")) {
        adapters = discordq::adapter_config_from_json(doc["adapters"]);
    }
    return discordq::pipeline_config_from_json(doc);
}

int cmd_process(const ProcessOptions& o, std::ostream& out, std::ostream& err) {
    discordq::AdapterConfig adapterConfig;
    const auto config = read_config(o.config, adapterConfig);
    const auto adapters = discordq::make_stage_adapters(adapterConfig);
    const auto stories = corpus::load_corpus_dir(o.corpus);
    const discordq::ReferenceCorpus references(
        o.reference.empty() ? corpus::load_corpus_dir(o.corpus) : corpus::load_corpus_dir(o.reference));

    std::optional<service::Store> store;
    if (!o.store.empty()) {
        store.emplace(o.store);
        if (!o.questions.empty()) {
            for (const auto& entry : fs::directory_iterator(o.questions)) {
                if (entry.is_regular_file() && entry.path().extension() == ".json") {
                    store->put_questions(service::questions_from_json(Json::parse(corpus::read_file(entry.path()))));
                }
            }
        }
    }

    struct Outcome {
        std::optional<discordq::DiscordQuestionSet> set;
        std::string error;
    };
    std::vector<Outcome> outcomes(stories.size());
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t i = next++; i < stories.size(); i = next++) {
            try {
                auto set = discordq::run_pipeline(stories[i], references, config, adapters);
                discordq::save_question_set(set, fs::path(o.out) / dqset_file_name(set.story_id));
                if (store) {
                    store->put_story(service::build_record(stories[i], set, service::utc_now()));
                }
                outcomes[i].set = std::move(set);
            } catch (const Error& e) {
                outcomes[i].error = e.name() + ": " + e.what();
            }
        }
    };
    unsigned jobs = o.jobs ? o.jobs : std::max(1u, std::thread::hardware_concurrency());
    jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, std::max<std::size_t>(1, stories.size())));
    std::vector<std::thread> threads;
    for (unsigned j = 1; j < jobs; ++j) {
        threads.emplace_back(worker);
    }
    worker();
    for (auto& t : threads) {
        t.join();
    }

    std::size_t failed = 0;
    std::size_t questions = 0;
    for (std::size_t i = 0; i < stories.size(); ++i) {
        const auto& outcome = outcomes[i];
        if (!outcome.set) {
            ++failed;
            err << stories[i].story_id() << ": " << outcome.error << "\n";
            continue;
        }
        const auto& s = outcome.set->pipeline_stats;
        questions += outcome.set->questions.size();
        out << stories[i].story_id() << ": " << s.source_count << " sources, " << s.candidates_generated
            << " candidates, " << s.candidates_unique << " unique, " << s.answered << " answered, "
            << s.qualified << " qualified, " << s.deduplicated << " discord questions";
        if (s.reference_warning) {
            out << " (warning: empty reference corpus, specificity not enforced)";
        }
        out << "\n";
    }
    out << "processed " << (stories.size() - failed) << "/" << stories.size() << " stories, " << questions
        << " discord questions\n";
    return failed ? kDomainError : kOk;
}

std::vector<interfaces::ViewKind> kinds_for(const std::string& kind) {
    if (kind == "all") {
        return {interfaces::kAllViewKinds.begin(), interfaces::kAllViewKinds.end()};
    }
    return {interfaces::parse_view_kind(kind)};
}

int cmd_render(const RenderOptions& o, std::ostream& out, std::ostream& err) {
    const auto kinds = kinds_for(o.kind);
    std::optional<service::Store> store;
    std::vector<corpus::Story> corpusStories;
    if (!o.data.empty()) {
        store.emplace(o.data);
    } else {
        if (o.corpus.empty() || o.dqsets.empty()) {
            throw InvalidRequest("render needs --data, or --corpus and --dqsets");
        }
        corpusStories = corpus::load_corpus_dir(o.corpus);
    }

    std::vector<std::string> ids;
    for (const auto& id : o.stories) {
        if (id != "all") {
            ids.push_back(id);
            continue;
        }
        if (store) {
            for (const auto& s : store->list_stories()) {
                ids.push_back(s.story_id);
            }
            std::sort(ids.begin(), ids.end());
        } else {
            for (const auto& s : corpusStories) {
                ids.push_back(s.story_id());
            }
        }
    }

    std::size_t failed = 0;
    for (const auto& id : ids) {
        std::map<interfaces::ViewKind, Json> payloads;
        if (store) {
            for (auto kind : kinds) {
                try {
                    payloads[kind] = store->get_view(id, kind);
                } catch (const ViewsIncomplete& e) {
                    ++failed;
                    err << e.name() << ": " << e.what() << "\n";
                }
            }
        } else {
            const auto it = std::find_if(corpusStories.begin(), corpusStories.end(),
                                         [&](const corpus::Story& s) { return s.story_id() == id; });
            if (it == corpusStories.end()) {
                throw NotFound("no story '" + id + "' in " + o.corpus);
            }
            const auto set = discordq::load_question_set(fs::path(o.dqsets) / dqset_file_name(id));
            discordq::check_against_story(set, *it);
            for (auto kind : kinds) {
                try {
                    payloads[kind] = interfaces::build_view_payload(kind, *it, set);
                } catch (const Error& e) {
                    ++failed;
                    err << e.name() << ": " << id << " " << interfaces::to_string(kind) << ": " << e.what() << "\n";
                }
            }
        }
        for (const auto& [kind, payload] : payloads) {
            const std::string base = id + "." + std::string(interfaces::to_string(kind));
            if (o.format == "html") {
                corpus::write_file_atomic(fs::path(o.out) / (base + ".html"), interfaces::render_html(payload));
            } else {
                corpus::write_file_atomic(fs::path(o.out) / (base + ".json"), payload.dump(2) + "\n");
            }
        }
        out << id << ": " << payloads.size() << " view(s) written\n";
    }
    return failed ? kDomainError : kOk;
}

std::atomic<service::HttpService*> gServing{nullptr};

void stop_serving(int) {
    if (auto* s = gServing.load()) {
        s->stop();
    }
}

int cmd_serve(const ServeOptions& o, std::ostream& out) {
    std::string data = o.data;
    if (data.empty()) {
        const char* env = std::getenv("ASSEMBLY_DATA_DIR");
        if (!env || !*env) {
            throw InvalidRequest("serve needs --data or ASSEMBLY_DATA_DIR");
        }
        data = env;
    }
    const auto colon = o.addr.rfind(':');
    if (colon == std::string::npos) {
        throw InvalidRequest("--addr must be host:port");
    }
    const std::string host = o.addr.substr(0, colon);
    int port = 0;
    try {
        port = std::stoi(o.addr.substr(colon + 1));
    } catch (const std::exception&) {
        throw InvalidRequest("--addr must be host:port");
    }
    service::Store store(data);
    service::HttpService http(store);
    gServing = &http;
    std::signal(SIGINT, stop_serving);
    std::signal(SIGTERM, stop_serving);
    int bound = port;
    if (port == 0) {
        bound = http.bind_any_port(host);
    }
    out << "serving " << data << " on http://" << host << ":" << bound << "\n" << std::flush;
    const bool ok = port == 0 ? (bound > 0 && http.listen_after_bind()) : http.listen(host, port);
    gServing = nullptr;
    if (!ok) {
        throw IoError("cannot listen on " + o.addr);
    }
    return kOk;
}

int cmd_evaluate(const EvaluateOptions& o, std::ostream& out) {
    const auto responses = evalkit::load_responses(o.responses);
    if (!o.aspects.empty()) {
        evalkit::check_aspects(responses, evalkit::load_aspect_catalogs(o.aspects));
    }
    evalkit::EvaluationOptions options;
    options.bootstrap.seed = o.seed;
    options.bootstrap.resamples = o.resamples;
    options.bootstrap.with_replacement = o.with_replacement;
    options.bootstrap.unit = o.unit == "response" ? evalkit::TestUnit::Response : evalkit::TestUnit::Session;
    const auto report = evalkit::evaluate(responses, options);
    const std::string tables = evalkit::format_tables(report);
    corpus::write_file_atomic(o.report, evalkit::to_json(report).dump(2) + "\n");
    fs::path text(o.report);
    text.replace_extension(".txt");
    corpus::write_file_atomic(text, tables);
    out << tables;
    return kOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Multi-source news assembly: discord questions, reading interfaces and study evaluation"};
    app.name(args.empty() ? "assembly" : args[0]);
    app.require_subcommand(1);

    IngestOptions ingest;
    auto* ingestCmd = app.add_subcommand("ingest", "Extract story corpus files from pages or URLs");
    ingestCmd->add_option("--input", ingest.input, "Manifest directory, manifest .json, or URL list")->required();
    ingestCmd->add_option("--out", ingest.out, "Corpus directory to write")->required();
    ingestCmd->add_option("--story-id", ingest.story_id, "Story id for a URL list");
    ingestCmd->add_option("--title", ingest.title, "Story title for a URL list");

    ProcessOptions process;
    auto* processCmd = app.add_subcommand("process", "Run the discord-question pipeline over a corpus");
    processCmd->add_option("--corpus", process.corpus, "Corpus directory")->required();
    processCmd->add_option("--reference", process.reference, "Reference corpus directory (default: --corpus)");
    processCmd->add_option("--config", process.config, "Pipeline config JSON");
    processCmd->add_option("--out", process.out, "Directory for question sets")->required();
    processCmd->add_option("--jobs", process.jobs, "Worker threads (default: CPU count)");
    processCmd->add_option("--store", process.store, "Also store processed stories and views in this data directory");
    processCmd->add_option("--questions", process.questions, "Comprehension question files to copy into --store");

    RenderOptions render;
    auto* renderCmd = app.add_subcommand("render", "Write interface payloads");
    renderCmd->add_option("--story", render.stories, "Story id (repeatable, or 'all')")->required();
    renderCmd->add_option("--kind", render.kind, "annotated|recomposed|grid|headlines|article|all");
    renderCmd->add_option("--format", render.format, "json|html")->check(CLI::IsMember({"json", "html"}));
    renderCmd->add_option("--out", render.out, "Output directory")->required();
    renderCmd->add_option("--corpus", render.corpus, "Corpus directory");
    renderCmd->add_option("--dqsets", render.dqsets, "Question set directory");
    renderCmd->add_option("--data", render.data, "Read stored views from this data directory instead");

    ServeOptions serve;
    auto* serveCmd = app.add_subcommand("serve", "Serve stories, views and exercise sessions over HTTP");
    serveCmd->add_option("--data", serve.data, "Data directory (default: $ASSEMBLY_DATA_DIR)");
    serveCmd->add_option("--addr", serve.addr, "host:port (port 0 picks a free port)");

    EvaluateOptions evaluate;
    auto* evaluateCmd = app.add_subcommand("evaluate", "Compute study metrics and significance");
    evaluateCmd->add_option("--responses", evaluate.responses, "Study data (.json or .csv)")->required();
    evaluateCmd->add_option("--aspects", evaluate.aspects, "Aspect catalog directory");
    evaluateCmd->add_option("--seed", evaluate.seed, "Bootstrap seed");
    evaluateCmd->add_option("--report", evaluate.report, "Report JSON path (tables go next to it as .txt)")->required();
    evaluateCmd->add_option("--resamples", evaluate.resamples, "Resamples per participant-subset size");
    evaluateCmd->add_flag("--with-replacement", evaluate.with_replacement, "Resample participants with replacement");
    evaluateCmd->add_option("--unit", evaluate.unit, "Test unit: session|response")
        ->check(CLI::IsMember({"session", "response"}));

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) {
        reversed.pop_back();
    }
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n\n";
        const auto sub = app.get_subcommands();
        err << (sub.empty() ? app.help() : sub.front()->help());
        return kUsageError;
    }

    try {
        if (*ingestCmd) return cmd_ingest(ingest, out);
        if (*processCmd) return cmd_process(process, out, err);
        if (*renderCmd) return cmd_render(render, out, err);
        if (*serveCmd) return cmd_serve(serve, out);
        if (*evaluateCmd) return cmd_evaluate(evaluate, out);
    } catch (const Error& e) {
        err << e.name() << ": " << e.what() << "\n";
        return kDomainError;
    } catch (const fs::filesystem_error& e) {
        err << "IoError: " << e.what() << "\n";
        return kDomainError;
    }
    return kUsageError;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    return run(std::vector<std::string>(argv, argv + argc), out, err);
}

} // namespace assembly::cli
