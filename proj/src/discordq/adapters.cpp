#include "assembly/discordq/adapters.hpp"

#include "assembly/corpus/story_io.hpp"
#include "assembly/discordq/serialize.hpp"
#include "assembly/error.hpp"
#include "assembly/json_fields.hpp"

#include <httplib.h>

#include <cerrno>
#include <cstring>
#include <regex>
#include <sstream>
#include <thread>

#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

extern char** environ;

namespace assembly::discordq {

namespace {

std::vector<std::string> split_lines(const std::string& body) {
    std::vector<std::string> lines;
    std::istringstream in(body);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.find_first_not_of(" \t") != std::string::npos) {
            lines.push_back(line);
        }
    }
    return lines;
}

std::string join_lines(const std::vector<std::string>& lines) {
    std::string body;
    for (const auto& line : lines) {
        body += line;
        body += '\n';
    }
    return body;
}

class Pipe {
public:
    Pipe() {
        if (::pipe(Fds) != 0) {
            throw std::system_error(errno, std::generic_category(), "pipe");
        }
    }
    ~Pipe() {
        close_read();
        close_write();
    }
    int read_end() const { return Fds[0]; }
    int write_end() const { return Fds[1]; }
    void close_read() { close_fd(Fds[0]); }
    void close_write() { close_fd(Fds[1]); }

private:
    static void close_fd(int& fd) {
        if (fd >= 0) {
            ::close(fd);
            fd = -1;
        }
    }
    int Fds[2] = {-1, -1};
};

std::string run_subprocess(const std::vector<std::string>& command, std::string_view stageName,
                           const std::string& input) {
    const std::string stage(stageName);
    Pipe toChild;
    Pipe fromChild;

    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    posix_spawn_file_actions_adddup2(&actions, toChild.read_end(), STDIN_FILENO);
    posix_spawn_file_actions_adddup2(&actions, fromChild.write_end(), STDOUT_FILENO);
    posix_spawn_file_actions_addclose(&actions, toChild.write_end());
    posix_spawn_file_actions_addclose(&actions, fromChild.read_end());

    std::vector<char*> argv;
    for (const auto& arg : command) {
        argv.push_back(const_cast<char*>(arg.c_str()));
    }
    argv.push_back(nullptr);

    pid_t pid = 0;
    const int rc = posix_spawnp(&pid, argv[0], &actions, nullptr, argv.data(), environ);
    posix_spawn_file_actions_destroy(&actions);
    if (rc != 0) {
        throw StageFailure(stage, "cannot start '" + command.front() + "': " + std::strerror(rc));
    }
    toChild.close_read();
    fromChild.close_write();

    // Writing happens on its own thread so a child that answers while still
    // reading cannot deadlock against a full pipe.
    std::thread writer([&toChild, &input] {
        std::size_t written = 0;
        while (written < input.size()) {
            const ssize_t n = ::write(toChild.write_end(), input.data() + written, input.size() - written);
            if (n < 0 && errno == EINTR) {
                continue;
            }
            if (n <= 0) {
                break;
            }
            written += static_cast<std::size_t>(n);
        }
        toChild.close_write();
    });

    std::string output;
    char buffer[65536];
    for (;;) {
        const ssize_t n = ::read(fromChild.read_end(), buffer, sizeof buffer);
        if (n < 0 && errno == EINTR) {
            continue;
        }
        if (n <= 0) {
            break;
        }
        output.append(buffer, static_cast<std::size_t>(n));
    }
    writer.join();

    int status = 0;
    while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
    }
    if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
        throw StageFailure(stage, "'" + command.front() + "' exited abnormally (status "
                                      + std::to_string(WIFEXITED(status) ? WEXITSTATUS(status) : -1) + ")");
    }
    return output;
}

std::string post_http(const ExternalStage& config, std::string_view stageName, const std::string& body) {
    const std::string stage(stageName);
    static const std::regex urlPattern(R"(^(https?://[^/]+)(/.*)?$)", std::regex::icase);
    std::smatch match;
    if (!std::regex_match(config.url, match, urlPattern)) {
        throw StageFailure(stage, "invalid endpoint url '" + config.url + "'");
    }
    httplib::Client client(match[1].str());
    client.set_connection_timeout(config.timeout_seconds, 0);
    client.set_read_timeout(config.timeout_seconds, 0);
    client.set_write_timeout(config.timeout_seconds, 0);
    const std::string path = match[2].matched ? match[2].str() : "/";
    auto response = client.Post(path, body, "application/x-ndjson");
    if (!response) {
        throw StageFailure(stage, "request to '" + config.url + "' failed: " + httplib::to_string(response.error()));
    }
    if (response->status != 200) {
        throw StageFailure(stage, "'" + config.url + "' replied with status " + std::to_string(response->status));
    }
    return response->body;
}

template <typename Parse>
auto parse_line(std::string_view stageName, const std::string& line, Parse parse) {
    try {
        return parse(Json::parse(line));
    } catch (const Json::exception& e) {
        throw StageFailure(std::string(stageName), std::string("unparseable record: ") + e.what());
    } catch (const SchemaError& e) {
        throw StageFailure(std::string(stageName), e.what());
    }
}

ExternalStage stage_from_json(const Json& value, const std::string& name) {
    using namespace json_fields;
    const std::string where = "adapter '" + name + "'";
    if (!value.is_object()) {
        throw SchemaError(where + ": expected an object");
    }
    ExternalStage stage;
    if (value.contains("command")) {
        for (const auto& arg : require_array(value, "command", where)) {
            if (!arg.is_string()) {
                throw SchemaError(where + ": command entries must be strings");
            }
            stage.command.push_back(arg.get<std::string>());
        }
        if (stage.command.empty()) {
            throw SchemaError(where + ": command must not be empty");
        }
    } else if (value.contains("url")) {
        stage.url = require_string(value, "url", where);
    } else {
        throw SchemaError(where + ": needs 'command' or 'url'");
    }
    if (value.contains("timeout_seconds")) {
        stage.timeout_seconds = static_cast<int>(require_integer(value, "timeout_seconds", where));
    }
    return stage;
}

} // namespace

std::vector<std::string> call_external(const ExternalStage& stage, std::string_view stageName,
                                       const std::vector<std::string>& lines) {
    const std::string body = join_lines(lines);
    return split_lines(stage.command.empty() ? post_http(stage, stageName, body)
                                             : run_subprocess(stage.command, stageName, body));
}

AdapterConfig adapter_config_from_json(const Json& value) {
    if (!value.is_object()) {
        throw SchemaError("adapters must be a JSON object");
    }
    AdapterConfig config;
    for (const auto& [key, entry] : value.items()) {
        if (key == "generate") {
            config.generate = stage_from_json(entry, key);
        } else if (key == "answer") {
            config.answer = stage_from_json(entry, key);
        } else if (key == "consolidate") {
            config.consolidate = stage_from_json(entry, key);
        } else {
            throw SchemaError("unknown adapter stage '" + key + "'");
        }
    }
    return config;
}

StageAdapters make_stage_adapters(const AdapterConfig& config) {
    StageAdapters adapters;
    if (config.generate) {
        adapters.generate = [stage = *config.generate](const corpus::SourceArticle& article) {
            const auto lines = call_external(stage, "generate", {corpus::to_json(article).dump()});
            std::vector<CandidateQuestion> questions;
            for (const auto& line : lines) {
                questions.push_back(parse_line("generate", line, candidate_from_json));
            }
            return questions;
        };
    }
    if (config.answer) {
        adapters.answer = [stage = *config.answer](const corpus::SourceArticle& article,
                                                   const std::vector<CandidateQuestion>& questions) {
            std::vector<std::string> request{corpus::to_json(article).dump()};
            for (const auto& question : questions) {
                request.push_back(to_json(question).dump());
            }
            std::vector<std::optional<AnswerSpan>> answers;
            for (const auto& line : call_external(stage, "answer", request)) {
                answers.push_back(parse_line("answer", line, [](const Json& value) -> std::optional<AnswerSpan> {
                    if (value.is_null()) {
                        return std::nullopt;
                    }
                    return span_from_json(value);
                }));
            }
            return answers;
        };
    }
    if (config.consolidate) {
        adapters.consolidate = [stage = *config.consolidate](const std::vector<AnswerSpan>& spans) {
            std::vector<std::string> request;
            for (const auto& span : spans) {
                request.push_back(to_json(span).dump());
            }
            std::vector<AnswerGroup> groups;
            for (const auto& line : call_external(stage, "consolidate", request)) {
                groups.push_back(parse_line("consolidate", line, group_from_json));
            }
            return groups;
        };
    }
    return adapters;
}

} // namespace assembly::discordq
