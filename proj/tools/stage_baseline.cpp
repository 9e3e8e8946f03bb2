// Serves one baseline stage over the line-delimited adapter protocol on
// stdin/stdout. Useful as a template for external stage implementations.
//
//   assembly-stage generate|answer|consolidate [--config FILE]

#include "assembly/corpus/story_io.hpp"
#include "assembly/discordq/serialize.hpp"
#include "assembly/discordq/stages.hpp"
#include "assembly/error.hpp"

#include <iostream>
#include <string>
#include <vector>

using namespace assembly;
using namespace assembly::discordq;

int main(int argc, char** argv) {
    if (argc != 2 && argc != 4) {
        std::cerr << "usage: assembly-stage generate|answer|consolidate [--config FILE]\n";
        return 2;
    }
    const std::string stage = argv[1];
    try {
        PipelineConfig config;
        if (argc == 4) {
            config = pipeline_config_from_json(Json::parse(corpus::read_file(argv[3])));
        }
        std::vector<Json> records;
        std::string line;
        while (std::getline(std::cin, line)) {
            if (line.find_first_not_of(" \t\r") != std::string::npos) {
                records.push_back(Json::parse(line));
            }
        }
        if (stage == "generate" || stage == "answer") {
            if (records.empty()) {
                throw SchemaError("missing article record");
            }
            const corpus::SourceArticle article = corpus::article_from_json(records.front());
            if (stage == "generate") {
                for (const auto& question : generate_questions_baseline(article)) {
                    std::cout << to_json(question).dump() << '\n';
                }
            } else {
                const PreparedArticle prepared(article);
                for (std::size_t i = 1; i < records.size(); ++i) {
                    const auto span = answer_prepared(question_terms(candidate_from_json(records[i])), prepared, config);
                    std::cout << (span ? to_json(*span) : Json(nullptr)).dump() << '\n';
                }
            }
        } else if (stage == "consolidate") {
            std::vector<AnswerSpan> spans;
            for (const auto& record : records) {
                spans.push_back(span_from_json(record));
            }
            for (const auto& group : consolidate(spans, config)) {
                std::cout << to_json(group).dump() << '\n';
            }
        } else {
            std::cerr << "unknown stage '" << stage << "'\n";
            return 2;
        }
    } catch (const Error& e) {
        std::cerr << e.name() << ": " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
