#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "newsgraph/error.hpp"
#include "newsgraph/pipeline.hpp"

namespace {

struct CliValues {
    std::string corpus;
    std::string out;
    std::string config_path;
    std::string method;
    std::string embedder_kind;
    std::string embedder_endpoint;
    std::string labels;
    double threshold = 0.0;
    double damping = 0.0;
    double resolution = 0.0;
    int summary_k = 0;
    int window_days = 0;
    int jobs = 0;
    std::uint64_t seed = 0;
};

void add_common_options(CLI::App* cmd, CliValues& v) {
    cmd->add_option("--corpus", v.corpus, "Corpus file, one JSON article per line")->required();
    cmd->add_option("--out", v.out, "Output directory")->required();
    cmd->add_option("--config", v.config_path, "JSON config file; flags override it");
    cmd->add_option("--threshold", v.threshold, "Similarity edge threshold");
    cmd->add_option("--damping", v.damping, "PageRank damping factor");
    cmd->add_option("--summary-k", v.summary_k, "Sentences per summary");
    cmd->add_option("--window-days", v.window_days, "Time window length in days");
    cmd->add_option("--method", v.method,
                    "Summarizer (textrank|lead) or clustering (louvain|leiden) method");
    cmd->add_option("--resolution", v.resolution, "Modularity resolution");
    cmd->add_option("--seed", v.seed, "Clustering seed");
    cmd->add_option("--embedder", v.embedder_kind, "Embedding backend (hashed_tfidf|remote)");
    cmd->add_option("--embedder-endpoint", v.embedder_endpoint,
                    "Base URL of the remote embedding service");
    cmd->add_option("--labels", v.labels, "JSON file mapping topic ids to category labels");
    cmd->add_option("--jobs", v.jobs, "Worker threads for per-article work");
}

// Flags land in the config only when actually given, so precedence stays
// defaults < config file < flags.
void apply_flags(const CLI::App& cmd, const CliValues& v, newsgraph::PipelineConfig& cfg) {
    cfg.corpus_path = v.corpus;
    if (cmd.count("--threshold")) cfg.threshold = v.threshold;
    if (cmd.count("--damping")) cfg.damping = v.damping;
    if (cmd.count("--summary-k")) cfg.summary_k = v.summary_k;
    if (cmd.count("--window-days")) cfg.window_days = v.window_days;
    if (cmd.count("--resolution")) cfg.resolution = v.resolution;
    if (cmd.count("--seed")) cfg.seed = v.seed;
    if (cmd.count("--labels")) cfg.labels_path = v.labels;
    if (cmd.count("--jobs")) cfg.jobs = v.jobs;
    if (cmd.count("--embedder")) {
        if (v.embedder_kind == "hashed_tfidf") {
            cfg.embedder.kind = newsgraph::EmbedderKind::hashed_tfidf;
        } else if (v.embedder_kind == "remote") {
            cfg.embedder.kind = newsgraph::EmbedderKind::remote;
        } else {
            throw newsgraph::Error("unknown embedder '" + v.embedder_kind +
                                   "' (expected hashed_tfidf or remote)");
        }
    }
    if (cmd.count("--embedder-endpoint")) cfg.embedder.endpoint = v.embedder_endpoint;
}

void apply_method_flag(const std::string& command, const std::string& method,
                       newsgraph::PipelineConfig& cfg) {
    if (method.empty()) return;
    const bool is_summary = method == "textrank" || method == "lead";
    const bool is_cluster = method == "louvain" || method == "leiden";
    if (!is_summary && !is_cluster) {
        throw newsgraph::Error("unknown method '" + method +
                               "' (expected textrank, lead, louvain or leiden)");
    }
    if (command == "summarize" || command == "evaluate") {
        if (!is_summary) {
            throw newsgraph::Error("method '" + method + "' does not summarize; " + command +
                                   " expects textrank or lead");
        }
        cfg.summary_method = method;
    } else if (command == "cluster" || command == "report") {
        if (!is_cluster) {
            throw newsgraph::Error("method '" + method + "' does not cluster; " + command +
                                   " expects louvain or leiden");
        }
        cfg.cluster_method = method;
    } else {
        (is_summary ? cfg.summary_method : cfg.cluster_method) = method;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Summarizes a news corpus, clusters the summaries into topics per time "
                 "window and reports topic evolution and coverage."};
    app.require_subcommand(1);

    CliValues values;
    add_common_options(app.add_subcommand("summarize", "Write extractive summaries"), values);
    add_common_options(app.add_subcommand("evaluate", "Score summaries against references"),
                       values);
    add_common_options(app.add_subcommand("cluster", "Cluster summaries into topics"), values);
    add_common_options(app.add_subcommand("report", "Write topic evolution and coverage tables"),
                       values);
    add_common_options(app.add_subcommand("all", "Run the full pipeline"), values);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const CLI::App* cmd = app.get_subcommands().front();
    const std::string command = cmd->get_name();
    try {
        newsgraph::PipelineConfig cfg;
        if (cmd->count("--config")) {
            newsgraph::apply_config_file(cfg, values.config_path);
        }
        apply_flags(*cmd, values, cfg);
        apply_method_flag(command, values.method, cfg);
        cfg.out_dir = values.out;
        newsgraph::run_pipeline(cfg, command, std::cerr);
    } catch (const newsgraph::RemoteError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const newsgraph::DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const newsgraph::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
