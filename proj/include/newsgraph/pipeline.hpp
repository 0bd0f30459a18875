#ifndef NEWSGRAPH_PIPELINE_HPP_
#define NEWSGRAPH_PIPELINE_HPP_

#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "newsgraph/embedder.hpp"

namespace newsgraph {

/// Everything a run needs besides the subcommand. Defaults match the CLI
/// defaults; a config file and then explicit flags override them.
struct PipelineConfig {
    std::string corpus_path;
    std::string out_dir;

    double threshold = 0.6;
    double damping = 0.85;
    double tolerance = 1e-6;
    int max_iterations = 100;
    int summary_k = 3;
    int distill_k = 3;
    int window_days = 7;
    std::string summary_method = "textrank";  // or "lead"
    std::string cluster_method = "louvain";   // or "leiden"
    double resolution = 1.0;
    std::uint64_t seed = 42;
    double alpha = 0.05;
    int min_cluster_size = 1;
    std::vector<std::string> keywords;  // empty: no filtering
    std::string labels_path;
    int jobs = 1;
    EmbedderConfig embedder;
};

/// Merges a JSON config file into config. Keys mirror the struct fields;
/// unknown keys are an error so typos do not silently fall back to
/// defaults.
void apply_config_file(PipelineConfig& config, const std::string& path);

void validate_config(const PipelineConfig& config);

/// Runs one subcommand (summarize, evaluate, cluster, report or all) and
/// writes its artifacts under config.out_dir. Progress notes go to log.
/// Throws DataError when the corpus cannot support the command and
/// RemoteError when a remote backend stays unreachable.
void run_pipeline(const PipelineConfig& config, const std::string& command, std::ostream& log);

/// Calls fn(0..count-1), work-stealing across min(jobs, count) threads
/// when jobs > 1. The first exception is rethrown after all workers
/// finish. Results must be written to per-index slots; fn order is
/// unspecified.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn);

}  // namespace newsgraph

#endif  // NEWSGRAPH_PIPELINE_HPP_
