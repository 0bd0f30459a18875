#include "newsgraph/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "json.hpp"

#include "newsgraph/community.hpp"
#include "newsgraph/corpus.hpp"
#include "newsgraph/error.hpp"
#include "newsgraph/report.hpp"
#include "newsgraph/rouge.hpp"
#include "newsgraph/segment.hpp"
#include "newsgraph/simgraph.hpp"
#include "newsgraph/stats.hpp"
#include "newsgraph/textrank.hpp"
#include "newsgraph/topics.hpp"

namespace newsgraph {
namespace {

namespace fs = std::filesystem;

void write_text_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << content;
    out.flush();
    if (!out) throw Error("write failed for '" + path.string() + "'");
}

PageRankParams pagerank_params(const PipelineConfig& cfg) {
    PageRankParams params;
    params.damping = cfg.damping;
    params.tolerance = cfg.tolerance;
    params.max_iterations = cfg.max_iterations;
    return params;
}

const char* method_name(SummaryMethod method) {
    return method == SummaryMethod::lead ? "lead" : "textrank";
}

nlohmann::json summary_to_json(const Summary& summary) {
    nlohmann::json sentences = nlohmann::json::array();
    for (const Sentence& s : summary.sentences) {
        sentences.push_back({{"index", s.index}, {"text", s.text}});
    }
    return {{"article_id", summary.article_id},
            {"method", method_name(summary.method)},
            {"scores", summary.scores},
            {"sentences", sentences},
            {"text", summary.text()}};
}

// The output directory is deliberately not echoed: runs into different
// directories must produce byte-identical trees.
std::string run_config_json(const PipelineConfig& cfg, const std::string& command) {
    nlohmann::json j;
    j["command"] = command;
    j["corpus"] = cfg.corpus_path;
    j["threshold"] = cfg.threshold;
    j["damping"] = cfg.damping;
    j["tolerance"] = cfg.tolerance;
    j["max_iterations"] = cfg.max_iterations;
    j["summary_k"] = cfg.summary_k;
    j["distill_k"] = cfg.distill_k;
    j["window_days"] = cfg.window_days;
    j["summary_method"] = cfg.summary_method;
    j["cluster_method"] = cfg.cluster_method;
    j["resolution"] = cfg.resolution;
    j["seed"] = cfg.seed;
    j["alpha"] = cfg.alpha;
    j["min_cluster_size"] = cfg.min_cluster_size;
    j["keywords"] = cfg.keywords;
    j["labels"] = cfg.labels_path;
    j["jobs"] = cfg.jobs;
    j["embedder"] = {
        {"kind", cfg.embedder.kind == EmbedderKind::remote ? "remote" : "hashed_tfidf"},
        {"dimension", cfg.embedder.dimension},
        {"seed", cfg.embedder.seed},
        {"endpoint", cfg.embedder.endpoint},
        {"timeout_ms", cfg.embedder.timeout_ms},
        {"max_retries", cfg.embedder.max_retries}};
    return j.dump(2) + "\n";
}

ArticleSet load_working_corpus(const PipelineConfig& cfg, std::ostream& log) {
    ArticleSet set = load_corpus(cfg.corpus_path);
    if (!cfg.keywords.empty()) {
        const std::size_t before = set.size();
        set = filter_by_keywords(set, cfg.keywords);
        log << "keyword filter kept " << set.size() << " of " << before << " articles\n";
    }
    if (set.empty()) {
        throw DataError(cfg.keywords.empty()
                            ? "corpus '" + cfg.corpus_path + "' holds no articles"
                            : "no articles match the keyword filter");
    }
    return set;
}

std::unique_ptr<Embedder> fitted_embedder(const std::vector<std::string>& texts,
                                          const PipelineConfig& cfg) {
    auto embedder = make_embedder(cfg.embedder);
    if (texts.empty()) {
        embedder->fit({""});
    } else {
        embedder->fit(texts);
    }
    return embedder;
}

std::unique_ptr<Embedder> fitted_sentence_embedder(const ArticleSet& corpus,
                                                   const PipelineConfig& cfg) {
    std::vector<std::string> texts;
    for (const Article& a : corpus.articles) {
        for (const Sentence& s : split_sentences(a.body, a.id)) texts.push_back(s.text);
    }
    return fitted_embedder(texts, cfg);
}

std::unique_ptr<Embedder> fitted_summary_embedder(const std::vector<Summary>& summaries,
                                                  const PipelineConfig& cfg) {
    std::vector<std::string> texts;
    texts.reserve(summaries.size());
    for (const Summary& s : summaries) texts.push_back(s.text());
    return fitted_embedder(texts, cfg);
}

std::vector<Summary> summarize_all(const ArticleSet& corpus, const std::string& method,
                                   Embedder& embedder, const PipelineConfig& cfg) {
    std::vector<Summary> out(corpus.size());
    const PageRankParams params = pagerank_params(cfg);
    parallel_for(corpus.size(), cfg.jobs, [&](std::size_t i) {
        const Article& a = corpus.articles[i];
        out[i] = method == "lead"
                     ? summarize_lead(a, cfg.summary_k)
                     : summarize_textrank(a, embedder, cfg.summary_k, cfg.threshold, params);
    });
    return out;
}

struct ClusterArtifacts {
    SimilarityGraph graph;
    Partition partition;
    std::vector<TopicCluster> topics;
};

ClusterArtifacts cluster_summaries(const std::vector<Summary>& summaries, Embedder& embedder,
                                   const PipelineConfig& cfg) {
    std::vector<std::string> texts;
    texts.reserve(summaries.size());
    for (const Summary& s : summaries) texts.push_back(s.text());
    const auto vectors = embedder.embed(texts);

    std::vector<std::pair<std::string, EmbeddingVector>> units;
    units.reserve(summaries.size());
    for (std::size_t i = 0; i < summaries.size(); ++i) {
        units.emplace_back(summaries[i].article_id, vectors[i]);
    }
    ClusterArtifacts art;
    art.graph = build_similarity_graph(units, cfg.threshold);
    art.partition = cfg.cluster_method == "leiden"
                        ? leiden(art.graph, cfg.seed, cfg.resolution)
                        : louvain(art.graph, cfg.seed, cfg.resolution);
    art.topics = build_topic_clusters(art.graph, art.partition, summaries, embedder,
                                      cfg.distill_k, cfg.threshold, pagerank_params(cfg),
                                      cfg.min_cluster_size);
    return art;
}

void write_evaluation(const PipelineConfig& cfg, const ArticleSet& corpus,
                      const std::vector<Summary>& summaries, Embedder& sentence_embedder,
                      std::ostream& log) {
    std::vector<std::size_t> scored;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        if (corpus.articles[i].reference_summary) scored.push_back(i);
    }

    const auto candidates_for = [&](const std::string& method) {
        if (method == cfg.summary_method) return summaries;
        return summarize_all(corpus, method, sentence_embedder, cfg);
    };
    const std::vector<Summary> textrank_candidates = candidates_for("textrank");
    const std::vector<Summary> lead_candidates = candidates_for("lead");

    const auto pairs_for = [&](const std::vector<Summary>& candidates) {
        std::vector<std::pair<std::string, std::string>> pairs;
        pairs.reserve(scored.size());
        for (const std::size_t i : scored) {
            pairs.emplace_back(candidates[i].text(), *corpus.articles[i].reference_summary);
        }
        return pairs;
    };
    const RougeDistribution textrank_dist = evaluate_corpus(pairs_for(textrank_candidates));
    const RougeDistribution lead_dist = evaluate_corpus(pairs_for(lead_candidates));
    write_text_file(fs::path(cfg.out_dir) / "rouge_textrank.json",
                    rouge_report_json(textrank_dist) + "\n");
    write_text_file(fs::path(cfg.out_dir) / "rouge_lead.json", rouge_report_json(lead_dist) + "\n");

    const auto f1_column = [](const RougeDistribution& dist, int which) {
        std::vector<double> out;
        out.reserve(dist.per_pair.size());
        for (const RougePair& p : dist.per_pair) {
            out.push_back(which == 1 ? p.rouge1.f1 : which == 2 ? p.rouge2.f1 : p.rougeL.f1);
        }
        return out;
    };
    nlohmann::json ci;
    ci["alpha"] = cfg.alpha;
    ci["candidate"] = "textrank";
    ci["baseline"] = "lead";
    ci["pairs"] = scored.size();
    const char* names[] = {"rouge1", "rouge2", "rougeL"};
    for (int metric = 1; metric <= 3; ++metric) {
        const MeanDiffResult r = mean_diff_ci(f1_column(textrank_dist, metric),
                                              f1_column(lead_dist, metric), cfg.alpha);
        ci["metrics"][names[metric - 1]] = nlohmann::json::parse(mean_diff_json(r, names[metric - 1]));
        log << names[metric - 1] << ": textrank " << r.mean_a << " vs lead " << r.mean_b
            << ", ci [" << r.ci_low << ", " << r.ci_high << "]"
            << (r.significant ? " (significant)" : "") << "\n";
    }
    write_text_file(fs::path(cfg.out_dir) / "ci.json", ci.dump(2) + "\n");
}

void write_clustering(const PipelineConfig& cfg, const ArticleSet& corpus,
                      const std::vector<Summary>& summaries, bool want_cluster_files,
                      bool want_reports, std::ostream& log) {
    const auto windows = window_partition(corpus, cfg.window_days, default_window_origin(corpus));
    log << windows.size() << " window(s) of " << cfg.window_days << " day(s)\n";

    auto embedder = fitted_summary_embedder(summaries, cfg);
    std::map<std::string, std::string> labels;
    if (!cfg.labels_path.empty()) labels = load_labels(cfg.labels_path);
    std::set<std::string> consumed_label_keys;

    // Label keys are "<scope>/<community id>", where the scope is a window
    // label or "full_period".
    const auto cluster_and_label = [&](const std::vector<Summary>& subset,
                                       const std::string& scope) {
        ClusterArtifacts art = cluster_summaries(subset, *embedder, cfg);
        std::map<std::string, std::string> scoped;
        const std::string prefix = scope + "/";
        for (const auto& [key, value] : labels) {
            if (key.rfind(prefix, 0) == 0) {
                scoped.emplace(key.substr(prefix.size()), value);
                consumed_label_keys.insert(key);
            }
        }
        for (const std::string& warning : apply_category_labels(art.topics, scoped)) {
            log << scope << ": " << warning << "\n";
        }
        return art;
    };

    log << "clustering (" << cfg.cluster_method << ", resolution " << cfg.resolution
        << ", seed " << cfg.seed << ")\n";

    std::unordered_map<std::string, std::size_t> summary_index;
    for (std::size_t i = 0; i < summaries.size(); ++i) {
        summary_index.emplace(summaries[i].article_id, i);
    }
    const auto window_summaries = [&](const ArticleSet& articles) {
        std::vector<Summary> subset;
        subset.reserve(articles.size());
        for (const Article& a : articles.articles) {
            subset.push_back(summaries[summary_index.at(a.id)]);
        }
        return subset;
    };

    std::vector<ClusterArtifacts> per_window;
    per_window.reserve(windows.size());
    for (const auto& [window, articles] : windows) {
        per_window.push_back(cluster_and_label(window_summaries(articles), window.label));
        log << "window " << window.label << ": " << per_window.back().partition.num_communities
            << " communities over " << per_window.back().graph.num_nodes() << " summaries\n";
    }

    if (want_cluster_files) {
        const ClusterArtifacts full = cluster_and_label(summaries, "full_period");
        log << "full period: " << full.partition.num_communities << " communities over "
            << full.graph.num_nodes() << " summaries\n";
        const fs::path full_dir = fs::path(cfg.out_dir) / "full_period";
        fs::create_directories(full_dir);
        write_text_file(full_dir / "partition.json",
                        partition_to_json_string(full.graph, full.partition, cfg.cluster_method,
                                                 cfg.resolution) +
                            "\n");
        write_text_file(full_dir / "topics.json", topics_to_json_string(full.topics) + "\n");
        const auto matrix = topic_similarity_matrix(full.topics, *embedder);
        write_text_file(full_dir / "topic_matrix.json",
                        topic_matrix_json_string(full.topics, matrix) + "\n");

        for (std::size_t i = 0; i < windows.size(); ++i) {
            const ClusterArtifacts& art = per_window[i];
            const fs::path dir = fs::path(cfg.out_dir) / "windows" / windows[i].first.label;
            fs::create_directories(dir);
            write_text_file(dir / "partition.json",
                            partition_to_json_string(art.graph, art.partition, cfg.cluster_method,
                                                     cfg.resolution) +
                                "\n");
            write_text_file(dir / "topics.json", topics_to_json_string(art.topics) + "\n");
        }
    }

    for (const auto& [key, value] : labels) {
        if (!consumed_label_keys.count(key)) {
            log << "label key '" << key << "' matches no clustered scope\n";
        }
    }

    if (want_reports) {
        std::vector<WindowClusters> window_clusters;
        std::vector<std::pair<std::string, std::vector<TopicFrequencyRow>>> tables;
        std::vector<TopicCluster> all_clusters;
        for (std::size_t i = 0; i < windows.size(); ++i) {
            const auto& [window, articles] = windows[i];
            window_clusters.push_back({window, per_window[i].topics, articles.size()});
            tables.emplace_back(window.label, topic_frequency_table(per_window[i].topics, corpus));
            all_clusters.insert(all_clusters.end(), per_window[i].topics.begin(),
                                per_window[i].topics.end());
        }
        const fs::path dir = fs::path(cfg.out_dir) / "reports";
        fs::create_directories(dir);

        std::ostringstream evolution;
        write_evolution_csv(evolution_series(window_clusters), evolution);
        write_text_file(dir / "evolution.csv", evolution.str());

        std::ostringstream coverage;
        write_coverage_csv(coverage_breakdown(all_clusters, corpus), coverage);
        write_text_file(dir / "coverage.csv", coverage.str());

        std::ostringstream topics;
        write_topics_csv(tables, distinct_sources(corpus), topics);
        write_text_file(dir / "topics.csv", topics.str());
        log << "reports written over " << windows.size() << " window(s)\n";
    }
}

}  // namespace

void apply_config_file(PipelineConfig& config, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error("invalid config file '" + path + "': " + e.what());
    }
    if (!j.is_object()) throw Error("config file '" + path + "' must hold a JSON object");

    try {
        for (const auto& [key, value] : j.items()) {
            if (key == "threshold") {
                config.threshold = value.get<double>();
            } else if (key == "damping") {
                config.damping = value.get<double>();
            } else if (key == "tolerance") {
                config.tolerance = value.get<double>();
            } else if (key == "max_iterations") {
                config.max_iterations = value.get<int>();
            } else if (key == "summary_k") {
                config.summary_k = value.get<int>();
            } else if (key == "distill_k") {
                config.distill_k = value.get<int>();
            } else if (key == "window_days") {
                config.window_days = value.get<int>();
            } else if (key == "summary_method") {
                config.summary_method = value.get<std::string>();
            } else if (key == "cluster_method") {
                config.cluster_method = value.get<std::string>();
            } else if (key == "resolution") {
                config.resolution = value.get<double>();
            } else if (key == "seed") {
                config.seed = value.get<std::uint64_t>();
            } else if (key == "alpha") {
                config.alpha = value.get<double>();
            } else if (key == "min_cluster_size") {
                config.min_cluster_size = value.get<int>();
            } else if (key == "keywords") {
                config.keywords = value.get<std::vector<std::string>>();
            } else if (key == "labels") {
                config.labels_path = value.get<std::string>();
            } else if (key == "jobs") {
                config.jobs = value.get<int>();
            } else if (key == "embedder") {
                if (!value.is_object()) throw Error("config key 'embedder' must be an object");
                for (const auto& [ekey, evalue] : value.items()) {
                    if (ekey == "kind") {
                        const std::string kind = evalue.get<std::string>();
                        if (kind == "hashed_tfidf") {
                            config.embedder.kind = EmbedderKind::hashed_tfidf;
                        } else if (kind == "remote") {
                            config.embedder.kind = EmbedderKind::remote;
                        } else {
                            throw Error("unknown embedder kind '" + kind + "'");
                        }
                    } else if (ekey == "dimension") {
                        config.embedder.dimension = evalue.get<std::size_t>();
                    } else if (ekey == "seed") {
                        config.embedder.seed = evalue.get<std::uint64_t>();
                    } else if (ekey == "endpoint") {
                        config.embedder.endpoint = evalue.get<std::string>();
                    } else if (ekey == "timeout_ms") {
                        config.embedder.timeout_ms = evalue.get<int>();
                    } else if (ekey == "max_retries") {
                        config.embedder.max_retries = evalue.get<int>();
                    } else {
                        throw Error("unknown config key 'embedder." + ekey + "'");
                    }
                }
            } else {
                throw Error("unknown config key '" + key + "'");
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error("config file '" + path + "': " + e.what());
    }
}

void validate_config(const PipelineConfig& config) {
    const auto require = [](bool ok, const std::string& what) {
        if (!ok) throw Error("invalid config: " + what);
    };
    require(config.threshold >= -1.0 && config.threshold <= 1.0,
            "threshold must lie in [-1, 1]");
    require(config.damping > 0.0 && config.damping < 1.0, "damping must lie in (0, 1)");
    require(config.tolerance > 0.0, "tolerance must be positive");
    require(config.max_iterations >= 1, "max_iterations must be at least 1");
    require(config.summary_k >= 1, "summary_k must be at least 1");
    require(config.distill_k >= 1, "distill_k must be at least 1");
    require(config.window_days >= 1, "window_days must be at least 1");
    require(config.summary_method == "textrank" || config.summary_method == "lead",
            "summary_method must be textrank or lead");
    require(config.cluster_method == "louvain" || config.cluster_method == "leiden",
            "cluster_method must be louvain or leiden");
    require(config.resolution > 0.0, "resolution must be positive");
    require(config.alpha > 0.0 && config.alpha < 1.0, "alpha must lie in (0, 1)");
    require(config.min_cluster_size >= 1, "min_cluster_size must be at least 1");
    require(config.jobs >= 1, "jobs must be at least 1");
    require(config.embedder.dimension >= 8, "embedder.dimension must be at least 8");
    require(config.embedder.timeout_ms >= 1, "embedder.timeout_ms must be at least 1");
    require(config.embedder.max_retries >= 0, "embedder.max_retries must not be negative");
    if (config.embedder.kind == EmbedderKind::remote) {
        require(!config.embedder.endpoint.empty(),
                "remote embedder needs an endpoint");
    }
    for (const std::string& keyword : config.keywords) {
        require(!keyword.empty(), "keywords must not be empty strings");
    }
}

void run_pipeline(const PipelineConfig& config, const std::string& command, std::ostream& log) {
    const bool is_summarize = command == "summarize";
    const bool is_evaluate = command == "evaluate";
    const bool is_cluster = command == "cluster";
    const bool is_report = command == "report";
    const bool is_all = command == "all";
    if (!is_summarize && !is_evaluate && !is_cluster && !is_report && !is_all) {
        throw Error("unknown command '" + command + "'");
    }
    validate_config(config);
    if (config.corpus_path.empty()) throw Error("corpus path is required");
    if (config.out_dir.empty()) throw Error("output directory is required");

    const ArticleSet corpus = load_working_corpus(config, log);
    log << "corpus: " << corpus.size() << " article(s)\n";

    fs::create_directories(config.out_dir);
    write_text_file(fs::path(config.out_dir) / "run_config.json",
                    run_config_json(config, command));

    auto sentence_embedder = fitted_sentence_embedder(corpus, config);
    const std::vector<Summary> summaries =
        summarize_all(corpus, config.summary_method, *sentence_embedder, config);
    log << "summarized " << summaries.size() << " article(s) (" << config.summary_method
        << ", k=" << config.summary_k << ")\n";

    if (is_summarize || is_evaluate || is_all) {
        std::ostringstream lines;
        for (const Summary& s : summaries) lines << summary_to_json(s).dump() << '\n';
        write_text_file(fs::path(config.out_dir) / "summaries.jsonl", lines.str());
    }

    if (is_evaluate || is_all) {
        std::size_t num_refs = 0;
        for (const Article& a : corpus.articles) num_refs += a.reference_summary.has_value();
        if (num_refs >= 2) {
            write_evaluation(config, corpus, summaries, *sentence_embedder, log);
        } else if (is_evaluate) {
            throw DataError("evaluation needs at least two articles with reference summaries, "
                            "found " +
                            std::to_string(num_refs));
        } else {
            log << "skipping evaluation: only " << num_refs
                << " article(s) carry a reference summary\n";
        }
    }

    if (is_cluster || is_report || is_all) {
        write_clustering(config, corpus, summaries, is_cluster || is_all, is_report || is_all,
                         log);
    }
    log << "done\n";
}

void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn) {
    if (jobs < 1) throw Error("jobs must be at least 1");
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(jobs), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (std::size_t t = 0; t < workers; ++t) {
        threads.emplace_back([&] {
            while (!failed.load(std::memory_order_relaxed)) {
                const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
                if (i >= count) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    failed.store(true, std::memory_order_relaxed);
                    return;
                }
            }
        });
    }
    for (std::thread& t : threads) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace newsgraph
