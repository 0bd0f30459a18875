#include "newsgraph/topics.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <unordered_set>

#include "json.hpp"

#include "newsgraph/error.hpp"
#include "remote.hpp"

namespace newsgraph {

std::string distill_topic(const std::vector<Summary>& summaries, Embedder& embedder, int k,
                          double threshold, const PageRankParams& params) {
    if (k < 1) throw Error("distill size must be at least 1, got " + std::to_string(k));
    std::vector<std::string> pool;
    std::unordered_set<std::string> seen;
    for (const auto& summary : summaries) {
        for (const auto& sentence : summary.sentences) {
            if (seen.insert(sentence.text).second) pool.push_back(sentence.text);
        }
    }
    if (pool.empty()) return "";

    const auto join = [](const std::vector<std::string>& parts) {
        std::string out;
        for (const auto& p : parts) {
            if (!out.empty()) out += ' ';
            out += p;
        }
        return out;
    };

    const auto vectors = embedder.embed(pool);
    std::vector<std::pair<std::string, EmbeddingVector>> units;
    units.reserve(pool.size());
    for (std::size_t i = 0; i < pool.size(); ++i) {
        units.emplace_back("pool#" + std::to_string(i), vectors[i]);
    }
    const auto graph = build_similarity_graph(units, threshold);

    const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(k), pool.size());
    if (graph.num_edges() == 0) {
        return join({pool.begin(), pool.begin() + take});
    }
    const auto ranked = pagerank(graph, params);
    std::vector<std::size_t> order(pool.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return ranked.scores[a] > ranked.scores[b];
    });
    std::vector<std::string> top;
    for (std::size_t i = 0; i < take; ++i) top.push_back(pool[order[i]]);
    return join(top);
}

std::vector<TopicCluster> build_topic_clusters(const SimilarityGraph& graph,
                                               const Partition& partition,
                                               const std::vector<Summary>& summaries,
                                               Embedder& embedder, int distill_k,
                                               double threshold, const PageRankParams& params,
                                               int min_size) {
    if (summaries.size() != graph.num_nodes() ||
        partition.assignment.size() != graph.num_nodes()) {
        throw Error("topic clustering: graph, partition and summaries disagree on size");
    }
    if (min_size < 1) throw Error("min_cluster_size must be at least 1");

    std::vector<TopicCluster> clusters;
    std::vector<std::vector<std::size_t>> members(partition.num_communities);
    for (std::size_t v = 0; v < graph.num_nodes(); ++v) {
        members[partition.assignment[v]].push_back(v);
    }
    for (int c = 0; c < partition.num_communities; ++c) {
        if (static_cast<int>(members[c].size()) < min_size) continue;
        TopicCluster cluster;
        cluster.id = c;
        std::vector<Summary> member_summaries;
        for (const std::size_t v : members[c]) {
            cluster.member_ids.push_back(graph.node_ids[v]);
            member_summaries.push_back(summaries[v]);
        }
        cluster.distilled = distill_topic(member_summaries, embedder, distill_k, threshold, params);
        clusters.push_back(std::move(cluster));
    }
    return clusters;
}

std::vector<std::vector<double>> topic_similarity_matrix(
    const std::vector<TopicCluster>& clusters, Embedder& embedder) {
    std::vector<std::string> texts;
    texts.reserve(clusters.size());
    for (const auto& c : clusters) texts.push_back(c.distilled);
    const auto vectors = embedder.embed(texts);
    std::vector<std::vector<double>> matrix(clusters.size(),
                                            std::vector<double>(clusters.size(), 0.0));
    for (std::size_t i = 0; i < clusters.size(); ++i) {
        for (std::size_t j = 0; j < clusters.size(); ++j) {
            matrix[i][j] = cosine_similarity(vectors[i], vectors[j]);
        }
    }
    return matrix;
}

std::vector<std::string> apply_category_labels(std::vector<TopicCluster>& clusters,
                                               const std::map<std::string, std::string>& labels) {
    std::vector<std::string> warnings;
    for (const auto& [key, label] : labels) {
        bool matched = false;
        for (auto& cluster : clusters) {
            if (std::to_string(cluster.id) == key) {
                cluster.label = label;
                matched = true;
            }
        }
        if (!matched) {
            warnings.push_back("label key '" + key + "' matches no topic; ignored");
        }
    }
    return warnings;
}

std::map<std::string, std::string> load_labels(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open labels file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error("invalid labels file '" + path + "': " + e.what());
    }
    if (!j.is_object()) throw Error("labels file '" + path + "' must hold a JSON object");
    std::map<std::string, std::string> labels;
    for (const auto& [key, value] : j.items()) {
        if (!value.is_string()) {
            throw Error("labels file '" + path + "': value for '" + key + "' is not a string");
        }
        labels[key] = value.get<std::string>();
    }
    return labels;
}

std::string topics_to_json_string(const std::vector<TopicCluster>& clusters) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& c : clusters) {
        out.push_back({{"id", c.id},
                       {"label", c.label},
                       {"members", c.member_ids},
                       {"summary", c.distilled}});
    }
    return nlohmann::json{{"topics", out}}.dump(2);
}

std::string topic_matrix_json_string(const std::vector<TopicCluster>& clusters,
                                     const std::vector<std::vector<double>>& matrix) {
    nlohmann::json ids = nlohmann::json::array();
    for (const auto& c : clusters) ids.push_back(c.id);
    return nlohmann::json{{"topics", ids}, {"matrix", matrix}}.dump(2);
}

RemoteSummarizer::RemoteSummarizer(std::string endpoint, int timeout_ms, int max_retries)
    : endpoint_(std::move(endpoint)), timeout_ms_(timeout_ms), max_retries_(max_retries) {
    if (endpoint_.empty()) throw Error("remote summarizer: empty endpoint");
    if (max_retries_ < 0) throw Error("remote summarizer: negative max_retries");
}

std::string RemoteSummarizer::summarize(const std::string& text, int max_sentences) const {
    const std::string body =
        nlohmann::json{{"text", text}, {"max_sentences", max_sentences}}.dump();
    std::string summary;
    detail::post_json_with_retry(
        endpoint_, "/v1/summarize", body, timeout_ms_, max_retries_,
        [&](const std::string& response) {
            summary = nlohmann::json::parse(response).at("summary").get<std::string>();
        });
    return summary;
}

}  // namespace newsgraph
