#include "newsgraph/simgraph.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "json.hpp"

#include "newsgraph/error.hpp"

namespace newsgraph {
namespace {

void build_adjacency(SimilarityGraph& graph) {
    graph.adjacency.assign(graph.num_nodes(), {});
    for (const auto& e : graph.edges) {
        graph.adjacency[e.i].emplace_back(e.j, e.weight);
        graph.adjacency[e.j].emplace_back(e.i, e.weight);
    }
    for (auto& row : graph.adjacency) {
        std::sort(row.begin(), row.end());
    }
}

}  // namespace

SimilarityGraph build_similarity_graph(
    const std::vector<std::pair<std::string, EmbeddingVector>>& units, double threshold) {
    if (threshold < -1.0 || threshold > 1.0) {
        throw Error("similarity threshold must lie in [-1, 1], got " + std::to_string(threshold));
    }
    SimilarityGraph graph;
    graph.threshold = threshold;
    graph.node_ids.reserve(units.size());
    std::unordered_set<std::string> seen;
    const std::size_t dim = units.empty() ? 0 : units.front().second.dim();
    for (const auto& [id, vec] : units) {
        if (!seen.insert(id).second) throw Error("duplicate unit id '" + id + "'");
        if (vec.dim() != dim) {
            throw Error("embedding dimension mismatch for unit '" + id + "': " +
                        std::to_string(vec.dim()) + " vs " + std::to_string(dim));
        }
        graph.node_ids.push_back(id);
    }
    for (std::size_t i = 0; i < units.size(); ++i) {
        for (std::size_t j = i + 1; j < units.size(); ++j) {
            const double sim = cosine_similarity(units[i].second, units[j].second);
            if (sim >= threshold) {
                graph.edges.push_back({i, j, sim});
            }
        }
    }
    build_adjacency(graph);
    return graph;
}

double weighted_degree(const SimilarityGraph& graph, std::size_t node) {
    if (node >= graph.num_nodes()) {
        throw Error("node index " + std::to_string(node) + " out of range");
    }
    double total = 0.0;
    for (const auto& [neighbor, weight] : graph.adjacency[node]) {
        (void)neighbor;
        total += weight;
    }
    return total;
}

std::string graph_to_json_string(const SimilarityGraph& graph) {
    nlohmann::json j;
    j["threshold"] = graph.threshold;
    j["nodes"] = graph.node_ids;
    auto& edges = j["edges"] = nlohmann::json::array();
    for (const auto& e : graph.edges) {
        edges.push_back({{"source", e.i}, {"target", e.j}, {"weight", e.weight}});
    }
    return j.dump(2);
}

SimilarityGraph graph_from_json_string(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("invalid graph JSON: ") + e.what());
    }
    SimilarityGraph graph;
    try {
        graph.threshold = j.at("threshold").get<double>();
        graph.node_ids = j.at("nodes").get<std::vector<std::string>>();
        for (const auto& e : j.at("edges")) {
            SimilarityGraph::Edge edge;
            edge.i = e.at("source").get<std::size_t>();
            edge.j = e.at("target").get<std::size_t>();
            edge.weight = e.at("weight").get<double>();
            if (edge.i >= graph.node_ids.size() || edge.j >= graph.node_ids.size() ||
                edge.i == edge.j) {
                throw Error("invalid graph JSON: bad edge endpoints");
            }
            if (edge.j < edge.i) std::swap(edge.i, edge.j);
            graph.edges.push_back(edge);
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("invalid graph JSON: ") + e.what());
    }
    build_adjacency(graph);
    return graph;
}

}  // namespace newsgraph
