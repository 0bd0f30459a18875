#ifndef NEWSGRAPH_SIMGRAPH_HPP_
#define NEWSGRAPH_SIMGRAPH_HPP_

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "newsgraph/embedder.hpp"

namespace newsgraph {

/// Undirected weighted graph over text units. Edges carry the cosine
/// similarity of the endpoint embeddings; no self-loops, no parallel
/// edges, each unordered pair stored once with i < j.
struct SimilarityGraph {
    struct Edge {
        std::size_t i = 0;
        std::size_t j = 0;
        double weight = 0.0;
    };

    std::vector<std::string> node_ids;
    std::vector<Edge> edges;
    double threshold = 0.0;
    /// adjacency[v] lists (neighbor, weight) sorted by neighbor index.
    std::vector<std::vector<std::pair<std::size_t, double>>> adjacency;

    std::size_t num_nodes() const { return node_ids.size(); }
    std::size_t num_edges() const { return edges.size(); }
};

/// Connects every pair whose cosine similarity is >= threshold. Unit ids
/// must be unique and embeddings share one dimension; threshold must lie
/// in [-1, 1].
SimilarityGraph build_similarity_graph(
    const std::vector<std::pair<std::string, EmbeddingVector>>& units, double threshold);

/// Sum of incident edge weights (0 for isolated nodes).
double weighted_degree(const SimilarityGraph& graph, std::size_t node);

std::string graph_to_json_string(const SimilarityGraph& graph);
SimilarityGraph graph_from_json_string(const std::string& text);

}  // namespace newsgraph

#endif  // NEWSGRAPH_SIMGRAPH_HPP_
