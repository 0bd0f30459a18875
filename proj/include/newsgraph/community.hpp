#ifndef NEWSGRAPH_COMMUNITY_HPP_
#define NEWSGRAPH_COMMUNITY_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "newsgraph/simgraph.hpp"

namespace newsgraph {

/// Node-indexed community assignment. Ids are contiguous from 0, ordered
/// by first appearance over the node order.
struct Partition {
    std::vector<int> assignment;
    int num_communities = 0;
    std::uint64_t seed = 0;
};

Partition singleton_partition(std::size_t num_nodes);

/// Weighted Newman modularity with a resolution parameter:
///   Q = 1/(2m) * sum_{i,j} [A_ij - gamma * k_i k_j / (2m)] [c_i == c_j]
/// summed over ordered pairs including i == j, so the null model keeps its
/// diagonal terms. A graph with no edges scores 0 by definition.
double modularity(const SimilarityGraph& graph, const Partition& partition,
                  double resolution = 1.0);

/// Modularity after each local-move phase, measured on the input graph.
/// Non-decreasing by construction.
struct LouvainTrace {
    std::vector<double> phase_modularity;
};

/// Classic two-phase Louvain: greedy local moves to the neighboring
/// community with the largest modularity gain, then community aggregation,
/// repeated until a phase makes no move. The seed only shuffles node visit
/// order; every other step is deterministic (a move needs a strict gain
/// over staying, and equal-gain candidates resolve to the lowest
/// community id).
Partition louvain(const SimilarityGraph& graph, std::uint64_t seed, double resolution = 1.0,
                  LouvainTrace* trace = nullptr);

/// Leiden refinement of Louvain: queue-based local moves, a refinement
/// phase that only merges well-connected singletons inside each community,
/// and aggregation over the refined partition. Guarantees every returned
/// community induces a connected subgraph.
Partition leiden(const SimilarityGraph& graph, std::uint64_t seed, double resolution = 1.0);

struct PartitionMetrics {
    double modularity_q = 0.0;
    double coverage = 0.0;     // intra-community edge fraction, unweighted
    double performance = 0.0;  // correctly classified pairs / all pairs
    int num_communities = 0;
    int largest_community = 0;
    double average_community_size = 0.0;
};

PartitionMetrics partition_metrics(const SimilarityGraph& graph, const Partition& partition,
                                   double resolution = 1.0);

std::string partition_to_json_string(const SimilarityGraph& graph, const Partition& partition,
                                     const std::string& method, double resolution);

}  // namespace newsgraph

#endif  // NEWSGRAPH_COMMUNITY_HPP_
