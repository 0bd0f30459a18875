#ifndef NEWSGRAPH_TEXTRANK_HPP_
#define NEWSGRAPH_TEXTRANK_HPP_

#include <string>
#include <vector>

#include "newsgraph/corpus.hpp"
#include "newsgraph/embedder.hpp"
#include "newsgraph/segment.hpp"
#include "newsgraph/simgraph.hpp"

namespace newsgraph {

struct PageRankParams {
    double damping = 0.85;
    double tolerance = 1e-6;
    int max_iterations = 100;
};

struct PageRankResult {
    std::vector<double> scores;
    int iterations = 0;
    bool converged = false;
};

/// Weighted PageRank on an undirected graph, every edge usable in both
/// directions:
///   V(i) = (1 - d) + d * sum_{j ~ i} w(j,i) / deg_w(j) * V(j)
/// All scores start at 1.0 and are updated in lockstep until the largest
/// per-node change drops below the tolerance. An isolated node scores
/// exactly 1 - d. Scores are not normalized to sum to 1.
PageRankResult pagerank(const SimilarityGraph& graph, const PageRankParams& params = {});

enum class SummaryMethod { textrank, lead };

struct Summary {
    std::string article_id;
    std::vector<Sentence> sentences;  // original article order
    std::vector<double> scores;       // per sentence; empty for lead
    SummaryMethod method = SummaryMethod::textrank;

    /// Sentences joined with single spaces.
    std::string text() const;
};

/// Top-k sentences by PageRank score over the sentence similarity graph,
/// emitted in article order. Score ties break toward the earlier sentence.
/// Falls back to lead when the graph has no edges (the scores would be
/// uniform) or the article has no sentences.
Summary summarize_textrank(const Article& article, Embedder& embedder, int k, double threshold,
                           const PageRankParams& params = {});

/// First min(k, n) sentences.
Summary summarize_lead(const Article& article, int k);

}  // namespace newsgraph

#endif  // NEWSGRAPH_TEXTRANK_HPP_
