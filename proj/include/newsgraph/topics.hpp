#ifndef NEWSGRAPH_TOPICS_HPP_
#define NEWSGRAPH_TOPICS_HPP_

#include <map>
#include <string>
#include <vector>

#include "newsgraph/community.hpp"
#include "newsgraph/embedder.hpp"
#include "newsgraph/simgraph.hpp"
#include "newsgraph/textrank.hpp"

namespace newsgraph {

struct TopicCluster {
    int id = 0;
    std::vector<std::string> member_ids;  // graph node order
    std::string distilled;
    std::string label = "uncategorized";
};

/// Distills one topic from its member summaries: pools their sentences,
/// drops exact duplicate texts (first occurrence wins), ranks the pool
/// with PageRank over its similarity graph and joins the top k sentences
/// in rank order. A pool with no edges falls back to its first k
/// sentences.
std::string distill_topic(const std::vector<Summary>& summaries, Embedder& embedder, int k,
                          double threshold, const PageRankParams& params = {});

/// One cluster per community, members in node order, distilled from the
/// member summaries. summaries[i] must correspond to graph node i.
/// Clusters with fewer than min_size members are dropped.
std::vector<TopicCluster> build_topic_clusters(const SimilarityGraph& graph,
                                               const Partition& partition,
                                               const std::vector<Summary>& summaries,
                                               Embedder& embedder, int distill_k,
                                               double threshold,
                                               const PageRankParams& params = {},
                                               int min_size = 1);

/// Pairwise cosine similarities of the distilled texts.
std::vector<std::vector<double>> topic_similarity_matrix(
    const std::vector<TopicCluster>& clusters, Embedder& embedder);

/// Labels keyed by decimal topic id. Unmatched clusters keep the
/// "uncategorized" default; returns one warning per label key that names
/// no cluster.
std::vector<std::string> apply_category_labels(std::vector<TopicCluster>& clusters,
                                               const std::map<std::string, std::string>& labels);

std::map<std::string, std::string> load_labels(const std::string& path);

std::string topics_to_json_string(const std::vector<TopicCluster>& clusters);
std::string topic_matrix_json_string(const std::vector<TopicCluster>& clusters,
                                     const std::vector<std::vector<double>>& matrix);

/// Client for a remote abstractive service speaking
/// POST {endpoint}/v1/summarize {"text": ..., "max_sentences": k} ->
/// {"summary": ...}, with the same retry policy as the remote embedder.
class RemoteSummarizer {
public:
    explicit RemoteSummarizer(std::string endpoint, int timeout_ms = 5000, int max_retries = 2);

    std::string summarize(const std::string& text, int max_sentences) const;

private:
    std::string endpoint_;
    int timeout_ms_;
    int max_retries_;
};

}  // namespace newsgraph

#endif  // NEWSGRAPH_TOPICS_HPP_
