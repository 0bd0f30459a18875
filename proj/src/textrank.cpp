#include "newsgraph/textrank.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "newsgraph/error.hpp"

namespace newsgraph {

PageRankResult pagerank(const SimilarityGraph& graph, const PageRankParams& params) {
    if (graph.num_nodes() == 0) throw Error("pagerank: empty graph");
    if (params.damping <= 0.0 || params.damping >= 1.0) {
        throw Error("pagerank: damping must lie in (0, 1), got " + std::to_string(params.damping));
    }
    if (params.tolerance <= 0.0) throw Error("pagerank: tolerance must be positive");
    if (params.max_iterations < 1) throw Error("pagerank: max_iterations must be at least 1");

    const std::size_t n = graph.num_nodes();
    std::vector<double> out_weight(n, 0.0);
    for (std::size_t v = 0; v < n; ++v) out_weight[v] = weighted_degree(graph, v);

    PageRankResult result;
    result.scores.assign(n, 1.0);
    std::vector<double> next(n, 0.0);
    const double d = params.damping;
    for (int iter = 1; iter <= params.max_iterations; ++iter) {
        double max_change = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double incoming = 0.0;
            for (const auto& [j, w] : graph.adjacency[i]) {
                incoming += w / out_weight[j] * result.scores[j];
            }
            next[i] = (1.0 - d) + d * incoming;
            max_change = std::max(max_change, std::abs(next[i] - result.scores[i]));
        }
        result.scores.swap(next);
        result.iterations = iter;
        if (max_change < params.tolerance) {
            result.converged = true;
            break;
        }
    }
    return result;
}

std::string Summary::text() const {
    std::string out;
    for (const auto& s : sentences) {
        if (!out.empty()) out += ' ';
        out += s.text;
    }
    return out;
}

namespace {

Summary select_lead(const Article& article, const std::vector<Sentence>& sentences, int k) {
    Summary summary;
    summary.article_id = article.id;
    summary.method = SummaryMethod::lead;
    const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(k), sentences.size());
    summary.sentences.assign(sentences.begin(), sentences.begin() + take);
    return summary;
}

}  // namespace

Summary summarize_lead(const Article& article, int k) {
    if (k < 1) throw Error("summary size must be at least 1, got " + std::to_string(k));
    return select_lead(article, split_sentences(article.body, article.id), k);
}

Summary summarize_textrank(const Article& article, Embedder& embedder, int k, double threshold,
                           const PageRankParams& params) {
    if (k < 1) throw Error("summary size must be at least 1, got " + std::to_string(k));
    const auto sentences = split_sentences(article.body, article.id);
    if (sentences.empty()) return select_lead(article, sentences, k);

    std::vector<std::string> texts;
    texts.reserve(sentences.size());
    for (const auto& s : sentences) texts.push_back(s.text);
    const auto vectors = embedder.embed(texts);

    std::vector<std::pair<std::string, EmbeddingVector>> units;
    units.reserve(sentences.size());
    for (std::size_t i = 0; i < sentences.size(); ++i) {
        units.emplace_back(article.id + "#" + std::to_string(i), vectors[i]);
    }
    const auto graph = build_similarity_graph(units, threshold);
    if (graph.num_edges() == 0) return select_lead(article, sentences, k);

    const auto ranked = pagerank(graph, params);
    std::vector<std::size_t> order(sentences.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return ranked.scores[a] > ranked.scores[b];
    });
    order.resize(std::min<std::size_t>(static_cast<std::size_t>(k), order.size()));
    std::sort(order.begin(), order.end());

    Summary summary;
    summary.article_id = article.id;
    summary.method = SummaryMethod::textrank;
    for (std::size_t idx : order) {
        summary.sentences.push_back(sentences[idx]);
        summary.scores.push_back(ranked.scores[idx]);
    }
    return summary;
}

}  // namespace newsgraph
