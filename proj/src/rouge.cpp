#include "newsgraph/rouge.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

#include "newsgraph/error.hpp"

namespace newsgraph {
namespace {

double f_measure(double precision, double recall, double beta) {
    const double b2 = beta * beta;
    const double denom = recall + b2 * precision;
    if (denom <= 0.0) return 0.0;
    return (1.0 + b2) * precision * recall / denom;
}

std::size_t lcs_length(const TokenSequence& a, const TokenSequence& b) {
    // Two-row DP over the standard LCS recurrence.
    std::vector<std::size_t> prev(b.size() + 1, 0), curr(b.size() + 1, 0);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j) {
            if (a[i - 1] == b[j - 1]) {
                curr[j] = prev[j - 1] + 1;
            } else {
                curr[j] = std::max(prev[j], curr[j - 1]);
            }
        }
        prev.swap(curr);
    }
    return prev[b.size()];
}

}  // namespace

RougeScore rouge_n(const TokenSequence& candidate, const TokenSequence& reference, int n) {
    if (n < 1) throw Error("rouge_n: n must be at least 1, got " + std::to_string(n));
    const auto cand_counts = ngram_counts(candidate, n);
    const auto ref_counts = ngram_counts(reference, n);
    const std::size_t cand_total = ngram_total(candidate, n);
    const std::size_t ref_total = ngram_total(reference, n);
    if (cand_total == 0 || ref_total == 0) return {};

    std::size_t overlap = 0;
    for (const auto& [gram, ref_count] : ref_counts) {
        const auto it = cand_counts.find(gram);
        if (it == cand_counts.end()) continue;
        overlap += static_cast<std::size_t>(std::min(it->second, ref_count));
    }
    RougeScore score;
    score.precision = static_cast<double>(overlap) / static_cast<double>(cand_total);
    score.recall = static_cast<double>(overlap) / static_cast<double>(ref_total);
    score.f1 = f_measure(score.precision, score.recall, 1.0);
    return score;
}

RougeScore rouge_l(const TokenSequence& candidate, const TokenSequence& reference, double beta) {
    if (beta <= 0.0) throw Error("rouge_l: beta must be positive");
    if (candidate.empty() || reference.empty()) return {};
    const std::size_t lcs = lcs_length(candidate, reference);
    RougeScore score;
    score.precision = static_cast<double>(lcs) / static_cast<double>(candidate.size());
    score.recall = static_cast<double>(lcs) / static_cast<double>(reference.size());
    score.f1 = f_measure(score.precision, score.recall, beta);
    return score;
}

RougePair score_pair(const std::string& candidate, const std::string& reference) {
    const auto cand = tokenize(candidate);
    const auto ref = tokenize(reference);
    RougePair pair;
    pair.rouge1 = rouge_n(cand, ref, 1);
    pair.rouge2 = rouge_n(cand, ref, 2);
    pair.rougeL = rouge_l(cand, ref);
    return pair;
}

RougeDistribution evaluate_corpus(
    const std::vector<std::pair<std::string, std::string>>& pairs) {
    if (pairs.empty()) throw Error("rouge evaluation: no candidate/reference pairs");
    RougeDistribution dist;
    dist.per_pair.reserve(pairs.size());
    for (const auto& [candidate, reference] : pairs) {
        dist.per_pair.push_back(score_pair(candidate, reference));
    }
    for (const auto& p : dist.per_pair) {
        dist.mean_rouge1 += p.rouge1.f1;
        dist.mean_rouge2 += p.rouge2.f1;
        dist.mean_rougeL += p.rougeL.f1;
    }
    const double n = static_cast<double>(dist.per_pair.size());
    dist.mean_rouge1 /= n;
    dist.mean_rouge2 /= n;
    dist.mean_rougeL /= n;
    return dist;
}

std::string rouge_report_json(const RougeDistribution& dist) {
    const auto scaled = [](double x) { return std::round(x * 100.0 * 100.0) / 100.0; };
    nlohmann::json j;
    j["pairs"] = dist.per_pair.size();
    j["mean"] = {{"rouge1", dist.mean_rouge1},
                 {"rouge2", dist.mean_rouge2},
                 {"rougeL", dist.mean_rougeL}};
    j["table"] = {{"rouge1", scaled(dist.mean_rouge1)},
                  {"rouge2", scaled(dist.mean_rouge2)},
                  {"rougeL", scaled(dist.mean_rougeL)}};
    return j.dump(2);
}

}  // namespace newsgraph
