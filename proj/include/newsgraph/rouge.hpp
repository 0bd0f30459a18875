#ifndef NEWSGRAPH_ROUGE_HPP_
#define NEWSGRAPH_ROUGE_HPP_

#include <string>
#include <utility>
#include <vector>

#include "newsgraph/segment.hpp"

namespace newsgraph {

struct RougeScore {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

/// N-gram overlap with clipped counts: each reference n-gram credits the
/// candidate at most as many times as it occurs in the reference.
/// Empty candidate or reference scores zero.
RougeScore rouge_n(const TokenSequence& candidate, const TokenSequence& reference, int n);

/// Longest common subsequence variant; F is the beta-weighted harmonic
/// mean (beta = 1 gives plain F1).
RougeScore rouge_l(const TokenSequence& candidate, const TokenSequence& reference,
                   double beta = 1.0);

struct RougePair {
    RougeScore rouge1;
    RougeScore rouge2;
    RougeScore rougeL;
};

RougePair score_pair(const std::string& candidate, const std::string& reference);

/// Per-pair scores plus corpus means of the F measures.
struct RougeDistribution {
    std::vector<RougePair> per_pair;
    double mean_rouge1 = 0.0;
    double mean_rouge2 = 0.0;
    double mean_rougeL = 0.0;
};

/// pairs are (candidate text, reference text); must be non-empty.
RougeDistribution evaluate_corpus(const std::vector<std::pair<std::string, std::string>>& pairs);

/// JSON report with raw means and a scaled-by-100 block rounded to two
/// decimals for table display.
std::string rouge_report_json(const RougeDistribution& dist);

}  // namespace newsgraph

#endif  // NEWSGRAPH_ROUGE_HPP_
