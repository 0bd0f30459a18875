#ifndef NEWSGRAPH_STATS_HPP_
#define NEWSGRAPH_STATS_HPP_

#include <string>
#include <vector>

namespace newsgraph {

struct MeanDiffResult {
    double mean_a = 0.0;
    double mean_b = 0.0;
    double diff = 0.0;  // mean_a - mean_b
    double ci_low = 0.0;
    double ci_high = 0.0;
    double alpha = 0.05;
    bool significant = false;  // 0 outside [ci_low, ci_high]
};

/// Two-sided normal-approximation confidence interval for the difference
/// of means of two unpaired samples:
///   (mean_a - mean_b) +- z_{1-alpha/2} * sqrt(s_a^2/n_a + s_b^2/n_b)
/// with unbiased sample variances. Both samples need at least two values.
/// Identical constant samples give the degenerate interval [0, 0] and
/// significant = false.
MeanDiffResult mean_diff_ci(const std::vector<double>& a, const std::vector<double>& b,
                            double alpha = 0.05);

/// Inverse of the standard normal CDF (Acklam's rational approximation,
/// relative error below 1.2e-9). p must lie in (0, 1).
double inverse_normal_cdf(double p);

double sample_mean(const std::vector<double>& values);
/// Unbiased (n-1 denominator); needs at least two values.
double sample_variance(const std::vector<double>& values);

std::string mean_diff_json(const MeanDiffResult& r, const std::string& metric_name);

}  // namespace newsgraph

#endif  // NEWSGRAPH_STATS_HPP_
