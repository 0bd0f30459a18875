#include "newsgraph/stats.hpp"

#include <cmath>

#include "json.hpp"

#include "newsgraph/error.hpp"

namespace newsgraph {

double sample_mean(const std::vector<double>& values) {
    if (values.empty()) throw Error("mean of empty sample");
    double sum = 0.0;
    for (const double x : values) sum += x;
    return sum / static_cast<double>(values.size());
}

double sample_variance(const std::vector<double>& values) {
    if (values.size() < 2) throw Error("variance needs at least two values");
    const double mean = sample_mean(values);
    double sq = 0.0;
    for (const double x : values) sq += (x - mean) * (x - mean);
    return sq / static_cast<double>(values.size() - 1);
}

double inverse_normal_cdf(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw Error("inverse_normal_cdf: p must lie in (0, 1), got " + std::to_string(p));
    }
    // Acklam's coefficients.
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > 1.0 - p_low) {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

MeanDiffResult mean_diff_ci(const std::vector<double>& a, const std::vector<double>& b,
                            double alpha) {
    if (a.size() < 2 || b.size() < 2) {
        throw Error("mean_diff_ci: both samples need at least two values");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw Error("mean_diff_ci: alpha must lie in (0, 1), got " + std::to_string(alpha));
    }
    MeanDiffResult r;
    r.alpha = alpha;
    r.mean_a = sample_mean(a);
    r.mean_b = sample_mean(b);
    r.diff = r.mean_a - r.mean_b;
    const double se = std::sqrt(sample_variance(a) / static_cast<double>(a.size()) +
                                sample_variance(b) / static_cast<double>(b.size()));
    const double z = inverse_normal_cdf(1.0 - alpha / 2.0);
    r.ci_low = r.diff - z * se;
    r.ci_high = r.diff + z * se;
    r.significant = r.ci_low > 0.0 || r.ci_high < 0.0;
    return r;
}

std::string mean_diff_json(const MeanDiffResult& r, const std::string& metric_name) {
    nlohmann::json j;
    j["metric"] = metric_name;
    j["mean_a"] = r.mean_a;
    j["mean_b"] = r.mean_b;
    j["diff"] = r.diff;
    j["alpha"] = r.alpha;
    j["ci"] = {r.ci_low, r.ci_high};
    j["significant"] = r.significant;
    return j.dump(2);
}

}  // namespace newsgraph
