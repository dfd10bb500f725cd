#include "rbm/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rbm {

double pairwise_sum(std::span<const double> values) {
    if (values.size() <= 8) {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

SampleSummary summarize(std::span<const double> sample) {
    SampleSummary s;
    s.count = sample.size();
    if (s.count == 0) return s;
    const double m = static_cast<double>(s.count);
    s.mean = pairwise_sum(sample) / m;

    std::vector<double> d2(sample.size()), d4(sample.size());
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double d = sample[i] - s.mean;
        d2[i] = d * d;
        d4[i] = d2[i] * d2[i];
    }
    const double m2 = pairwise_sum(d2) / m;
    s.fourth_central = pairwise_sum(d4) / m;
    s.variance = s.count > 1 ? m2 * m / (m - 1.0) : 0.0;
    s.se_mean = std::sqrt(s.variance / m);
    // Var(s^2) ~ (m4 - sigma^4)/m for large samples
    const double var_of_var = std::max(s.fourth_central - m2 * m2, 0.0) / m;
    s.se_variance = std::sqrt(var_of_var);
    return s;
}

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

namespace {

// Kolmogorov distribution tail Q(lambda) = 2 sum (-1)^{k-1} exp(-2 k^2 lambda^2)
double kolmogorov_q(double lambda) {
    if (lambda < 1e-3) return 1.0;
    double sum = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += sign * term;
        if (term < 1e-12) break;
        sign = -sign;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

} // namespace

KsResult ks_test_normal(std::span<const double> sample, double mean, double sd) {
    if (sample.empty()) throw std::invalid_argument("KS test needs samples");
    std::vector<double> sorted(sample.begin(), sample.end());
    std::sort(sorted.begin(), sorted.end());
    const double m = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double cdf = normal_cdf((sorted[i] - mean) / sd);
        const double lo = static_cast<double>(i) / m;
        const double hi = static_cast<double>(i + 1) / m;
        d = std::max({d, std::abs(cdf - lo), std::abs(hi - cdf)});
    }
    KsResult res;
    res.statistic = d;
    const double sqrt_m = std::sqrt(m);
    res.p_value = kolmogorov_q((sqrt_m + 0.12 + 0.11 / sqrt_m) * d);
    return res;
}

double gamma_p(double a, double x) {
    if (!(a > 0.0) || x < 0.0) throw std::domain_error("gamma_p domain");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) {
        // series expansion
        double term = 1.0 / a;
        double sum = term;
        double ap = a;
        for (int i = 0; i < 500; ++i) {
            ap += 1.0;
            term *= x / ap;
            sum += term;
            if (std::abs(term) < std::abs(sum) * 1e-15) break;
        }
        return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    // continued fraction for Q(a,x)
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-15) break;
    }
    const double q = std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
    return 1.0 - q;
}

double chi_square_cdf(double x, double dof) {
    return gamma_p(0.5 * dof, 0.5 * x);
}

double block_variance_pvalue(std::span<const double> sample, int blocks) {
    if (blocks < 2) throw std::invalid_argument("need at least 2 blocks");
    const std::size_t block_len = sample.size() / blocks;
    if (block_len < 2) throw std::invalid_argument("blocks too small");

    const std::size_t used = block_len * blocks;
    const SampleSummary overall = summarize(sample.first(used));
    std::vector<double> means(blocks);
    for (int b = 0; b < blocks; ++b) {
        means[b] = pairwise_sum(sample.subspan(b * block_len, block_len)) /
                   static_cast<double>(block_len);
    }
    const double grand = pairwise_sum(means) / blocks;
    double ss = 0.0;
    for (double mb : means) ss += (mb - grand) * (mb - grand);
    // Under independence: ss * L / sigma^2 ~ chi^2_{blocks-1}
    const double stat = ss * static_cast<double>(block_len) / overall.variance;
    const double cdf = chi_square_cdf(stat, blocks - 1);
    return 2.0 * std::min(cdf, 1.0 - cdf);
}

} // namespace rbm
