#include "rbm/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "rbm/errors.hpp"
#include "rbm/microsim.hpp"
#include "rbm/moments.hpp"
#include "rbm/refsim.hpp"
#include "rbm/stats.hpp"

namespace rbm {

namespace {

// Stream addressing: tag in the top byte keeps the experiment's replication
// streams, the benchmark streams and any auxiliary draws disjoint.
constexpr std::uint64_t kTagPrelimit = 1;
constexpr std::uint64_t kTagBenchmark = 2;

std::uint64_t stream_id(std::uint64_t tag, std::uint64_t group, std::uint64_t index) {
    return (tag << 56) | (group << 40) | index;
}

void validate(const ExperimentConfig& cfg) {
    if (cfg.ns.empty()) throw ConfigError("experiment needs at least one n");
    for (std::size_t i = 0; i + 1 < cfg.ns.size(); ++i) {
        if (cfg.ns[i] >= cfg.ns[i + 1]) {
            throw ConfigError("experiment n list must be strictly increasing");
        }
    }
    if (cfg.samples_per_n < 1000) throw ConfigError("experiment needs at least 1e3 samples per n");
    if (!(cfg.horizon > 0.0)) throw ConfigError("experiment horizon must be positive");
}

} // namespace

KernelSpec ExperimentConfig::kernel_for(std::uint64_t n) const {
    switch (kernel_variant) {
        case KernelVariant::Benchmark:
            return KernelSpec::benchmark(hurst, n);
        case KernelVariant::Optimized:
            return KernelSpec::optimized(hurst, beta > 0.0 ? beta : KernelSpec::optimal_beta(hurst),
                                         n);
        case KernelVariant::GeneralShift:
            return KernelSpec::general_shift(hurst, alpha, n);
        case KernelVariant::Limit:
            throw ConfigError("the prelimit experiment needs a finite-n kernel variant");
    }
    throw ConfigError("unknown kernel variant");
}

double ExperimentConfig::theoretical_exponent() const {
    if (hurst < 0.25) return 1.0 / 3.0 + 4.0 * hurst / (3.0 - 6.0 * hurst);
    return 1.0;
}

std::vector<double> prelimit_h4_samples(const ExperimentConfig& cfg, std::uint64_t n,
                                        std::uint64_t count, int n_index) {
    const KernelSpec kernel = cfg.kernel_for(n);
    std::vector<double> values(count);
    const int workers = std::max(1, cfg.threads);
    std::atomic<std::uint64_t> next{0};
    constexpr std::uint64_t kChunk = 256;
    const auto body = [&]() {
        for (std::uint64_t chunk = next.fetch_add(kChunk); chunk < count;
             chunk = next.fetch_add(kChunk)) {
            const std::uint64_t end = std::min(chunk + kChunk, count);
            for (std::uint64_t rep = chunk; rep < end; ++rep) {
                RngStream stream(cfg.master_seed,
                                 stream_id(kTagPrelimit, static_cast<std::uint64_t>(n_index), rep));
                const EventStream ev =
                    simulate_events(n, cfg.horizon, cfg.pre_horizon, cfg.marks, stream);
                values[rep] = hermite4(price_at_horizon(ev, kernel));
            }
        }
    };
    if (workers == 1) {
        body();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(body);
        for (auto& th : pool) th.join();
    }
    return values;
}

ExperimentReport run_weak_error(const ExperimentConfig& cfg) {
    validate(cfg);
    ExperimentReport report;
    report.theoretical_exponent = cfg.theoretical_exponent();
    report.log_corrected = cfg.log_corrected();

    // Benchmark for E[H4(P*_T)]
    if (cfg.benchmark.kind == BenchmarkSpec::Kind::MomentEngine) {
        report.benchmark_kind = "moment-engine";
        LimitMomentModel model;
        model.hurst = cfg.hurst;
        model.sigma_p = cfg.marks.sigma_p();
        model.sigma_v = cfg.marks.sigma_v();
        model.rho = cfg.marks.rho();
        model.horizon = cfg.horizon;
        model.pre_zero = cfg.pre_horizon > 0.0;
        const MomentResult bench = hermite4_expectation(model);
        report.benchmark_value = bench.value;
        report.benchmark_se = bench.quadrature_error;
    } else {
        report.benchmark_kind = "euler-mc";
        GaussianModelSpec spec;
        spec.hurst = cfg.hurst;
        spec.sigma_p = cfg.marks.sigma_p();
        spec.sigma_v = cfg.marks.sigma_v();
        spec.rho = cfg.marks.rho();
        spec.variant = cfg.pre_horizon > 0.0 ? GaussianVariant::TwoSided
                                             : GaussianVariant::RiemannLiouville;
        spec.kernel = KernelSpec::limit(cfg.hurst);
        spec.grid_size = cfg.benchmark.euler_grid;
        spec.horizon = cfg.horizon;
        const JointPathSampler sampler(spec);
        const std::uint64_t M = cfg.benchmark.euler_samples;
        std::vector<double> h4(M);
        const int K = spec.grid_size;
        constexpr int kBlock = 256;
        for (std::uint64_t begin = 0; begin < M; begin += kBlock) {
            const int count = static_cast<int>(std::min<std::uint64_t>(kBlock, M - begin));
            const Eigen::MatrixXd x =
                sampler.sample_block(cfg.master_seed, stream_id(kTagBenchmark, 0, 0), begin, count);
            for (int c = 0; c < count; ++c) {
                const double price =
                    euler_price(std::span<const double>(x.col(c).data(), K),
                                std::span<const double>(x.col(c).data() + K, K), spec.sigma_p);
                h4[begin + c] = hermite4(price);
            }
        }
        const SampleSummary summary = summarize(h4);
        report.benchmark_value = summary.mean;
        report.benchmark_se = summary.se_mean;
    }

    // Per-n Monte Carlo estimates
    for (std::size_t i = 0; i < cfg.ns.size(); ++i) {
        const std::vector<double> h4 =
            prelimit_h4_samples(cfg, cfg.ns[i], cfg.samples_per_n, static_cast<int>(i));
        const SampleSummary summary = summarize(h4);
        WeakErrorPoint point;
        point.n = cfg.ns[i];
        point.estimate = summary.mean;
        point.se = summary.se_mean;
        point.weak_error = std::abs(summary.mean - report.benchmark_value);
        point.combined_se = std::sqrt(summary.se_mean * summary.se_mean +
                                      report.benchmark_se * report.benchmark_se);
        point.noise_dominant = point.weak_error > 3.0 * point.combined_se;
        report.points.push_back(point);
    }

    // Band prefactor: weighted least squares of weak_error on n^-rate in
    // linear space (robust when points sit at the noise floor).
    {
        double num = 0.0, den = 0.0;
        for (const auto& p : report.points) {
            const double f = std::pow(static_cast<double>(p.n), -report.theoretical_exponent);
            const double w = 1.0 / (p.combined_se * p.combined_se);
            num += w * p.weak_error * f;
            den += w * f * f;
        }
        report.band_prefactor = den > 0.0 ? num / den : 0.0;
    }
    for (auto& p : report.points) {
        p.band_center = report.band_prefactor *
                        std::pow(static_cast<double>(p.n), -report.theoretical_exponent);
        for (int k = 1; k <= 3; ++k) {
            p.inside_band[k - 1] = std::abs(p.weak_error - p.band_center) <= k * p.combined_se;
        }
    }

    // Rate fit over the noise-dominant points only
    std::vector<double> xs, ys;
    for (const auto& p : report.points) {
        if (p.noise_dominant) {
            xs.push_back(static_cast<double>(p.n));
            ys.push_back(p.weak_error);
        }
    }
    if (xs.size() >= 3) {
        report.fit = fit_rate(xs, ys);
        report.fit_available = true;
        report.fit_status = (report.fit.slope >= cfg.fit_lo && report.fit.slope <= cfg.fit_hi)
                                ? "consistent"
                                : "contradicting";
    } else {
        report.fit_available = false;
        report.fit_status = "inconclusive";
    }
    return report;
}

std::vector<BandFlag> confidence_bands(const ExperimentReport& report,
                                       std::span<const int> sigma_levels) {
    std::vector<BandFlag> flags;
    for (const auto& p : report.points) {
        BandFlag flag;
        flag.n = p.n;
        flag.center = p.band_center;
        flag.half_width = p.combined_se;
        for (int k : sigma_levels) {
            flag.inside.push_back(std::abs(p.weak_error - p.band_center) <=
                                  static_cast<double>(k) * p.combined_se);
        }
        flags.push_back(flag);
    }
    return flags;
}

} // namespace rbm
