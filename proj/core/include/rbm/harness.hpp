#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rbm/functionals.hpp"
#include "rbm/kernels.hpp"
#include "rbm/mark_law.hpp"

namespace rbm {

struct BenchmarkSpec {
    enum class Kind { MomentEngine, EulerMc };
    Kind kind = Kind::MomentEngine;
    int euler_grid = 1000;
    std::uint64_t euler_samples = 100000;
};

struct ExperimentConfig {
    double hurst = 0.15;
    KernelVariant kernel_variant = KernelVariant::Optimized;
    double beta = 0.0;   // 0 selects the rate-optimal 2/(3-6H)
    double alpha = 1.0;  // GeneralShift only
    MarkLaw marks = MarkLaw::gaussian(1.0, 0.05, -1.0);
    double horizon = 1.0;
    double pre_horizon = 0.0;
    std::vector<std::uint64_t> ns = {16, 32, 64, 128, 256};
    std::uint64_t samples_per_n = 200000;
    BenchmarkSpec benchmark;
    std::uint64_t master_seed = 1;
    int threads = 1;
    // A fitted slope inside [fit_lo, fit_hi] counts as consistent with the
    // theoretical rate; outside it the experiment is contradicting.
    double fit_lo = -1.0;
    double fit_hi = -0.35;

    KernelSpec kernel_for(std::uint64_t n) const;
    // 1/3 + 4H/(3-6H) below H = 1/4, 1 above; the H = 1/4 boundary carries a
    // log factor on top of n^-1.
    double theoretical_exponent() const;
    bool log_corrected() const { return hurst == 0.25; }
};

struct WeakErrorPoint {
    std::uint64_t n = 0;
    double estimate = 0.0;      // mean of H4 over the replications
    double se = 0.0;            // Monte Carlo standard error of the mean
    double weak_error = 0.0;    // |estimate - benchmark|
    double combined_se = 0.0;   // MC and benchmark uncertainty combined
    bool noise_dominant = false;  // weak_error > 3 combined_se
    double band_center = 0.0;   // fitted C * n^-rate
    bool inside_band[3] = {false, false, false};  // 1,2,3 sigma
};

struct ExperimentReport {
    std::vector<WeakErrorPoint> points;
    double benchmark_value = 0.0;
    double benchmark_se = 0.0;
    std::string benchmark_kind;
    double theoretical_exponent = 0.0;
    bool log_corrected = false;
    double band_prefactor = 0.0;  // C in C n^-rate, weighted least squares
    bool fit_available = false;
    RateFit fit;
    std::string fit_status;  // consistent | inconclusive | contradicting
};

// Monte Carlo H4 samples of the terminal prelimit price at one n; the
// deterministic building block of the weak-error experiment (stream per
// replication, reduction by pairwise summation).
std::vector<double> prelimit_h4_samples(const ExperimentConfig& cfg, std::uint64_t n,
                                        std::uint64_t count, int n_index);

ExperimentReport run_weak_error(const ExperimentConfig& cfg);

struct BandFlag {
    std::uint64_t n = 0;
    double center = 0.0;
    double half_width = 0.0;  // per sigma unit
    std::vector<bool> inside;  // one flag per requested sigma level
};

std::vector<BandFlag> confidence_bands(const ExperimentReport& report,
                                       std::span<const int> sigma_levels);

} // namespace rbm
