#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rbm/kernels.hpp"
#include "rbm/mark_law.hpp"
#include "rbm/rng.hpp"

namespace rbm {

// Poisson order arrivals at rate n on (0, T], optionally extended to a
// truncated pre-zero window [-S, 0), with i.i.d. mark pairs attached.
struct EventStream {
    std::vector<double> arrivals;                       // strictly increasing in (0, T]
    std::vector<std::pair<double, double>> marks;       // (u, v) aligned with arrivals
    std::vector<double> pre_arrivals;                   // strictly decreasing in [-S, 0)
    std::vector<std::pair<double, double>> pre_marks;
    double rate = 1.0;       // the scale index n
    double horizon = 0.0;    // T
    double pre_horizon = 0.0;  // S

    std::size_t size() const { return arrivals.size(); }
};

EventStream simulate_events(std::uint64_t n, double T, double S, const MarkLaw& law,
                            RngStream& stream);

// Rescaled log-volatility at the given times (right limits at arrival
// times, cadlag convention):
//   V_t = sum_{0 < tau_k <= t} phi_n(t - tau_k) v_k / sqrt(n)
//       + sum_{tau_k <= 0} (phi_n(t - tau_k) - phi_n(-tau_k)) v_k / sqrt(n)
std::vector<double> eval_logvol(const EventStream& ev, const KernelSpec& kernel,
                                std::span<const double> times);

struct PathGrid {
    std::vector<double> times;
    std::vector<double> log_vol;               // right limits on the grid
    std::vector<double> log_price;             // piecewise constant between arrivals
    std::vector<double> left_limits_at_jumps;  // V_{tau_k-} for each arrival
};

// Event-indexed price evaluation: the k-th order moves the rescaled
// log-price by exp(V_{tau_k-}) u_k / sqrt(n), with the left limit summing
// all strictly earlier events (its own jump excluded, pre-zero included).
PathGrid simulate_price_path(const EventStream& ev, const KernelSpec& kernel,
                             std::span<const double> grid);

// Terminal log-price only; the harness's hot path.
double price_at_horizon(const EventStream& ev, const KernelSpec& kernel);

// Exact expectation E[exp(sum_j c_j V_{t_j})] for the prelimit model with
// Gaussian marks, via the Poisson exponential formula
//   exp( int_0^{t_1} n (e^{sigma_v^2 A(s)^2 / 2n} - 1) ds
//      + int_{-S}^0 n (e^{sigma_v^2 B(s)^2 / 2n} - 1) ds ),
// A(s) = sum_j c_j phi_n(t_j - s),  B(s) = sum_j c_j (phi_n(t_j - s) - phi_n(-s)).
// Times must be sorted in decreasing order.
double prelimit_exp_functional(const KernelSpec& kernel, std::span<const double> coeffs,
                               std::span<const double> times, const MarkLaw& law,
                               double pre_horizon);

} // namespace rbm
