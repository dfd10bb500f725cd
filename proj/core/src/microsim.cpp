#include "rbm/microsim.hpp"

#include <algorithm>
#include <cmath>

#include "rbm/errors.hpp"
#include "rbm/quadrature.hpp"

namespace rbm {

namespace {

void check_rate(const EventStream& ev, const KernelSpec& kernel) {
    if (kernel.variant == KernelVariant::Limit) {
        throw ConfigError("prelimit evaluation needs a finite-n kernel");
    }
    if (static_cast<double>(kernel.n) != ev.rate) {
        throw ConfigError("kernel scale index does not match the event stream rate");
    }
}

// Contribution of all events strictly before time t (post-zero part) plus
// the truncated pre-zero impact, i.e. the left limit of V at t when t is an
// arrival time.
double logvol_left(const EventStream& ev, const KernelSpec& kernel, double t,
                   std::size_t upto) {
    const double inv_sqrt_n = 1.0 / std::sqrt(ev.rate);
    double sum = 0.0;
    for (std::size_t j = 0; j < upto; ++j) {
        sum += eval_kernel(kernel, t - ev.arrivals[j]) * ev.marks[j].second;
    }
    for (std::size_t j = 0; j < ev.pre_arrivals.size(); ++j) {
        const double tau = ev.pre_arrivals[j];
        sum += (eval_kernel(kernel, t - tau) - eval_kernel(kernel, -tau)) *
               ev.pre_marks[j].second;
    }
    return sum * inv_sqrt_n;
}

} // namespace

EventStream simulate_events(std::uint64_t n, double T, double S, const MarkLaw& law,
                            RngStream& stream) {
    if (!(T >= 0.0) || !(S >= 0.0)) throw ConfigError("horizons must be nonnegative");
    if (n < 1) throw ConfigError("arrival rate index n must be >= 1");
    EventStream ev;
    ev.rate = static_cast<double>(n);
    ev.horizon = T;
    ev.pre_horizon = S;
    const double rate = ev.rate;

    double t = stream.exponential(rate);
    while (t <= T) {
        ev.arrivals.push_back(t);
        ev.marks.push_back(law.sample(stream));
        t += stream.exponential(rate);
    }
    if (S > 0.0) {
        double s = -stream.exponential(rate);
        while (s >= -S) {
            ev.pre_arrivals.push_back(s);
            ev.pre_marks.push_back(law.sample(stream));
            s -= stream.exponential(rate);
        }
    }
    return ev;
}

std::vector<double> eval_logvol(const EventStream& ev, const KernelSpec& kernel,
                                std::span<const double> times) {
    check_rate(ev, kernel);
    const double inv_sqrt_n = 1.0 / std::sqrt(ev.rate);
    std::vector<double> values(times.size(), 0.0);
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double t = times[i];
        double sum = 0.0;
        for (std::size_t j = 0; j < ev.arrivals.size(); ++j) {
            if (ev.arrivals[j] > t) break;
            sum += eval_kernel(kernel, t - ev.arrivals[j]) * ev.marks[j].second;
        }
        for (std::size_t j = 0; j < ev.pre_arrivals.size(); ++j) {
            const double tau = ev.pre_arrivals[j];
            sum += (eval_kernel(kernel, t - tau) - eval_kernel(kernel, -tau)) *
                   ev.pre_marks[j].second;
        }
        values[i] = sum * inv_sqrt_n;
    }
    return values;
}

PathGrid simulate_price_path(const EventStream& ev, const KernelSpec& kernel,
                             std::span<const double> grid) {
    check_rate(ev, kernel);
    const double inv_sqrt_n = 1.0 / std::sqrt(ev.rate);
    const std::size_t K = ev.arrivals.size();

    PathGrid path;
    path.times.assign(grid.begin(), grid.end());
    path.left_limits_at_jumps.resize(K);

    std::vector<double> price_after(K);
    double price = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
        const double vleft = logvol_left(ev, kernel, ev.arrivals[k], k);
        path.left_limits_at_jumps[k] = vleft;
        price += std::exp(vleft) * ev.marks[k].first * inv_sqrt_n;
        price_after[k] = price;
    }

    path.log_vol = eval_logvol(ev, kernel, grid);
    path.log_price.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto it = std::upper_bound(ev.arrivals.begin(), ev.arrivals.end(), grid[i]);
        const std::size_t idx = static_cast<std::size_t>(it - ev.arrivals.begin());
        path.log_price[i] = idx == 0 ? 0.0 : price_after[idx - 1];
    }
    return path;
}

double price_at_horizon(const EventStream& ev, const KernelSpec& kernel) {
    check_rate(ev, kernel);
    const double inv_sqrt_n = 1.0 / std::sqrt(ev.rate);
    const double H = kernel.hurst;
    const double e = H - 0.5;
    const double shift = kernel.shift();
    const std::size_t K = ev.arrivals.size();
    const double* tau = ev.arrivals.data();

    // Left-limit volatilities by direct summation over earlier events.  The
    // shifted power branch covers every gap >= 0 for Benchmark/GeneralShift
    // and all gaps >= shift for Optimized, so the sqrt-corrected branch only
    // runs on the trailing few events inside the shift window.
    const bool plain_power = kernel.variant != KernelVariant::Optimized;
    double price = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
        const double tk = tau[k];
        double sum = 0.0;
        std::size_t split = k;
        if (!plain_power) {
            const double cutoff = tk - shift;
            split = static_cast<std::size_t>(
                std::lower_bound(tau, tau + k, cutoff) - tau);
        }
        for (std::size_t j = 0; j < split; ++j) {
            sum += std::pow(tk - tau[j] + shift, e) * ev.marks[j].second;
        }
        for (std::size_t j = split; j < k; ++j) {
            sum += eval_kernel(kernel, tk - tau[j]) * ev.marks[j].second;
        }
        for (std::size_t j = 0; j < ev.pre_arrivals.size(); ++j) {
            const double p = ev.pre_arrivals[j];
            sum += (eval_kernel(kernel, tk - p) - eval_kernel(kernel, -p)) *
                   ev.pre_marks[j].second;
        }
        price += std::exp(sum * inv_sqrt_n) * ev.marks[k].first * inv_sqrt_n;
    }
    return price;
}

double prelimit_exp_functional(const KernelSpec& kernel, std::span<const double> coeffs,
                               std::span<const double> times, const MarkLaw& law,
                               double pre_horizon) {
    if (kernel.variant == KernelVariant::Limit) {
        throw ConfigError("the exponential functional is a prelimit object; use a finite-n kernel");
    }
    if (law.family() != MarkFamily::Gaussian2D) {
        throw ConfigError("unsupported mark law: the inner integral is closed only for Gaussian marks");
    }
    if (coeffs.size() != times.size()) {
        throw std::invalid_argument("coefficient/time length mismatch");
    }
    if (times.empty()) return 1.0;
    for (std::size_t i = 0; i + 1 < times.size(); ++i) {
        if (times[i] < times[i + 1]) {
            throw std::invalid_argument("times must be sorted in decreasing order");
        }
    }
    if (!(times.back() >= 0.0)) throw std::invalid_argument("times must be nonnegative");

    const double n = static_cast<double>(kernel.n);
    const double sv2 = law.sigma_v() * law.sigma_v();
    const double q = sv2 / (2.0 * n);
    if (q == 0.0) return 1.0;

    const double t1 = times.front();
    if (t1 == 0.0) {
        // all evaluation times at the origin and no pre-zero window: V = 0
        if (pre_horizon == 0.0) return 1.0;
    }

    const Integrand post = [&](double s) {
        double a = 0.0;
        for (std::size_t j = 0; j < times.size(); ++j) {
            if (s >= times[j]) break;  // phi(t_j - s) = 0 beyond t_j
            a += coeffs[j] * eval_kernel(kernel, times[j] - s);
        }
        return n * std::expm1(q * a * a);
    };
    // evaluation times are integrand kinks; the kernel peak at each t_j- is
    // resolved by the adaptive rule
    std::vector<double> breaks(times.begin(), times.end());
    for (double t : times) breaks.push_back(std::max(t - kernel.shift(), 0.0));
    double exponent =
        t1 > 0.0 ? integrate_segmented(post, 0.0, t1, breaks, {1e-10, 1e-9, 4000}) : 0.0;

    if (pre_horizon > 0.0) {
        const Integrand pre = [&](double x) {
            // x = -s > 0
            double b = 0.0;
            const double base = eval_kernel(kernel, x);
            for (std::size_t j = 0; j < times.size(); ++j) {
                b += coeffs[j] * (eval_kernel(kernel, times[j] + x) - base);
            }
            return n * std::expm1(q * b * b);
        };
        exponent += integrate(pre, 0.0, pre_horizon, {1e-10, 1e-9, 4000});
    }
    return std::exp(exponent);
}

} // namespace rbm
