#include "rbm/functionals.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "rbm/errors.hpp"
#include "rbm/quadrature.hpp"

namespace rbm {

namespace {

constexpr double kTailCutoff = 1e-14;

// int_0^upper phi(gap + x) phi(x) dx.  The limit kernel's singularity at
// x = 0 (order 2H-1 on the diagonal, H-1/2 off it) is flattened by the
// power substitution x = y^p; shifted kernels are merely peaked, so p = 1
// and adaptive refinement with a breakpoint at the shift scale suffices.
double cov_post_raw(const KernelSpec& kernel, double gap, double upper,
                    const QuadOptions& opt) {
    if (upper <= 0.0) return 0.0;
    const double H = kernel.hurst;
    double p = 1.0;
    if (kernel.variant == KernelVariant::Limit) {
        p = gap <= 0.0 ? 1.0 / (2.0 * H) : 2.0 / (2.0 * H + 1.0);
    }
    const Integrand g = [&](double y) {
        const double x = p == 1.0 ? y : std::pow(y, p);
        const double jac = p == 1.0 ? 1.0 : p * std::pow(y, p - 1.0);
        return jac * eval_kernel(kernel, x) * eval_kernel(kernel, gap + x);
    };
    const double ymax = std::pow(upper, 1.0 / p);
    const double kink = kernel.shift();
    double breaks[3];
    std::size_t nb = 0;
    if (kink > 0.0 && kink < upper) {
        breaks[nb++] = std::pow(kink, 1.0 / p);
        if (gap < kink && kink - gap > 0.0 && kink - gap < upper) {
            breaks[nb++] = std::pow(kink - gap, 1.0 / p);
        }
    }
    if (gap > 0.0 && gap < upper) breaks[nb++] = std::pow(gap, 1.0 / p);
    return integrate_segmented(g, 0.0, ymax, std::span<const double>(breaks, nb), opt);
}

// Pre-zero factor product (phi(t+x)-phi(x)) (phi(s+x)-phi(x)) integrated over
// x in (0, S).  For the limit kernel the x->0 singularity is x^(2H-1); the
// substitution x = y^(1/2H) makes the integrand bounded.
double cov_pre_raw(const KernelSpec& kernel, double t, double s, double S,
                   const QuadOptions& opt) {
    if (S <= 0.0) return 0.0;
    const double H = kernel.hurst;
    const auto factor = [&](double x) {
        const double base = eval_kernel(kernel, x);
        return (eval_kernel(kernel, t + x) - base) * (eval_kernel(kernel, s + x) - base);
    };

    const double near = std::min(S, std::max(t, s));
    double total = 0.0;
    if (near > 0.0) {
        const double p = kernel.variant == KernelVariant::Limit ? 1.0 / (2.0 * H) : 1.0;
        const Integrand g = [&](double y) {
            const double x = p == 1.0 ? y : std::pow(y, p);
            const double jac = p == 1.0 ? 1.0 : p * std::pow(y, p - 1.0);
            return jac * factor(x);
        };
        const double kink = kernel.shift();
        double breaks[1];
        std::size_t nb = 0;
        if (kink > 0.0 && kink < near) breaks[nb++] = std::pow(kink, 1.0 / p);
        total += integrate_segmented(g, 0.0, std::pow(near, 1.0 / p),
                                     std::span<const double>(breaks, nb), opt);
    }
    if (S > near) {
        if (std::isfinite(S)) {
            total += integrate(factor, near, S, opt);
        } else {
            const double mid = 10.0 * std::max({t, s, 1.0});
            if (mid > near) total += integrate(factor, near, mid, opt);
            total += integrate_tail(factor, std::max(near, mid), opt, kTailCutoff);
        }
    }
    return total;
}

const QuadOptions kCovOpt{1e-11, 1e-9, 4000};

double golden_max(const std::function<double(double)>& f, double a, double b, double fa,
                  double fb, int iterations) {
    const double inv_phi = 0.6180339887498949;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    double best = std::max({fa, fb, f1, f2});
    for (int i = 0; i < iterations; ++i) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        }
        best = std::max({best, f1, f2});
    }
    return best;
}

// sup over [lo, hi] on a uniform grid with golden-section refinement around
// the grid argmax.
double sup_on_grid(const std::function<double(double)>& f, double lo, double hi,
                   int grid_points) {
    double best = -1.0;
    int best_i = 0;
    std::vector<double> values(grid_points + 1);
    for (int i = 0; i <= grid_points; ++i) {
        const double t = lo + (hi - lo) * static_cast<double>(i) / grid_points;
        values[i] = f(t);
        if (values[i] > best) {
            best = values[i];
            best_i = i;
        }
    }
    const double step = (hi - lo) / grid_points;
    const double a = std::max(lo, lo + step * (best_i - 1));
    const double b = std::min(hi, lo + step * (best_i + 1));
    return golden_max(f, a, b, f(a), f(b), 24);
}

// Cubic interpolation table on a graded grid; caches the diagonal covariance
// differences so the square-functional integrals do not re-run nested
// quadrature per node.
class GradedTable {
public:
    GradedTable(std::function<double(double)> f, double hi, int points) : hi_(hi) {
        xs_.reserve(points + 1);
        ys_.reserve(points + 1);
        xs_.push_back(0.0);
        ys_.push_back(0.0);
        for (int i = 0; i < points; ++i) {
            // geometric from hi*1e-7 up to hi
            const double x = hi * std::pow(1e-7, 1.0 - static_cast<double>(i) / (points - 1));
            xs_.push_back(x);
            ys_.push_back(f(x));
        }
        ys_.front() = ys_[1];  // constant continuation below the finest node
    }

    double operator()(double x) const {
        if (x <= xs_[1]) return ys_[1];
        if (x >= hi_) return ys_.back();
        const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
        std::size_t i = static_cast<std::size_t>(it - xs_.begin()) - 1;
        i = std::clamp<std::size_t>(i, 1, xs_.size() - 3);
        // Lagrange cubic through the four surrounding nodes
        const double* xp = &xs_[i - 1];
        const double* yp = &ys_[i - 1];
        double out = 0.0;
        for (int a = 0; a < 4; ++a) {
            double term = yp[a];
            for (int b = 0; b < 4; ++b) {
                if (a != b) term *= (x - xp[b]) / (xp[a] - xp[b]);
            }
            out += term;
        }
        return out;
    }

private:
    double hi_;
    std::vector<double> xs_, ys_;
};

} // namespace

double covariance_Cn(const KernelSpec& kernel, double t, double s, bool pre_zero) {
    if (!(t >= 0.0) || !(s >= 0.0)) throw std::domain_error("covariance needs t, s >= 0");
    const double lo = std::min(t, s);
    const double gap = std::abs(t - s);
    double value = cov_post_raw(kernel, gap, lo, kCovOpt);
    if (pre_zero) {
        value += cov_pre_raw(kernel, t, s, std::numeric_limits<double>::infinity(), kCovOpt);
    }
    return value;
}

double covariance_Cn_truncated(const KernelSpec& kernel, double t, double s,
                               double pre_horizon) {
    if (!(t >= 0.0) || !(s >= 0.0)) throw std::domain_error("covariance needs t, s >= 0");
    const double lo = std::min(t, s);
    const double gap = std::abs(t - s);
    return cov_post_raw(kernel, gap, lo, kCovOpt) +
           cov_pre_raw(kernel, t, s, pre_horizon, kCovOpt);
}

double limit_covariance_two_sided(double hurst, double t, double s) {
    const double c = mandelbrot_van_ness_constant(hurst);
    const double twoH = 2.0 * hurst;
    return 0.5 * c * c *
           (std::pow(t, twoH) + std::pow(s, twoH) - std::pow(std::abs(t - s), twoH));
}

ErrorFunctionals error_functionals(const KernelSpec& kernel, double T, bool pre_zero) {
    if (kernel.variant == KernelVariant::Limit) {
        throw ConfigError("error functionals compare a finite-n kernel against the limit");
    }
    if (!(T > 0.0)) throw ConfigError("functional horizon must be positive");

    const double H = kernel.hurst;
    const double n = static_cast<double>(kernel.n);
    const KernelSpec limit = KernelSpec::limit(H);
    const QuadOptions opt{1e-11, 1e-7, 4000};

    ErrorFunctionals out;
    out.n = kernel.n;
    out.horizon = T;
    out.kernel = kernel;

    // star: (1/n) [ int_0^T phi_n^4 + int_0^inf (phi_n(T+x)-phi_n(x))^4 dx ]
    {
        const Integrand quartic = [&](double u) {
            const double phi = eval_kernel(kernel, u);
            return phi * phi * phi * phi;
        };
        const double kink = kernel.shift();
        double breaks[1] = {kink};
        out.star = integrate_segmented(quartic, 0.0, T,
                                       std::span<const double>(breaks, kink < T ? 1 : 0), opt);
        if (pre_zero) {
            const Integrand tail4 = [&](double x) {
                const double d = eval_kernel(kernel, T + x) - eval_kernel(kernel, x);
                return d * d * d * d;
            };
            out.star += integrate(tail4, 0.0, 10.0 * T, opt);
            out.star += integrate_tail(tail4, 10.0 * T, opt, kTailCutoff);
        }
        out.star /= n;
    }

    // triangle: L1 distance on [0,T]; the limit singularity at 0 is removed
    // by the same power substitution used for the covariances
    {
        const double p = 2.0 / (2.0 * H + 1.0);
        const Integrand g = [&](double y) {
            const double x = std::pow(y, p);
            return p * std::pow(y, p - 1.0) *
                   std::abs(eval_kernel(kernel, x) - eval_kernel(limit, x));
        };
        const double kink = kernel.shift();
        double breaks[1] = {std::pow(kink, 1.0 / p)};
        out.triangle = integrate_segmented(g, 0.0, std::pow(T, 1.0 / p),
                                           std::span<const double>(breaks, kink < T ? 1 : 0),
                                           opt);
    }

    // diagonal differences |C_n(s,s) - C_inf(s,s)|, cached on a graded grid
    const auto diag_diff_exact = [&](double s) {
        const double cn = covariance_Cn(kernel, s, s, pre_zero);
        const double ci = pre_zero
                              ? limit_covariance_two_sided(H, s, s)
                              : covariance_Cn(limit, s, s, false);
        return std::abs(cn - ci);
    };
    const GradedTable diag_diff(diag_diff_exact, T, 320);

    const auto c_inf = [&](double s, double t) {
        return pre_zero ? limit_covariance_two_sided(H, s, t)
                        : covariance_Cn(limit, t, s, false);
    };

    // square: sup_t int_0^t phi_n(t-s) |C_n(s,s) - C_inf(s,s)| ds
    {
        const auto inner = [&](double t) {
            const double p = 2.0 / (2.0 * H + 1.0);
            const Integrand g = [&](double y) {
                const double w = std::pow(y, p);  // w = t - s
                return p * std::pow(y, p - 1.0) * eval_kernel(kernel, w) *
                       diag_diff(t - w);
            };
            const double kink = kernel.shift();
            double breaks[1] = {std::pow(kink, 1.0 / p)};
            return integrate_segmented(g, 0.0, std::pow(t, 1.0 / p),
                                       std::span<const double>(breaks, kink < t ? 1 : 0),
                                       {1e-11, 1e-6, 4000});
        };
        out.square = sup_on_grid(inner, T / 64.0, T, 63);
    }

    // diamond: sup_t int_0^t phi_inf(t-s) |C_n(s,t) - C_inf(s,t)| ds
    {
        const auto inner = [&](double t) {
            const double p = 2.0 / (2.0 * H + 1.0);
            const Integrand g = [&](double y) {
                const double w = std::pow(y, p);
                const double s = t - w;
                const double diff = covariance_Cn(kernel, t, s, pre_zero) - c_inf(s, t);
                return p * std::pow(y, p - 1.0) * eval_kernel(limit, w) * std::abs(diff);
            };
            return integrate(g, 0.0, std::pow(t, 1.0 / p), {1e-9, 1e-5, 2000});
        };
        out.diamond = sup_on_grid(inner, T / 64.0, T, 63);
    }

    return out;
}

std::vector<ErrorFunctionals> error_functionals_sweep(const KernelFamily& family,
                                                      std::span<const std::uint64_t> n_grid,
                                                      double T, bool pre_zero, int threads) {
    std::vector<ErrorFunctionals> out(n_grid.size());
    const int workers = std::max(1, std::min<int>(threads, static_cast<int>(n_grid.size())));
    if (workers == 1) {
        for (std::size_t i = 0; i < n_grid.size(); ++i) {
            out[i] = error_functionals(family(n_grid[i]), T, pre_zero);
        }
        return out;
    }
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            for (std::size_t i = next.fetch_add(1); i < n_grid.size(); i = next.fetch_add(1)) {
                out[i] = error_functionals(family(n_grid[i]), T, pre_zero);
            }
        });
    }
    for (auto& th : pool) th.join();
    return out;
}

RateFit fit_rate(std::span<const double> ns, std::span<const double> values) {
    if (ns.size() != values.size()) throw std::invalid_argument("rate fit length mismatch");
    if (ns.size() < 3) throw std::invalid_argument("rate fit needs at least 3 points");
    for (double v : values) {
        if (!(v > 0.0)) throw std::domain_error("rate fit requires positive values");
    }
    const std::size_t m = ns.size();
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double x = std::log(ns[i]);
        const double y = std::log(values[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double det = m * sxx - sx * sx;
    RateFit fit;
    fit.slope = (m * sxy - sx * sy) / det;
    fit.intercept = (sy * sxx - sx * sxy) / det;
    double ss = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double r = std::log(values[i]) - (fit.intercept + fit.slope * std::log(ns[i]));
        ss += r * r;
    }
    fit.residual = std::sqrt(ss / m);
    return fit;
}

std::vector<double> lower_bound_scan(const KernelFamily& family, double gamma,
                                     std::span<const std::uint64_t> n_grid) {
    if (!(gamma > 0.0)) throw std::domain_error("lower bound scan needs gamma > 0");
    std::vector<double> out;
    out.reserve(n_grid.size());
    for (const std::uint64_t n : n_grid) {
        const KernelSpec spec = family(n);
        const KernelSpec limit = KernelSpec::limit(spec.hurst);
        const double L = std::pow(static_cast<double>(n), -gamma);
        const auto indicator = [&](double t) {
            return eval_kernel(spec, t) - 0.5 * eval_kernel(limit, t);
        };
        // coarse geometric scan for sign changes, then bisection
        const int scan = 1024;
        const double resolution = 1e-12 * L;
        double measure = 0.0;
        double prev_t = L * 1e-14;
        double prev_sign = indicator(prev_t) >= 0.0 ? 1.0 : -1.0;
        double segment_start = prev_sign > 0.0 ? 0.0 : -1.0;  // treat [0, prev_t] as prev sign
        for (int i = 1; i <= scan; ++i) {
            const double t = L * std::pow(1e-14, 1.0 - static_cast<double>(i) / scan);
            const double sign = indicator(t) >= 0.0 ? 1.0 : -1.0;
            if (sign != prev_sign) {
                double a = prev_t, b = t;
                while (b - a > resolution) {
                    const double mid = 0.5 * (a + b);
                    if ((indicator(mid) >= 0.0 ? 1.0 : -1.0) == prev_sign) {
                        a = mid;
                    } else {
                        b = mid;
                    }
                }
                const double crossing = 0.5 * (a + b);
                if (prev_sign > 0.0) {
                    measure += crossing - segment_start;
                    segment_start = -1.0;
                } else {
                    segment_start = crossing;
                }
                prev_sign = sign;
            }
            prev_t = t;
        }
        if (prev_sign > 0.0 && segment_start >= 0.0) measure += L - segment_start;
        out.push_back(measure * std::pow(static_cast<double>(n), gamma));
    }
    return out;
}

} // namespace rbm
