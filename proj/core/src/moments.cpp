#include "rbm/moments.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "rbm/errors.hpp"
#include "rbm/functionals.hpp"
#include "rbm/microsim.hpp"
#include "rbm/quadrature.hpp"

namespace rbm {

double gaussian_exp_moment(const Eigen::MatrixXd& cov, std::span<const int> exponents) {
    if (cov.rows() != cov.cols() ||
        cov.rows() != static_cast<Eigen::Index>(exponents.size())) {
        throw std::invalid_argument("covariance/exponent dimension mismatch");
    }
    double quad_form = 0.0;
    for (Eigen::Index i = 0; i < cov.rows(); ++i) {
        for (Eigen::Index j = 0; j < cov.cols(); ++j) {
            quad_form += exponents[i] * exponents[j] * cov(i, j);
        }
    }
    return std::exp(0.5 * quad_form);
}

double hermite4(double x) {
    const double x2 = x * x;
    return x2 * x2 - 6.0 * x2 + 3.0;
}

namespace {

// Uniform-grid bicubic (Catmull-Rom) surface used to cache the approximate
// covariance C_n; rebuilding nested quadrature per simplex node would make
// the Gaussian proxy model cubically expensive.
class BicubicTable {
public:
    BicubicTable(std::function<double(double, double)> f, double hi, int cells)
        : hi_(hi), n_(cells) {
        values_.resize((n_ + 1) * (n_ + 1));
        for (int i = 0; i <= n_; ++i) {
            for (int j = 0; j <= i; ++j) {
                const double v = f(x(i), x(j));
                values_[i * (n_ + 1) + j] = v;
                values_[j * (n_ + 1) + i] = v;
            }
        }
    }

    double operator()(double s, double t) const {
        return interp2(std::clamp(s / hi_ * n_, 0.0, double(n_)),
                       std::clamp(t / hi_ * n_, 0.0, double(n_)));
    }

private:
    double x(int i) const { return hi_ * static_cast<double>(i) / n_; }
    double at(int i, int j) const {
        i = std::clamp(i, 0, n_);
        j = std::clamp(j, 0, n_);
        return values_[i * (n_ + 1) + j];
    }

    static double cubic(double p0, double p1, double p2, double p3, double u) {
        return p1 + 0.5 * u * (p2 - p0 +
                               u * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 +
                                    u * (3.0 * (p1 - p2) + p3 - p0)));
    }

    double interp2(double gx, double gy) const {
        const int ix = std::clamp(static_cast<int>(gx), 0, n_ - 1);
        const int iy = std::clamp(static_cast<int>(gy), 0, n_ - 1);
        const double ux = gx - ix;
        const double uy = gy - iy;
        double rows[4];
        for (int r = -1; r <= 2; ++r) {
            rows[r + 1] = cubic(at(ix - 1, iy + r), at(ix, iy + r), at(ix + 1, iy + r),
                                at(ix + 2, iy + r), ux);
        }
        return cubic(rows[0], rows[1], rows[2], rows[3], uy);
    }

    double hi_;
    int n_;
    std::vector<double> values_;
};

// Expectation of the exponential functional psi at a simplex node, per model.
class PsiEvaluator {
public:
    virtual ~PsiEvaluator() = default;
    virtual double operator()(std::span<const double> times,
                              std::span<const int> exponents) const = 0;
};

class GaussianPsi : public PsiEvaluator {
public:
    GaussianPsi(double sigma_v, std::function<double(double, double)> cov_fn,
                std::function<double(double)> var_fn)
        : sv2_(sigma_v * sigma_v), cov_(std::move(cov_fn)), var_(std::move(var_fn)) {}

    double operator()(std::span<const double> times,
                      std::span<const int> exponents) const override {
        double quad_form = 0.0;
        const std::size_t m = times.size();
        for (std::size_t i = 0; i < m; ++i) {
            quad_form += exponents[i] * exponents[i] * var_(times[i]);
            for (std::size_t j = i + 1; j < m; ++j) {
                quad_form += 2.0 * exponents[i] * exponents[j] * cov_(times[i], times[j]);
            }
        }
        return std::exp(0.5 * sv2_ * quad_form);
    }

private:
    double sv2_;
    std::function<double(double, double)> cov_;
    std::function<double(double)> var_;
};

class PrelimitPsi : public PsiEvaluator {
public:
    explicit PrelimitPsi(const PrelimitMomentModel& model) : model_(model) {}

    double operator()(std::span<const double> times,
                      std::span<const int> exponents) const override {
        std::vector<double> coeffs(exponents.begin(), exponents.end());
        return prelimit_exp_functional(model_.kernel, coeffs, times, model_.law,
                                       model_.pre_horizon);
    }

private:
    const PrelimitMomentModel& model_;
};

struct EngineSetup {
    Sigmas sigmas;
    double horizon = 1.0;
    KernelSpec factor_kernel;       // the phi inside the integrand products
    bool singular_factors = false;  // true only for the limit kernel
    std::unique_ptr<PsiEvaluator> psi;
};

EngineSetup make_setup(const MomentModel& model) {
    EngineSetup setup;
    if (const auto* limit = std::get_if<LimitMomentModel>(&model)) {
        setup.sigmas = {limit->sigma_p, limit->sigma_v, limit->rho};
        setup.horizon = limit->horizon;
        setup.factor_kernel = KernelSpec::limit(limit->hurst);
        setup.singular_factors = true;
        const double hurst = limit->hurst;
        std::function<double(double, double)> cov;
        std::function<double(double)> var;
        if (limit->pre_zero) {
            cov = [hurst](double t, double s) {
                return limit_covariance_two_sided(hurst, t, s);
            };
            var = [hurst](double t) { return limit_covariance_two_sided(hurst, t, t); };
        } else {
            const KernelSpec kernel = KernelSpec::limit(hurst);
            cov = [kernel](double t, double s) {
                return covariance_Cn(kernel, t, s, false);
            };
            var = [kernel](double t) { return kernel_l2_integral(kernel, t); };
        }
        setup.psi = std::make_unique<GaussianPsi>(limit->sigma_v, cov, var);
    } else if (const auto* approx = std::get_if<ApproxMomentModel>(&model)) {
        if (approx->kernel.variant == KernelVariant::Limit) {
            throw ConfigError("approximate Gaussian model needs a finite-n kernel");
        }
        setup.sigmas = {approx->sigma_p, approx->sigma_v, approx->rho};
        setup.horizon = approx->horizon;
        setup.factor_kernel = approx->kernel;
        const KernelSpec kernel = approx->kernel;
        const bool pre_zero = approx->pre_zero;
        auto table = std::make_shared<BicubicTable>(
            [kernel, pre_zero](double s, double t) {
                return covariance_Cn(kernel, s, t, pre_zero);
            },
            approx->horizon, 192);
        std::function<double(double, double)> cov = [table](double t, double s) {
            return (*table)(s, t);
        };
        // exact diagonal; the table only serves off-diagonal queries
        std::function<double(double)> var;
        if (pre_zero) {
            var = [kernel](double t) { return covariance_Cn(kernel, t, t, true); };
        } else {
            var = [kernel](double t) { return kernel_l2_integral(kernel, t); };
        }
        setup.psi = std::make_unique<GaussianPsi>(approx->sigma_v, cov, var);
    } else {
        const auto& pre = std::get<PrelimitMomentModel>(model);
        if (pre.kernel.variant == KernelVariant::Limit) {
            throw ConfigError("prelimit model needs a finite-n kernel");
        }
        setup.sigmas = {pre.law.sigma_p(), pre.law.sigma_v(), pre.law.rho()};
        setup.horizon = pre.horizon;
        setup.factor_kernel = pre.kernel;
        setup.psi = std::make_unique<PrelimitPsi>(pre);
    }
    return setup;
}

// Recursive evaluation of one term's simplex integral with per-level rules.
class TermIntegrator {
public:
    TermIntegrator(const EngineSetup& setup, const MomentTerm& term, int nodes)
        : setup_(setup), term_(term), m_(static_cast<int>(term.exponents.size())) {
        const double a = setup.factor_kernel.hurst - 0.5;
        legendre_ = gauss_legendre(nodes);
        if (setup.singular_factors) jacobi_ = gauss_jacobi_upper(nodes, a);
        times_.resize(m_);
    }

    double run() { return level(0, setup_.horizon); }

private:
    // Integrate variable `i` (0-based) over (0, upper).
    double level(int i, double upper) {
        if (upper <= 0.0) return 0.0;
        // A Jacobi rule absorbs the factor phi(t_{i-1} - t_i) when the factor
        // is singular at the upper end, i.e. the kernel is the limit kernel
        // and this variable's target is its immediate predecessor.
        const bool absorb =
            setup_.singular_factors && i > 0 && term_.alpha[i] == i;  // alpha is 1-based
        const QuadRule& rule = absorb ? jacobi_ : legendre_;
        const double exponent = absorb ? setup_.factor_kernel.hurst - 0.5 : 0.0;
        const double len = upper;
        double sum = 0.0;
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
            times_[i] = len * rule.nodes[q];
            double factor = 1.0;
            if (i > 0 && term_.alpha[i] > 0 && !absorb) {
                factor = eval_kernel(setup_.factor_kernel,
                                     times_[term_.alpha[i] - 1] - times_[i]);
            }
            const double inner =
                i + 1 < m_ ? level(i + 1, times_[i])
                           : (*setup_.psi)(std::span<const double>(times_.data(), m_),
                                           term_.exponents);
            sum += rule.weights[q] * factor * inner;
        }
        return std::pow(len, exponent + 1.0) * sum;
    }

    const EngineSetup& setup_;
    const MomentTerm& term_;
    int m_;
    QuadRule legendre_;
    QuadRule jacobi_;
    std::vector<double> times_;
};

} // namespace

MomentResult moment_value(int N, const MomentModel& model, const SimplexQuad& quad) {
    if (N < 1) throw ConfigError("moment order must be a positive integer");
    if (N > 6) throw ConfigError("moment order capped at 6 for quadrature tractability");

    const EngineSetup setup = make_setup(model);
    const std::vector<Word> words = enumerate_words(N);

    MomentResult result;
    for (const Word& word : words) {
        const std::vector<MomentTerm> terms = expand_word(word, N, setup.sigmas);
        for (const MomentTerm& term : terms) {
            ++result.term_count;
            if (term.coefficient == 0.0) continue;
            const int m = static_cast<int>(term.exponents.size());
            const int base_nodes = m <= 3 ? quad.nodes : std::min(quad.nodes, 10);
            const int check_nodes = m <= 3 ? quad.check_nodes : std::min(quad.check_nodes, 14);
            const double coarse = TermIntegrator(setup, term, base_nodes).run();
            const double fine = TermIntegrator(setup, term, check_nodes).run();
            result.value += term.coefficient * fine;
            result.quadrature_error += std::abs(term.coefficient) * std::abs(fine - coarse);
        }
    }
    return result;
}

MomentResult hermite4_expectation(const MomentModel& model, const SimplexQuad& quad) {
    const MomentResult m2 = moment_value(2, model, quad);
    const MomentResult m4 = moment_value(4, model, quad);
    MomentResult result;
    result.value = m4.value - 6.0 * m2.value + 3.0;
    result.quadrature_error = m4.quadrature_error + 6.0 * m2.quadrature_error;
    result.term_count = m2.term_count + m4.term_count;
    return result;
}

} // namespace rbm
