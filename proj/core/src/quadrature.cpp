#include "rbm/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include <Eigen/Dense>

#include "rbm/errors.hpp"

namespace rbm {

namespace {

// QUADPACK qk15 abscissae and weights.
constexpr double kXgk[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691, 0.7415311855993944,
    0.5860872354676911, 0.4058451513773972, 0.2077849550078985, 0.0,
};
constexpr double kWgk[8] = {
    0.0229353220105292, 0.0630920926299786, 0.1047900103222502, 0.1406532597155259,
    0.1690047266392679, 0.1903505780647854, 0.2044329400752989, 0.2094821410847278,
};
constexpr double kWg[4] = {
    0.1294849661688697, 0.2797053914892767, 0.3818300505051189, 0.4179591836734694,
};

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const Integrand& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double kronrod = kWgk[7] * fc;
    double gauss = kWg[3] * fc;
    for (int i = 0; i < 7; ++i) {
        const double dx = h * kXgk[i];
        const double fsum = f(c - dx) + f(c + dx);
        kronrod += kWgk[i] * fsum;
        if (i % 2 == 1) gauss += kWg[i / 2] * fsum;
    }
    kronrod *= h;
    gauss *= h;
    const double diff = std::abs(kronrod - gauss);
    // QUADPACK-style sharpened error estimate
    const double err = diff > 0.0 ? diff * std::min(1.0, std::pow(200.0 * diff, 1.5)) : 0.0;
    return {a, b, kronrod, std::max(err, diff * 1e-6)};
}

} // namespace

QuadResult integrate_result(const Integrand& f, double a, double b, const QuadOptions& opt) {
    QuadResult res;
    if (a == b) {
        res.converged = true;
        return res;
    }
    std::priority_queue<Segment> queue;
    Segment first = gk15(f, a, b);
    res.evaluations = 15;
    double total = first.value;
    double err = first.error;
    queue.push(first);
    int segments = 1;
    while (err > std::max(opt.abs_tol, opt.rel_tol * std::abs(total)) &&
           segments < opt.max_segments) {
        Segment worst = queue.top();
        queue.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            // interval collapsed to machine resolution; keep its estimate
            worst.error = 0.0;
            queue.push(worst);
            ++segments;
            continue;
        }
        const Segment left = gk15(f, worst.a, mid);
        const Segment right = gk15(f, mid, worst.b);
        res.evaluations += 30;
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        queue.push(left);
        queue.push(right);
        ++segments;
        if (segments % 64 == 0) {
            // re-sum accumulated errors to fight cancellation drift
            err = 0.0;
            std::priority_queue<Segment> copy = queue;
            double v = 0.0;
            while (!copy.empty()) {
                err += copy.top().error;
                v += copy.top().value;
                copy.pop();
            }
            total = v;
        }
    }
    res.value = total;
    res.error = err;
    res.converged = err <= std::max(opt.abs_tol, opt.rel_tol * std::abs(total));
    return res;
}

double integrate(const Integrand& f, double a, double b, const QuadOptions& opt) {
    const QuadResult res = integrate_result(f, a, b, opt);
    if (!res.converged) {
        throw AccuracyError("quadrature did not reach tolerance", res.value, res.error);
    }
    return res.value;
}

double integrate_segmented(const Integrand& f, double a, double b,
                           std::span<const double> breakpoints, const QuadOptions& opt) {
    std::vector<double> pts;
    pts.push_back(a);
    for (double p : breakpoints) {
        if (p > a && p < b) pts.push_back(p);
    }
    pts.push_back(b);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    double total = 0.0;
    QuadOptions local = opt;
    local.abs_tol = opt.abs_tol / static_cast<double>(pts.size() - 1);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        total += integrate(f, pts[i], pts[i + 1], local);
    }
    return total;
}

double integrate_tail(const Integrand& f, double a, const QuadOptions& opt, double cutoff) {
    // x = a + u/(1-u) maps (0,1) to (a,inf); dx = du/(1-u)^2
    const Integrand mapped = [&](double u) {
        const double omu = 1.0 - u;
        const double x = a + u / omu;
        const double fx = f(x);
        if (std::abs(fx) < cutoff) return 0.0;
        return fx / (omu * omu);
    };
    return integrate(mapped, 0.0, 1.0, opt);
}

QuadRule jacobi_rule(int n, double a, double b) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    const double apb = a + b;
    for (int k = 0; k < n; ++k) {
        double alpha;
        if (k == 0) {
            alpha = (b - a) / (apb + 2.0);
        } else {
            const double den = (2.0 * k + apb) * (2.0 * k + apb + 2.0);
            alpha = (b * b - a * a) / den;
        }
        J(k, k) = alpha;
        if (k >= 1) {
            double beta;
            if (k == 1) {
                beta = 4.0 * (1.0 + a) * (1.0 + b) /
                       ((2.0 + apb) * (2.0 + apb) * (3.0 + apb));
            } else {
                const double two_k = 2.0 * k + apb;
                beta = 4.0 * k * (k + a) * (k + b) * (k + apb) /
                       (two_k * two_k * (two_k + 1.0) * (two_k - 1.0));
            }
            const double e = std::sqrt(beta);
            J(k, k - 1) = e;
            J(k - 1, k) = e;
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(J);
    const double mu0 = std::pow(2.0, apb + 1.0) *
                       std::exp(std::lgamma(a + 1.0) + std::lgamma(b + 1.0) - std::lgamma(apb + 2.0));
    QuadRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        rule.nodes[i] = solver.eigenvalues()(i);
        const double v0 = solver.eigenvectors()(0, i);
        rule.weights[i] = mu0 * v0 * v0;
    }
    return rule;
}

QuadRule gauss_legendre(int n) {
    QuadRule rule = jacobi_rule(n, 0.0, 0.0);
    for (int i = 0; i < n; ++i) {
        rule.nodes[i] = 0.5 * (rule.nodes[i] + 1.0);
        rule.weights[i] *= 0.5;
    }
    return rule;
}

QuadRule gauss_jacobi_upper(int n, double a) {
    QuadRule rule = jacobi_rule(n, a, 0.0);
    const double scale = std::pow(2.0, -a - 1.0);
    for (int i = 0; i < n; ++i) {
        rule.nodes[i] = 0.5 * (rule.nodes[i] + 1.0);
        rule.weights[i] *= scale;
    }
    return rule;
}

double apply_rule(const QuadRule& rule, double lo, double hi, double weight_exponent,
                  const Integrand& f) {
    const double len = hi - lo;
    if (len <= 0.0) return 0.0;
    const double scale = std::pow(len, weight_exponent + 1.0);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        sum += rule.weights[i] * f(lo + len * rule.nodes[i]);
    }
    return scale * sum;
}

} // namespace rbm
