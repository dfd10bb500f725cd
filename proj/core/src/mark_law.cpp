#include "rbm/mark_law.hpp"

#include <cmath>

#include "rbm/errors.hpp"

namespace rbm {

MarkLaw MarkLaw::gaussian(double sigma_p, double sigma_v, double rho) {
    if (!(sigma_p > 0.0) || !(sigma_v >= 0.0)) {
        throw ConfigError("mark law requires sigma_p > 0 and sigma_v >= 0");
    }
    if (std::abs(rho) > 1.0) throw std::domain_error("mark correlation must lie in [-1, 1]");
    MarkLaw law;
    law.family_ = MarkFamily::Gaussian2D;
    law.sigma_p_ = sigma_p;
    law.sigma_v_ = sigma_v;
    law.rho_ = rho;
    law.gaussian_rho_ = rho;
    return law;
}

MarkLaw MarkLaw::scaled_sign(double sigma_p, double sigma_v, double gaussian_rho) {
    if (!(sigma_p > 0.0) || !(sigma_v >= 0.0)) {
        throw ConfigError("mark law requires sigma_p > 0 and sigma_v >= 0");
    }
    if (std::abs(gaussian_rho) > 1.0) {
        throw std::domain_error("latent correlation must lie in [-1, 1]");
    }
    MarkLaw law;
    law.family_ = MarkFamily::ScaledSign;
    law.sigma_p_ = sigma_p;
    law.sigma_v_ = sigma_v;
    law.gaussian_rho_ = gaussian_rho;
    law.rho_ = 2.0 / M_PI * std::asin(gaussian_rho);
    return law;
}

std::string MarkLaw::family_name() const {
    return family_ == MarkFamily::Gaussian2D ? "gaussian" : "scaled-sign";
}

std::pair<double, double> MarkLaw::sample(RngStream& stream) const {
    const double z1 = stream.normal();
    const double z2 = stream.normal();
    const double latent_rho = gaussian_rho_;
    const double z2c = latent_rho * z1 + std::sqrt(1.0 - latent_rho * latent_rho) * z2;
    if (family_ == MarkFamily::Gaussian2D) {
        return {sigma_p_ * z1, sigma_v_ * z2c};
    }
    const auto sign = [](double x) { return x >= 0.0 ? 1.0 : -1.0; };
    return {sigma_p_ * sign(z1), sigma_v_ * sign(z2c)};
}

std::vector<std::pair<double, double>> sample_marks(const MarkLaw& law, RngStream& stream,
                                                    std::size_t count) {
    if (count < 1) throw ConfigError("sample_marks needs count >= 1");
    std::vector<std::pair<double, double>> out(count);
    for (auto& uv : out) uv = law.sample(stream);
    return out;
}

bool MomentCheckReport::all_pass() const {
    for (const auto& c : checks) {
        if (!c.pass) return false;
    }
    return true;
}

MomentCheckReport verify_mark_moments(const MarkLaw& law, RngStream& stream,
                                      std::size_t count, double z) {
    if (count < 10000) throw ConfigError("moment verification needs at least 1e4 samples");

    // statistic values g(u,v) and their declared expectations
    struct Accum {
        const char* name;
        double expected;
        double sum = 0.0;
        double sumsq = 0.0;
    };
    const double sp = law.sigma_p(), sv = law.sigma_v();
    Accum accums[] = {
        {"E[u]", 0.0}, {"E[v]", 0.0},
        {"E[u^2]", sp * sp}, {"E[v^2]", sv * sv},
        {"E[u^3]", 0.0}, {"E[v^3]", 0.0},
        {"E[u v^2]", 0.0}, {"E[u^2 v]", 0.0},
        {"E[u v]", law.rho() * sp * sv},
    };
    for (std::size_t i = 0; i < count; ++i) {
        const auto [u, v] = law.sample(stream);
        const double g[] = {u, v, u * u, v * v, u * u * u, v * v * v,
                            u * v * v, u * u * v, u * v};
        for (int k = 0; k < 9; ++k) {
            accums[k].sum += g[k];
            accums[k].sumsq += g[k] * g[k];
        }
    }
    MomentCheckReport report;
    const double m = static_cast<double>(count);
    for (const auto& acc : accums) {
        MomentCheck check;
        check.name = acc.name;
        check.expected = acc.expected;
        check.empirical = acc.sum / m;
        const double var = std::max(acc.sumsq / m - check.empirical * check.empirical, 0.0);
        check.standard_error = std::sqrt(var / m);
        check.pass = std::abs(check.empirical - check.expected) <= z * check.standard_error;
        report.checks.push_back(check);
    }
    return report;
}

} // namespace rbm
