#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rbm/rng.hpp"

namespace rbm {

enum class MarkFamily { Gaussian2D, ScaledSign };

// Bivariate law of the price/volatility jump marks (u, v): centered, with
// known second moments, no skew, no mixed skew, sub-Gaussian tails, and
// correlation rho = E[uv] / (sigma_p sigma_v).
class MarkLaw {
public:
    static MarkLaw gaussian(double sigma_p, double sigma_v, double rho);

    // u = sigma_p sign(Z1), v = sigma_v sign(Z2) with (Z1, Z2) a standard
    // bivariate normal of correlation gaussian_rho.  The effective mark
    // correlation follows the arcsine law: rho = (2/pi) asin(gaussian_rho).
    static MarkLaw scaled_sign(double sigma_p, double sigma_v, double gaussian_rho);

    MarkFamily family() const { return family_; }
    double sigma_p() const { return sigma_p_; }
    double sigma_v() const { return sigma_v_; }
    double rho() const { return rho_; }
    double gaussian_rho() const { return gaussian_rho_; }
    std::string family_name() const;

    std::pair<double, double> sample(RngStream& stream) const;

private:
    MarkLaw() = default;

    MarkFamily family_ = MarkFamily::Gaussian2D;
    double sigma_p_ = 1.0;
    double sigma_v_ = 1.0;
    double rho_ = 0.0;
    double gaussian_rho_ = 0.0;  // latent correlation (== rho for Gaussian2D)
};

std::vector<std::pair<double, double>> sample_marks(const MarkLaw& law, RngStream& stream,
                                                    std::size_t count);

struct MomentCheck {
    std::string name;
    double empirical = 0.0;
    double expected = 0.0;
    double standard_error = 0.0;
    bool pass = false;
};

struct MomentCheckReport {
    std::vector<MomentCheck> checks;
    bool all_pass() const;
};

// Empirical verification of the assumption moments (first, second, third and
// mixed) against their declared values; a check passes when the deviation is
// within z standard errors estimated from the same sample.
MomentCheckReport verify_mark_moments(const MarkLaw& law, RngStream& stream,
                                      std::size_t count, double z);

} // namespace rbm
