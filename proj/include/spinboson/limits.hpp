// limits.hpp — Stochastic-limit coefficients (gamma, sigma, phi) at zero and
// finite temperature, dynamical-regime classification, and the pure-damping
// amplitude solver.

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spinboson/model.hpp"
#include "spinboson/spectral.hpp"

namespace spinboson::limits {

// Labeled record of the J(.) and I(.) evaluations that built a coefficient
// set; serialized verbatim into reports.
using Provenance = std::vector<std::pair<std::string, double>>;

struct LimitCoefficients {
    double gamma{0.0};  // damping rate, >= 0 for J >= 0
    double sigma{0.0};  // oscillation-frequency shift
    double phi{0.0};    // global phase rate
    std::optional<double> beta{};  // absent = zero temperature
    double j_at_resonance{0.0};    // J(nu*Delta), the off-resonance diagnostic
    Provenance provenance{};
};

enum class Regime { PureDamping, PureOscillation, DampedOscillation, Frozen };

std::string regime_name(Regime r);

struct RegimeReport {
    Regime regime{Regime::DampedOscillation};
    double gamma{0.0};
    double effective_frequency{0.0};  // sigma - nu*Delta
    double gamma_tol{0.0};
    double omega_tol{0.0};
    bool off_resonance{false};  // J(nu*Delta) == 0
    double j_at_nu_delta{0.0};
};

// gamma = pi J(nu D)/nu^2,  sigma = (I(-nu D) - I(nu D))/nu^2,
// phi = I(-nu D)/nu^2 + d_pp^2 I(0).
// The I(0) term of sigma carries the coefficient d_mm^2 - d_pp^2, which
// vanishes identically (d_pp = -d_mm), so I(0) is evaluated only when
// epsilon != 0, where phi needs it; that evaluation throws DivergentIntegral
// when J(0+)/w is not integrable.
LimitCoefficients coefficients_zero_temperature(const model::Eigensystem& eig,
                                                const spectral::SpectralDensity& j,
                                                const spectral::QuadratureSettings& q);

// Same structure over the detailed-balance densities J_pm. The sum form
// gamma = pi (J_+ + J_-)(nu D)/nu^2 and the closed form
// gamma = pi J(nu D) coth(beta nu D / 2)/nu^2 are both computed and recorded.
LimitCoefficients coefficients_finite_temperature(const model::Eigensystem& eig,
                                                  const spectral::SpectralDensity& j,
                                                  double beta,
                                                  const spectral::QuadratureSettings& q);

// Scale-free default tolerances for the classifier.
double default_gamma_tol(const model::Eigensystem& eig, const spectral::SpectralDensity& j);
double default_omega_tol(const model::Eigensystem& eig);

RegimeReport classify_regime(const LimitCoefficients& c, const model::Eigensystem& eig,
                             double gamma_tol, double omega_tol);

// Solve sigma(alpha * J) = nu*Delta for the amplitude alpha > 0. sigma is
// linear in the amplitude, so scaling families are solved directly as
// alpha = nu*Delta / sigma_unit; table families go through bisection on the
// given bracket. Throws NoSolution when sigma_unit <= 0.
double solve_damping_condition(const spectral::SpectralDensity& unit_family,
                               const model::Eigensystem& eig,
                               std::pair<double, double> bracket,
                               const spectral::QuadratureSettings& q);

}  // namespace spinboson::limits
