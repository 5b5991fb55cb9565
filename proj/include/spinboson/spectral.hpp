// spectral.hpp — Spectral-density families, detailed-balance splitting, and
// the principal-value Hilbert transform I(w) = P.P. int_0^inf J(x)/(x-w) dx.

#pragma once

#include <functional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "spinboson/errors.hpp"

namespace spinboson::spectral {

// J(w) = alpha * w^s * omega_c^(1-s) * exp(-w/omega_c); s = 1 is Ohmic.
struct PowerLawExpCutoff {
    double alpha;
    double s;
    double omega_c;
};

// J(w) = alpha on [omega_lo, omega_hi], zero elsewhere.
struct Box {
    double alpha;
    double omega_lo;
    double omega_hi;
};

// Piecewise-linear interpolation through (omega, j) samples, zero outside
// [omega.front(), omega.back()].
struct Table {
    std::vector<double> omega;
    std::vector<double> j;
};

// A nonnegative integrable density J(w) on w >= 0, identically zero for
// w < 0. Immutable after construction; cheap to copy and share.
class SpectralDensity {
  public:
    static SpectralDensity power_law(double alpha, double s, double omega_c);
    static SpectralDensity ohmic(double alpha, double omega_c);
    static SpectralDensity box(double alpha, double omega_lo, double omega_hi);
    static SpectralDensity table(std::vector<double> omega, std::vector<double> j);
    // Two-column numeric text file (omega, J), strictly increasing omega,
    // at least 2 rows. '#' starts a comment.
    static SpectralDensity table_from_file(const std::string& path);

    double operator()(double omega) const;

    // Support interval [lo, hi]; hi may be +inf (power law).
    std::pair<double, double> support() const;
    // Kinks/jumps strictly inside (0, inf): box edges, table nodes.
    std::vector<double> breakpoints() const;
    // Default integration cutoff: 50*omega_c for power laws, 10x the support
    // upper edge otherwise.
    double default_cutoff() const;
    // max_w J(w), analytic per family.
    double sup_value() const;
    // lim_{w->0+} J(w).
    double limit_at_zero_plus() const;
    // J(w)/w -> 0 as w -> 0+ (required for the finite-temperature I_pm(0)).
    bool vanishes_superlinearly_at_zero() const;
    // Leading power p with J ~ w^p near 0+; +inf when J == 0 near 0.
    double origin_exponent() const;
    // True when J is continuous at w (box/table support edges may jump).
    bool continuous_at(double w) const;

    SpectralDensity scaled(double factor) const;

    const std::variant<PowerLawExpCutoff, Box, Table>& family() const { return fam_; }
    bool is_table() const { return std::holds_alternative<Table>(fam_); }

  private:
    explicit SpectralDensity(std::variant<PowerLawExpCutoff, Box, Table> fam);
    std::variant<PowerLawExpCutoff, Box, Table> fam_;
};

// Detailed-balance densities at inverse temperature beta:
//   J_+(w) = J(w) / (1 - e^{-beta w}),   J_-(w) = J(w) e^{-beta w} / (1 - e^{-beta w}).
// Constructed so that j_plus(w) - j_minus(w) == J(w) exactly in floating point.
struct ThermalDensities {
    double beta{};
    SpectralDensity base;

    double j_plus(double omega) const;
    double j_minus(double omega) const;
};

ThermalDensities thermal_split(const SpectralDensity& j, double beta);

struct QuadratureSettings {
    double cutoff_upper{0.0};        // <= 0: resolve from the density
    double rel_tol{1e-10};
    double subtraction_window{1.0};  // half-width of the P.V. window
};

double evaluate_density(const SpectralDensity& j, double omega);

// I(w) for the base density. Table densities are evaluated by exact
// piecewise antiderivatives; other families by singularity-subtracted
// composite quadrature with a two-refinement error estimate.
// Throws InvalidCutoff when w >= cutoff, DivergentIntegral when the
// integral does not exist, NonConvergence when refinements disagree by
// more than 10x rel_tol.
double hilbert_pv(const SpectralDensity& j, double omega, const QuadratureSettings& q);

// I_pm(w) for the thermally dressed densities.
double hilbert_pv_plus(const ThermalDensities& th, double omega, const QuadratureSettings& q);
double hilbert_pv_minus(const ThermalDensities& th, double omega, const QuadratureSettings& q);

// Plain integral of J over [0, cutoff] with the same engine (used by the
// bath discretizer's consistency checks).
double integrate_density(const SpectralDensity& j, double upper, double rel_tol = 1e-10);

}  // namespace spinboson::spectral
