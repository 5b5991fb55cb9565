#include "spinboson/limits.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace spinboson::limits {

namespace {
constexpr double kPi = std::numbers::pi;

double sigma_of(const model::Eigensystem& eig, const spectral::SpectralDensity& j,
                const spectral::QuadratureSettings& q) {
    const double nud = eig.nu_delta();
    const double inv_nu2 = 1.0 / (eig.nu * eig.nu);
    return inv_nu2 * (spectral::hilbert_pv(j, -nud, q) - spectral::hilbert_pv(j, nud, q));
}
}  // namespace

std::string regime_name(Regime r) {
    switch (r) {
        case Regime::PureDamping: return "PureDamping";
        case Regime::PureOscillation: return "PureOscillation";
        case Regime::DampedOscillation: return "DampedOscillation";
        case Regime::Frozen: return "Frozen";
    }
    return "DampedOscillation";
}

LimitCoefficients coefficients_zero_temperature(const model::Eigensystem& eig,
                                                const spectral::SpectralDensity& j,
                                                const spectral::QuadratureSettings& q) {
    const double nud = eig.nu_delta();
    const double inv_nu2 = 1.0 / (eig.nu * eig.nu);

    LimitCoefficients c;
    c.j_at_resonance = j(nud);
    c.gamma = kPi * inv_nu2 * c.j_at_resonance;

    const double i_minus = spectral::hilbert_pv(j, -nud, q);
    const double i_plus = spectral::hilbert_pv(j, nud, q);
    c.sigma = inv_nu2 * (i_minus - i_plus);

    c.provenance.emplace_back("J(nu*Delta)", c.j_at_resonance);
    c.provenance.emplace_back("I(-nu*Delta)", i_minus);
    c.provenance.emplace_back("I(+nu*Delta)", i_plus);

    // The d_mm^2 - d_pp^2 coefficient of I(0) in sigma vanishes identically;
    // only phi's d_pp^2 I(0) term survives, and only off the symmetric point.
    double i_zero = 0.0;
    if (eig.epsilon != 0.0) {
        i_zero = spectral::hilbert_pv(j, 0.0, q);
        c.provenance.emplace_back("I(0)", i_zero);
    }
    c.phi = inv_nu2 * i_minus + eig.d_pp * eig.d_pp * i_zero;
    return c;
}

LimitCoefficients coefficients_finite_temperature(const model::Eigensystem& eig,
                                                  const spectral::SpectralDensity& j,
                                                  double beta,
                                                  const spectral::QuadratureSettings& q) {
    const auto th = spectral::thermal_split(j, beta);  // validates beta > 0
    const double nud = eig.nu_delta();
    const double inv_nu2 = 1.0 / (eig.nu * eig.nu);

    LimitCoefficients c;
    c.beta = beta;
    c.j_at_resonance = j(nud);

    const double jp = th.j_plus(nud);
    const double jm = th.j_minus(nud);
    c.gamma = kPi * inv_nu2 * (jp + jm);
    const double gamma_coth = kPi * inv_nu2 * c.j_at_resonance / std::tanh(0.5 * beta * nud);

    const double ip_minus = spectral::hilbert_pv_plus(th, -nud, q);
    const double ip_plus = spectral::hilbert_pv_plus(th, nud, q);
    const double im_minus = spectral::hilbert_pv_minus(th, -nud, q);
    const double im_plus = spectral::hilbert_pv_minus(th, nud, q);
    c.sigma = inv_nu2 * ((ip_minus - ip_plus) + (im_minus - im_plus));

    c.provenance.emplace_back("J(nu*Delta)", c.j_at_resonance);
    c.provenance.emplace_back("J+(nu*Delta)", jp);
    c.provenance.emplace_back("J-(nu*Delta)", jm);
    c.provenance.emplace_back("gamma_sum_form", c.gamma);
    c.provenance.emplace_back("gamma_coth_form", gamma_coth);
    // gamma(beta)/gamma(zero temperature)
    c.provenance.emplace_back("coth_ratio_vs_zero_T", 1.0 / std::tanh(0.5 * beta * nud));
    c.provenance.emplace_back("I+(-nu*Delta)", ip_minus);
    c.provenance.emplace_back("I+(+nu*Delta)", ip_plus);
    c.provenance.emplace_back("I-(-nu*Delta)", im_minus);
    c.provenance.emplace_back("I-(+nu*Delta)", im_plus);

    double i0_sum = 0.0;
    if (eig.epsilon != 0.0) {
        if (!j.vanishes_superlinearly_at_zero()) {
            throw DivergentIntegral(
                "coefficients_finite_temperature: I_pm(0) requires J(w)/w -> 0 "
                "at w -> 0+; the density vanishes at most linearly");
        }
        const double i0p = spectral::hilbert_pv_plus(th, 0.0, q);
        const double i0m = spectral::hilbert_pv_minus(th, 0.0, q);
        i0_sum = i0p + i0m;
        c.provenance.emplace_back("I+(0)", i0p);
        c.provenance.emplace_back("I-(0)", i0m);
    }
    c.phi = inv_nu2 * ip_minus + eig.d_pp * eig.d_pp * i0_sum;
    return c;
}

double default_gamma_tol(const model::Eigensystem& eig, const spectral::SpectralDensity& j) {
    return 1e-12 * std::max(1.0, kPi * j.sup_value() / (eig.nu * eig.nu));
}

double default_omega_tol(const model::Eigensystem& eig) { return 1e-8 * eig.nu_delta(); }

RegimeReport classify_regime(const LimitCoefficients& c, const model::Eigensystem& eig,
                             double gamma_tol, double omega_tol) {
    RegimeReport r;
    r.gamma = c.gamma;
    r.effective_frequency = c.sigma - eig.nu_delta();
    r.gamma_tol = gamma_tol;
    r.omega_tol = omega_tol;
    r.j_at_nu_delta = c.j_at_resonance;
    r.off_resonance = c.j_at_resonance == 0.0;
    const bool no_damping = c.gamma < gamma_tol;
    const bool no_oscillation = std::abs(r.effective_frequency) < omega_tol;
    if (no_damping && no_oscillation) {
        r.regime = Regime::Frozen;
    } else if (no_damping) {
        r.regime = Regime::PureOscillation;
    } else if (no_oscillation) {
        r.regime = Regime::PureDamping;
    } else {
        r.regime = Regime::DampedOscillation;
    }
    return r;
}

double solve_damping_condition(const spectral::SpectralDensity& unit_family,
                               const model::Eigensystem& eig,
                               std::pair<double, double> bracket,
                               const spectral::QuadratureSettings& q) {
    const double target = eig.nu_delta();
    const double sigma_unit = sigma_of(eig, unit_family, q);
    if (!(sigma_unit > 0.0)) {
        std::ostringstream msg;
        msg << "NoSolution: sigma_unit <= 0 (sigma_unit = " << sigma_unit
            << "); no positive amplitude satisfies sigma(alpha) = nu*Delta";
        throw NoSolution(msg.str());
    }

    constexpr double kResidualTol = 1e-8;
    double alpha;
    if (unit_family.is_table()) {
        // Bisection on sigma(alpha) - target, expanding the bracket as needed.
        auto f = [&](double a) { return sigma_of(eig, unit_family.scaled(a), q) - target; };
        double lo = std::max(bracket.first, 0.0);
        double hi = std::max(bracket.second, lo + 1e-12);
        for (int i = 0; i < 120 && f(lo) > 0.0 && lo > 0.0; ++i) lo *= 0.5;
        for (int i = 0; i < 120 && f(hi) < 0.0; ++i) hi *= 2.0;
        double f_mid = 0.0;
        for (int i = 0; i < 200; ++i) {
            alpha = 0.5 * (lo + hi);
            f_mid = f(alpha);
            if (std::abs(f_mid) < kResidualTol) break;
            (f_mid < 0.0 ? lo : hi) = alpha;
        }
        alpha = 0.5 * (lo + hi);
    } else {
        // sigma is linear in the amplitude for fixed-shape families.
        alpha = target / sigma_unit;
    }

    const double residual = std::abs(sigma_of(eig, unit_family.scaled(alpha), q) - target);
    if (!(residual < kResidualTol)) {
        std::ostringstream msg;
        msg << "solve_damping_condition: residual " << residual << " exceeds " << kResidualTol;
        throw NonConvergence(msg.str());
    }
    return alpha;
}

}  // namespace spinboson::limits
