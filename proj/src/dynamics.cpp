#include "spinboson/dynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace spinboson::dynamics {

namespace {
const Complex kI{0.0, 1.0};

void require_nonnegative_time(double t, const char* who) {
    if (!(t >= 0.0)) {
        throw std::invalid_argument(std::string(who) +
                                    ": the limit dynamics is defined for t >= 0");
    }
}
}  // namespace

SpinState SpinState::up() { return SpinState{(Vector2() << 1.0, 0.0).finished(), Basis::SigmaZ}; }

SpinState SpinState::down() { return SpinState{(Vector2() << 0.0, 1.0).finished(), Basis::SigmaZ}; }

SpinState SpinState::plus() {
    const double r = 1.0 / std::sqrt(2.0);
    return SpinState{(Vector2() << r, r).finished(), Basis::SigmaZ};
}

SpinState SpinState::normalized(Complex a0, Complex a1, Basis basis) {
    Vector2 v;
    v << a0, a1;
    const double n = v.norm();
    if (!(n > 0.0)) throw std::invalid_argument("SpinState: zero state vector");
    return SpinState{v / n, basis};
}

double SpinState::norm() const { return amplitudes.norm(); }

SpinState SpinState::in_energy_basis(const model::Eigensystem& eig) const {
    if (basis == Basis::Energy) return *this;
    Vector2 v;
    v << eig.e_plus.dot(amplitudes), eig.e_minus.dot(amplitudes);
    return SpinState{v, Basis::Energy};
}

SpinOperator vacuum_evolution(const limits::LimitCoefficients& c, double t) {
    require_nonnegative_time(t, "vacuum_evolution");
    const Complex global = std::exp(-kI * c.phi * t);
    Matrix2 m = Matrix2::Zero();
    m(0, 0) = global;
    m(1, 1) = global * std::exp(-(c.gamma + kI * c.sigma) * t);
    return SpinOperator(m);
}

Complex vacuum_evolution_trace(const limits::LimitCoefficients& c, double t) {
    require_nonnegative_time(t, "vacuum_evolution_trace");
    return std::exp(-(c.gamma + kI * (c.sigma + c.phi)) * t);
}

SpinOperator p_operator(const limits::LimitCoefficients& c, const model::Eigensystem& eig,
                        double t) {
    require_nonnegative_time(t, "p_operator");
    const double omega = c.sigma - eig.nu_delta();
    const double decay = std::exp(-c.gamma * t);
    Matrix2 m;
    m(1, 0) = decay / eig.nu * std::exp(kI * omega * t);   // coefficient of D^+
    m(0, 1) = std::conj(m(1, 0));
    m(0, 0) = eig.d_pp;
    m(1, 1) = eig.d_pp + (eig.d_mm - eig.d_pp) * decay * decay;
    return SpinOperator(m);
}

double p_scalar(const limits::LimitCoefficients& c, const model::Eigensystem& eig,
                const SpinState& psi, double t) {
    return p_complex(c, eig, psi, t).real();
}

Complex p_complex(const limits::LimitCoefficients& c, const model::Eigensystem& eig,
                  const SpinState& psi, double t) {
    const SpinState e = psi.in_energy_basis(eig);
    const Matrix2 m = p_operator(c, eig, t).entries;
    const double diag = m(0, 0).real() * std::norm(e.amplitudes(0)) +
                        m(1, 1).real() * std::norm(e.amplitudes(1));
    const Complex cross = 2.0 * std::conj(e.amplitudes(0)) * m(0, 1) * e.amplitudes(1);
    return diag + cross;
}

CorrelatorResult correlator(const limits::LimitCoefficients& c, const model::Eigensystem& eig,
                            double t) {
    require_nonnegative_time(t, "correlator");
    const Matrix2 pt = p_operator(c, eig, t).entries;
    const Matrix2 p0 = p_operator(c, eig, 0.0).entries;

    CorrelatorResult out;
    out.anticommutator = SpinOperator(0.5 * (pt * p0 + p0 * pt));

    const double inv_nu = 1.0 / eig.nu;
    const Matrix2 d = model::d_op().entries;
    const Matrix2 ddag = model::d_dag().entries;
    const double decay = std::exp(-c.gamma * t);
    const Complex head = 0.5 * std::exp(-(c.gamma + kI * (c.sigma + eig.nu_delta())) * t);
    Matrix2 first = head * (inv_nu * inv_nu * Matrix2::Identity() +
                            inv_nu * (eig.d_pp + eig.d_mm) * d);
    first += first.adjoint().eval();
    Matrix2 second = eig.d_pp * (inv_nu * (d + ddag) + eig.d_pp * model::dd_dag().entries +
                                 eig.d_mm * model::d_dag_d().entries);
    Matrix2 third = (eig.d_mm - eig.d_pp) * decay * decay *
                    (inv_nu * (d + ddag) + 2.0 * eig.d_mm * model::d_dag_d().entries);
    out.expanded = SpinOperator(first + second + third);

    out.max_abs_difference =
        (out.anticommutator.entries - out.expanded.entries).cwiseAbs().maxCoeff();
    return out;
}

CorrelatorTrace correlator_trace(const limits::LimitCoefficients& c,
                                 const model::Eigensystem& eig, double t) {
    require_nonnegative_time(t, "correlator_trace");
    const Matrix2 pt = p_operator(c, eig, t).entries;
    const Matrix2 p0 = p_operator(c, eig, 0.0).entries;
    CorrelatorTrace out;
    out.anticommutator = (pt * p0).trace().real();
    const double inv_nu2 = 1.0 / (eig.nu * eig.nu);
    const double decay = std::exp(-c.gamma * t);
    out.expanded = 2.0 * inv_nu2 * decay * std::cos((c.sigma + eig.nu_delta()) * t) +
                  2.0 * decay * decay * (eig.d_mm - eig.d_pp) * eig.d_mm;
    out.difference = out.anticommutator - out.expanded;
    return out;
}

double p_scalar_corotating(const limits::LimitCoefficients& c, const model::Eigensystem& eig,
                           const SpinState& psi, double t_limit, double t_physical) {
    require_nonnegative_time(t_limit, "p_scalar_corotating");
    const SpinState e = psi.in_energy_basis(eig);
    const double decay = std::exp(-c.gamma * t_limit);
    const Complex dplus_coef =
        decay / eig.nu * std::exp(-kI * (eig.nu_delta() * t_physical + c.sigma * t_limit));
    const double p_pp = eig.d_pp;
    const double p_mm = eig.d_pp + (eig.d_mm - eig.d_pp) * decay * decay;
    const double diag =
        p_pp * std::norm(e.amplitudes(0)) + p_mm * std::norm(e.amplitudes(1));
    const Complex cross =
        2.0 * std::conj(e.amplitudes(0)) * std::conj(dplus_coef) * e.amplitudes(1);
    return diag + cross.real();
}

TimeSeries sample_series(Observable obs, const limits::LimitCoefficients& c,
                         const model::Eigensystem& eig, const std::optional<SpinState>& psi,
                         const std::vector<double>& grid) {
    if (grid.empty()) throw std::invalid_argument("sample_series: empty grid");
    if (!(grid.front() >= 0.0)) {
        throw std::invalid_argument("sample_series: grid must be nonnegative");
    }
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        if (!(grid[i + 1] > grid[i])) {
            throw std::invalid_argument("sample_series: grid must be strictly increasing");
        }
    }
    if (obs == Observable::PScalar && !psi.has_value()) {
        throw std::invalid_argument("sample_series: PScalar requires an initial state");
    }
    TimeSeries out;
    out.grid = grid;
    out.values.reserve(grid.size());
    switch (obs) {
        case Observable::UTrace:
            out.observable = "tr_U";
            for (double t : grid) out.values.push_back(vacuum_evolution_trace(c, t));
            break;
        case Observable::PScalar:
            out.observable = "p";
            for (double t : grid) out.values.push_back(p_complex(c, eig, *psi, t));
            break;
        case Observable::CTrace:
            out.observable = "tr_C";
            for (double t : grid) {
                out.values.push_back(Complex(correlator_trace(c, eig, t).anticommutator, 0.0));
            }
            break;
    }
    return out;
}

}  // namespace spinboson::dynamics
