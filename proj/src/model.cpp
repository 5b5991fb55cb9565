#include "spinboson/model.hpp"

#include <cmath>

namespace spinboson::model {

namespace {
const Complex kI{0.0, 1.0};
}

SpinOperator d_op() {
    Matrix2 m = Matrix2::Zero();
    m(0, 1) = 1.0;
    return SpinOperator(m);
}

SpinOperator d_dag() {
    Matrix2 m = Matrix2::Zero();
    m(1, 0) = 1.0;
    return SpinOperator(m);
}

SpinOperator dd_dag() {
    Matrix2 m = Matrix2::Zero();
    m(0, 0) = 1.0;
    return SpinOperator(m);
}

SpinOperator d_dag_d() {
    Matrix2 m = Matrix2::Zero();
    m(1, 1) = 1.0;
    return SpinOperator(m);
}

SpinOperator identity_op() { return SpinOperator(Matrix2::Identity()); }

Eigensystem eigensystem(const SystemParams& params) {
    if (!(params.delta > 0.0)) {
        throw std::invalid_argument("eigensystem: delta must be > 0");
    }
    if (!std::isfinite(params.epsilon) || !std::isfinite(params.delta)) {
        throw std::invalid_argument("eigensystem: epsilon and delta must be finite");
    }

    Eigensystem eig;
    eig.epsilon = params.epsilon;
    eig.delta = params.delta;

    const double r = params.epsilon / params.delta;
    eig.nu = std::hypot(1.0, r);

    // Form the larger-magnitude root by addition (no cancellation), the other
    // as its exact negative reciprocal, so mu_+ mu_- = -1 holds exactly.
    if (r >= 0.0) {
        eig.mu_plus = r + eig.nu;
        eig.mu_minus = -1.0 / eig.mu_plus;
    } else {
        eig.mu_minus = r - eig.nu;
        eig.mu_plus = -1.0 / eig.mu_minus;
    }

    eig.lambda_plus = 0.5 * params.delta * eig.nu;
    eig.lambda_minus = -eig.lambda_plus;

    // |e_pm> = (1, mu_mp)^T / sqrt(1 + mu_mp^2); first component real > 0.
    const double np = std::hypot(1.0, eig.mu_minus);
    const double nm = std::hypot(1.0, eig.mu_plus);
    eig.e_plus << Complex(1.0 / np, 0.0), Complex(eig.mu_minus / np, 0.0);
    eig.e_minus << Complex(1.0 / nm, 0.0), Complex(eig.mu_plus / nm, 0.0);

    const double mp2 = eig.mu_plus * eig.mu_plus;
    const double mm2 = eig.mu_minus * eig.mu_minus;
    eig.d_pp = (1.0 - mm2) / (1.0 + mm2);
    eig.d_mm = (1.0 - mp2) / (1.0 + mp2);
    eig.d_pm = 1.0 / eig.nu;
    return eig;
}

Matrix2 sigma_z_in_eigenbasis(const Eigensystem& eig) {
    Matrix2 sz;
    sz << 1.0, 0.0, 0.0, -1.0;
    Matrix2 u;  // columns are the eigenvectors in the sigma_z basis
    u.col(0) = eig.e_plus;
    u.col(1) = eig.e_minus;
    return u.adjoint() * sz * u;
}

SpinOperator sigma_z_heisenberg(const Eigensystem& eig, double t) {
    const double inv_nu = 1.0 / eig.nu;
    const double phase = t * eig.nu_delta();
    Matrix2 m;
    m(0, 0) = eig.d_pp;
    m(1, 1) = eig.d_mm;
    m(0, 1) = inv_nu * std::exp(kI * phase);
    m(1, 0) = inv_nu * std::exp(-kI * phase);
    return SpinOperator(m);
}

JumpOperators jump_operators(const Eigensystem& eig) {
    const double inv_nu = 1.0 / eig.nu;
    JumpOperators out;
    out.ops[0] = SpinOperator(inv_nu * d_op().entries);
    Matrix2 d2 = Matrix2::Zero();
    d2(0, 0) = eig.d_pp;
    d2(1, 1) = eig.d_mm;
    out.ops[1] = SpinOperator(d2);
    out.ops[2] = SpinOperator(inv_nu * d_dag().entries);
    out.omega_offsets = {-eig.nu_delta(), 0.0, eig.nu_delta()};
    return out;
}

Matrix2 to_sigma_z_basis(const SpinOperator& op, const Eigensystem& eig) {
    Matrix2 u;
    u.col(0) = eig.e_plus;
    u.col(1) = eig.e_minus;
    return u * op.entries * u.adjoint();
}

}  // namespace spinboson::model
