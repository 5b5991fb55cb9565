// model.hpp — Exact two-level algebra: eigensystem of H_S, interaction-picture
// decomposition of sigma_z, and the jump operators of the limit equation.

#pragma once

#include <array>
#include <complex>

#include <Eigen/Dense>

#include "spinboson/errors.hpp"

namespace spinboson::model {

using Complex = std::complex<double>;
using Matrix2 = Eigen::Matrix2cd;
using Vector2 = Eigen::Vector2cd;

// Bare parameters of H_S = -(Delta/2) sigma_x + (epsilon/2) sigma_z.
// lambda is the system-bath coupling, consumed by the oracle only.
struct SystemParams {
    double epsilon{0.0};
    double delta{1.0};
    double lambda{0.0};
};

// Derived two-level quantities. The pair (mu_plus, mu_minus) is computed so
// that mu_plus * mu_minus == -1 holds exactly in floating point: the
// well-conditioned root is formed as r +- nu and the other as its negative
// reciprocal.
struct Eigensystem {
    double epsilon{};
    double delta{};
    double nu{};            // sqrt(1 + (epsilon/delta)^2) >= 1
    double mu_plus{};       // epsilon/delta + nu
    double mu_minus{};      // epsilon/delta - nu == -1/mu_plus
    double lambda_plus{};   // +delta*nu/2
    double lambda_minus{};  // -delta*nu/2
    Vector2 e_plus;         // eigenvectors in the sigma_z basis, first entry real > 0
    Vector2 e_minus;
    double d_pp{};          // <e+|sigma_z|e+> = (1 - mu_-^2)/(1 + mu_-^2)
    double d_mm{};          // <e-|sigma_z|e-> = (1 - mu_+^2)/(1 + mu_+^2) = -d_pp
    double d_pm{};          // <e+|sigma_z|e-> = 1/nu

    double nu_delta() const { return nu * delta; }
};

// 2x2 operator expressed in the energy eigenbasis {|e+>, |e->}. The basis is
// part of the type: every operator produced by this library lives in the
// eigenbasis; to_sigma_z_basis() is the one explicit way out.
struct SpinOperator {
    Matrix2 entries = Matrix2::Zero();

    SpinOperator() = default;
    explicit SpinOperator(const Matrix2& m) : entries(m) {}

    SpinOperator adjoint() const { return SpinOperator(entries.adjoint()); }
    bool is_hermitian(double tol = 1e-12) const {
        return (entries - entries.adjoint()).cwiseAbs().maxCoeff() <= tol;
    }
};

// D = |e+><e-|, the raising operator of the energy eigenbasis, and friends.
// In the eigenbasis these are constant matrices.
SpinOperator d_op();         // D
SpinOperator d_dag();        // D^+
SpinOperator dd_dag();       // D D^+   = |e+><e+|
SpinOperator d_dag_d();      // D^+ D   = |e-><e-|
SpinOperator identity_op();

// Eigen-decomposition of H_S. Rejects delta <= 0 (the model is stated for
// Delta > 0); epsilon and the ratio epsilon/delta may be arbitrarily large.
Eigensystem eigensystem(const SystemParams& params);

// sigma_z rotated into the eigenbasis by explicit basis change; used as an
// independent cross-check of the closed-form matrix elements.
Matrix2 sigma_z_in_eigenbasis(const Eigensystem& eig);

// Free Heisenberg evolution of sigma_z at time t:
//   sigma_z(t) = d_pp DD^+ + d_mm D^+D
//              + e^{+i t nu Delta} D / nu + e^{-i t nu Delta} D^+ / nu.
// Hermitian with eigenvalues {+1, -1} for every t.
SpinOperator sigma_z_heisenberg(const Eigensystem& eig, double t);

// The three spectral channels of the coupling: down / zero / up transitions
// with frequency offsets (-nu Delta, 0, +nu Delta). The reconstruction
//   sigma_z(t) = sum_a D_a e^{-i t offset_a}
// holds entrywise.
struct JumpOperators {
    std::array<SpinOperator, 3> ops;       // D1, D2, D3
    std::array<double, 3> omega_offsets;   // -nu*Delta, 0, +nu*Delta
};
JumpOperators jump_operators(const Eigensystem& eig);

// Express an eigenbasis operator back in the sigma_z basis.
Matrix2 to_sigma_z_basis(const SpinOperator& op, const Eigensystem& eig);

}  // namespace spinboson::model
