#include <cmath>
#include <random>

#include <doctest.h>

#include "spinboson/model.hpp"

using namespace spinboson;
using model::Matrix2;

namespace {
const std::complex<double> kI{0.0, 1.0};
}

TEST_CASE("eigensystem: symmetric wells") {
    const auto eig = model::eigensystem({0.0, 1.0});
    CHECK(eig.nu == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(eig.mu_plus == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(eig.mu_minus == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(eig.lambda_plus == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(eig.lambda_minus == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(eig.d_pp == 0.0);
    CHECK(eig.d_mm == 0.0);
    CHECK(eig.d_pm == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("eigensystem: biased case epsilon = delta = 1") {
    const auto eig = model::eigensystem({1.0, 1.0});
    const double rt2 = std::sqrt(2.0);
    CHECK(eig.nu == doctest::Approx(rt2).epsilon(1e-15));
    CHECK(eig.mu_plus == doctest::Approx(1.0 + rt2).epsilon(1e-15));
    CHECK(eig.mu_minus == doctest::Approx(1.0 - rt2).epsilon(1e-14));
    CHECK(eig.lambda_plus == doctest::Approx(rt2 / 2.0).epsilon(1e-15));
    CHECK(eig.lambda_minus == doctest::Approx(-rt2 / 2.0).epsilon(1e-15));
}

TEST_CASE("eigensystem: rejects delta <= 0") {
    CHECK_THROWS_AS(model::eigensystem({0.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(model::eigensystem({0.0, -1.0}), std::invalid_argument);
}

TEST_CASE("eigensystem: algebraic identities over random parameters") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> eps(-5.0, 5.0);
    std::uniform_real_distribution<double> del(0.1, 10.0);
    for (int i = 0; i < 500; ++i) {
        const auto eig = model::eigensystem({eps(rng), del(rng)});
        CHECK(eig.mu_plus * eig.mu_minus == doctest::Approx(-1.0).epsilon(1e-12));
        const double r = eig.epsilon / eig.delta;
        CHECK(eig.nu * eig.nu - r * r == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(eig.d_pp == doctest::Approx(-eig.d_mm).epsilon(1e-13));
        CHECK(eig.d_pp * eig.d_pp + eig.d_pm * eig.d_pm <= 1.0 + 1e-12);
        // orthonormal with the first components real positive
        CHECK(std::abs(eig.e_plus.dot(eig.e_minus)) < 1e-14);
        CHECK(eig.e_plus.norm() == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(eig.e_minus.norm() == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(eig.e_plus(0).real() > 0.0);
        CHECK(eig.e_minus(0).real() > 0.0);
        CHECK(eig.e_plus(0).imag() == 0.0);
    }
}

TEST_CASE("eigensystem: extreme bias stays exact") {
    const auto eig = model::eigensystem({1e8, 1.0});
    CHECK(eig.mu_plus * eig.mu_minus == -1.0);  // exact by construction
    CHECK(eig.nu > 1e7);
    CHECK(std::abs(eig.e_plus.dot(eig.e_minus)) < 1e-14);
}

TEST_CASE("eigenvectors diagonalize H_S") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> eps(-3.0, 3.0);
    std::uniform_real_distribution<double> del(0.2, 4.0);
    for (int i = 0; i < 50; ++i) {
        const auto eig = model::eigensystem({eps(rng), del(rng)});
        Matrix2 hs;
        hs << 0.5 * eig.epsilon, -0.5 * eig.delta, -0.5 * eig.delta, -0.5 * eig.epsilon;
        CHECK((hs * eig.e_plus - eig.lambda_plus * eig.e_plus).norm() < 1e-12 * eig.nu_delta());
        CHECK((hs * eig.e_minus - eig.lambda_minus * eig.e_minus).norm() <
              1e-12 * eig.nu_delta());
    }
}

TEST_CASE("sigma_z_heisenberg at t = 0 reconstructs sigma_z in the eigenbasis") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> eps(-4.0, 4.0);
    std::uniform_real_distribution<double> del(0.1, 5.0);
    for (int i = 0; i < 100; ++i) {
        const auto eig = model::eigensystem({eps(rng), del(rng)});
        const Matrix2 direct = model::sigma_z_in_eigenbasis(eig);
        const Matrix2 closed = model::sigma_z_heisenberg(eig, 0.0).entries;
        CHECK((direct - closed).cwiseAbs().maxCoeff() < 1e-13);
    }
}

TEST_CASE("sigma_z_heisenberg: epsilon = 0 gives pure off-diagonal phases") {
    const auto eig = model::eigensystem({0.0, 1.0});
    const double t = 0.7;
    const auto op = model::sigma_z_heisenberg(eig, t);
    CHECK(std::abs(op.entries(0, 0)) == 0.0);
    CHECK(std::abs(op.entries(1, 1)) == 0.0);
    CHECK(std::abs(op.entries(0, 1) - std::exp(kI * t)) < 1e-15);
    CHECK(std::abs(op.entries(1, 0) - std::exp(-kI * t)) < 1e-15);
}

TEST_CASE("sigma_z_heisenberg: Hermitian with eigenvalues +-1") {
    std::mt19937 rng(19);
    std::uniform_real_distribution<double> eps(-4.0, 4.0);
    std::uniform_real_distribution<double> del(0.1, 5.0);
    std::uniform_real_distribution<double> time(0.0, 20.0);
    for (int i = 0; i < 100; ++i) {
        const auto eig = model::eigensystem({eps(rng), del(rng)});
        const auto op = model::sigma_z_heisenberg(eig, time(rng));
        CHECK(op.is_hermitian(1e-14));
        Eigen::SelfAdjointEigenSolver<Matrix2> solver(op.entries);
        CHECK(solver.eigenvalues()(0) == doctest::Approx(-1.0).epsilon(1e-12));
        CHECK(solver.eigenvalues()(1) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("jump operators: offsets, pairing and special cases") {
    const auto eig = model::eigensystem({0.8, 1.3});
    const auto jumps = model::jump_operators(eig);
    const double nud = eig.nu_delta();
    CHECK(jumps.omega_offsets[0] == doctest::Approx(-nud).epsilon(1e-15));
    CHECK(jumps.omega_offsets[1] == 0.0);
    CHECK(jumps.omega_offsets[2] == doctest::Approx(nud).epsilon(1e-15));
    // D1 and D3 are adjoints of each other (down vs up transition)
    CHECK((jumps.ops[0].adjoint().entries - jumps.ops[2].entries).cwiseAbs().maxCoeff() == 0.0);
    // D2 is Hermitian and diagonal
    CHECK(jumps.ops[1].is_hermitian(1e-15));
    CHECK(std::abs(jumps.ops[1].entries(0, 1)) == 0.0);

    const auto sym = model::jump_operators(model::eigensystem({0.0, 2.0}));
    CHECK(sym.ops[1].entries.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("jump operators reconstruct the heisenberg evolution") {
    std::mt19937 rng(29);
    std::uniform_real_distribution<double> eps(-4.0, 4.0);
    std::uniform_real_distribution<double> del(0.1, 5.0);
    std::uniform_real_distribution<double> time(0.0, 10.0);
    for (int i = 0; i < 50; ++i) {
        const auto eig = model::eigensystem({eps(rng), del(rng)});
        const auto jumps = model::jump_operators(eig);
        const double t = time(rng);
        Matrix2 rebuilt = Matrix2::Zero();
        for (int a = 0; a < 3; ++a) {
            rebuilt += jumps.ops[a].entries * std::exp(-kI * jumps.omega_offsets[a] * t);
        }
        const Matrix2 direct = model::sigma_z_heisenberg(eig, t).entries;
        CHECK((rebuilt - direct).cwiseAbs().maxCoeff() < 1e-14);
    }
}

TEST_CASE("to_sigma_z_basis round trip") {
    const auto eig = model::eigensystem({1.5, 0.7});
    const Matrix2 back = model::to_sigma_z_basis(
        model::SpinOperator(model::sigma_z_in_eigenbasis(eig)), eig);
    Matrix2 sz;
    sz << 1.0, 0.0, 0.0, -1.0;
    CHECK((back - sz).cwiseAbs().maxCoeff() < 1e-14);
}
