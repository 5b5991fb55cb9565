// oracle.hpp — Brute-force validation of the stochastic limit: exact
// Schrodinger propagation of the full spin-boson Hamiltonian with a
// discretized, Fock-truncated bath, evaluated at rescaled time t/lambda^2 and
// compared against the closed-form limit dynamics of that bath.

#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "spinboson/dynamics.hpp"
#include "spinboson/limits.hpp"
#include "spinboson/model.hpp"
#include "spinboson/spectral.hpp"

namespace spinboson::oracle {

using model::Complex;

// Uniform midpoint discretization of (0, omega_max]: w_j = (j + 1/2) dw,
// g_j^2 = J(w_j) dw, with a per-mode Fock cap n_max.
struct DiscretizedBath {
    std::vector<double> frequencies;
    std::vector<double> couplings;
    int fock_truncation{1};
    double omega_max{0.0};

    std::size_t modes() const { return frequencies.size(); }
    double delta_omega() const { return omega_max / static_cast<double>(modes()); }
    // Finite-size revivals appear at 2 pi / delta_omega; rescaled runs must
    // stay strictly below this horizon.
    double recurrence_time() const;
    std::size_t bath_dim() const;  // (n_max + 1)^M
};

DiscretizedBath discretize_bath(const spectral::SpectralDensity& j, int modes,
                                double omega_max, int n_max,
                                std::size_t dim_budget = 20000);

// Sparse real-symmetric H = -D/2 sx + e/2 sz + sum w_j a_j^+ a_j
//                           + lambda sz sum g_j (a_j + a_j^+),
// stored CSR. State layout: index = s * K + k with s = 0 (spin up), 1 (down)
// and k the little-endian base-(n_max+1) occupation code, K = (n_max+1)^M.
class BathHamiltonian {
  public:
    std::size_t dim() const { return dim_; }
    std::size_t spin_block() const { return dim_ / 2; }
    void apply(const Complex* x, Complex* y) const;  // y = H x
    double norm_bound() const;                       // Gershgorin row bound
    Eigen::MatrixXd to_dense() const;                // small systems / tests

    // <psi|sigma_z (x) 1|psi> and <psi|H|psi> for a state in this layout.
    double sigma_z_expectation(const Eigen::VectorXcd& psi) const;
    double energy_expectation(const Eigen::VectorXcd& psi) const;

  private:
    friend BathHamiltonian build_hamiltonian(const model::SystemParams&,
                                             const DiscretizedBath&, double);
    std::size_t dim_{0};
    std::vector<std::size_t> row_start_;
    std::vector<std::size_t> col_;
    std::vector<double> val_;
};

BathHamiltonian build_hamiltonian(const model::SystemParams& params,
                                  const DiscretizedBath& bath, double lambda);

// Fixed-step RK4 with step halving until the terminal <sigma_z> moves by
// less than halving_tolerance; dt <= 0 picks 0.015 / ||H|| automatically.
struct StepControl {
    double dt{0.0};
    double halving_tolerance{1e-6};
    int max_halvings{6};
};

struct Trajectory {
    std::vector<double> times;
    std::vector<Eigen::VectorXcd> states;
    double norm_drift{0.0};    // max | ||psi|| - 1 |
    double energy_drift{0.0};  // max |<H> - <H>_0|
    double dt_used{0.0};
};

Trajectory evolve_exact(const BathHamiltonian& h, const Eigen::VectorXcd& psi0,
                        const std::vector<double>& sample_times,
                        const StepControl& control = {});

// The stochastic-limit coefficients of the fixed discretized bath itself:
// gamma = 0 off resonance and sigma, phi are the mode sums of the
// principal-value transforms. This is the lambda -> 0 target of the rescaled
// dynamics at fixed bath.
limits::LimitCoefficients bath_limit_coefficients(const DiscretizedBath& bath,
                                                  const model::Eigensystem& eig);

struct OracleRun {
    double lambda{0.0};
    std::vector<double> t_limit;
    std::vector<double> t_physical;
    std::vector<double> sigma_z_raw;
    std::vector<double> p_limit;
    std::vector<double> abs_error;
    double sup_error{0.0};
    double norm_drift{0.0};
    double energy_drift{0.0};
    limits::LimitCoefficients bath_coefficients;
};

// Full-model <sigma_z> at physical times t/lambda^2 for spin-up (x) vacuum,
// compared against p_scalar_corotating with the bath's own coefficients.
// Throws RecurrenceHorizon when the physical horizon reaches the bath
// recurrence time.
OracleRun sigma_z_expectation_rescaled(const model::SystemParams& params,
                                       const DiscretizedBath& bath, double lambda,
                                       const std::vector<double>& limit_grid,
                                       const StepControl& control = {});

struct ConvergenceRow {
    double lambda;
    double sup_error;
};

struct ConvergenceStudy {
    std::vector<ConvergenceRow> rows;
    bool monotone{false};  // sup_error strictly decreasing along lambda_list
    std::vector<OracleRun> runs;
};

// lambda_list must be strictly decreasing.
ConvergenceStudy convergence_study(const model::SystemParams& params,
                                   const DiscretizedBath& bath,
                                   const std::vector<double>& lambda_list,
                                   const std::vector<double>& limit_grid,
                                   const StepControl& control = {});

}  // namespace spinboson::oracle
