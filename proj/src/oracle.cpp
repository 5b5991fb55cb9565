#include "spinboson/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace spinboson::oracle {

namespace {
const Complex kI{0.0, 1.0};
}

double DiscretizedBath::recurrence_time() const {
    return 2.0 * std::numbers::pi / delta_omega();
}

std::size_t DiscretizedBath::bath_dim() const {
    std::size_t k = 1;
    for (std::size_t j = 0; j < modes(); ++j) {
        k *= static_cast<std::size_t>(fock_truncation + 1);
    }
    return k;
}

DiscretizedBath discretize_bath(const spectral::SpectralDensity& j, int modes,
                                double omega_max, int n_max, std::size_t dim_budget) {
    if (modes < 1) throw std::invalid_argument("discretize_bath: modes must be >= 1");
    if (!(omega_max > 0.0)) throw std::invalid_argument("discretize_bath: omega_max must be > 0");
    if (n_max < 1) throw std::invalid_argument("discretize_bath: n_max must be >= 1");

    const double dim_d = 2.0 * std::pow(double(n_max + 1), double(modes));
    if (dim_d > double(dim_budget)) {
        std::ostringstream msg;
        msg << "discretize_bath: state dimension 2*(n_max+1)^M = " << dim_d
            << " exceeds the budget of " << dim_budget << " amplitudes";
        throw DimensionBudgetExceeded(msg.str());
    }

    DiscretizedBath bath;
    bath.omega_max = omega_max;
    bath.fock_truncation = n_max;
    const double dw = omega_max / modes;
    bath.frequencies.resize(modes);
    bath.couplings.resize(modes);
    for (int k = 0; k < modes; ++k) {
        const double w = (k + 0.5) * dw;
        bath.frequencies[k] = w;
        bath.couplings[k] = std::sqrt(j(w) * dw);
    }
    return bath;
}

BathHamiltonian build_hamiltonian(const model::SystemParams& params,
                                  const DiscretizedBath& bath, double lambda) {
    const int n_max = bath.fock_truncation;
    const int levels = n_max + 1;
    const std::size_t m = bath.modes();
    const std::size_t k_dim = bath.bath_dim();
    const std::size_t dim = 2 * k_dim;

    std::vector<std::size_t> strides(m);
    std::size_t s = 1;
    for (std::size_t j = 0; j < m; ++j) {
        strides[j] = s;
        s *= levels;
    }

    std::vector<double> bath_energy(k_dim, 0.0);
    std::vector<int> occ(m);
    for (std::size_t k = 0; k < k_dim; ++k) {
        double e = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            occ[j] = int((k / strides[j]) % levels);
            e += occ[j] * bath.frequencies[j];
        }
        bath_energy[k] = e;
    }

    BathHamiltonian h;
    h.dim_ = dim;
    h.row_start_.assign(dim + 1, 0);
    // Row pattern: diagonal, sigma_x partner, and up to 2M coupling partners.
    h.col_.reserve(dim * (2 + 2 * m));
    h.val_.reserve(dim * (2 + 2 * m));

    for (std::size_t idx = 0; idx < dim; ++idx) {
        const int spin = idx < k_dim ? 0 : 1;  // 0 = up, 1 = down
        const double z = spin == 0 ? 1.0 : -1.0;
        const std::size_t k = idx - spin * k_dim;

        // columns are emitted in ascending order: build then sort
        std::vector<std::pair<std::size_t, double>> row;
        row.reserve(2 + 2 * m);
        row.emplace_back(idx, bath_energy[k] + 0.5 * params.epsilon * z);
        row.emplace_back(spin == 0 ? idx + k_dim : idx - k_dim, -0.5 * params.delta);
        if (lambda != 0.0) {
            for (std::size_t j = 0; j < m; ++j) {
                if (bath.couplings[j] == 0.0) continue;
                const int n = int((k / strides[j]) % levels);
                if (n > 0) {
                    row.emplace_back(idx - strides[j],
                                     lambda * z * bath.couplings[j] * std::sqrt(double(n)));
                }
                if (n + 1 < levels) {
                    row.emplace_back(idx + strides[j],
                                     lambda * z * bath.couplings[j] * std::sqrt(double(n + 1)));
                }
            }
        }
        std::sort(row.begin(), row.end());
        for (const auto& [c, v] : row) {
            h.col_.push_back(c);
            h.val_.push_back(v);
        }
        h.row_start_[idx + 1] = h.col_.size();
    }
    return h;
}

void BathHamiltonian::apply(const Complex* x, Complex* y) const {
    for (std::size_t i = 0; i < dim_; ++i) {
        Complex acc{0.0, 0.0};
        for (std::size_t p = row_start_[i]; p < row_start_[i + 1]; ++p) {
            acc += val_[p] * x[col_[p]];
        }
        y[i] = acc;
    }
}

double BathHamiltonian::norm_bound() const {
    double best = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
        double row = 0.0;
        for (std::size_t p = row_start_[i]; p < row_start_[i + 1]; ++p) {
            row += std::abs(val_[p]);
        }
        best = std::max(best, row);
    }
    return best;
}

Eigen::MatrixXd BathHamiltonian::to_dense() const {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(Eigen::Index(dim_), Eigen::Index(dim_));
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t p = row_start_[i]; p < row_start_[i + 1]; ++p) {
            m(Eigen::Index(i), Eigen::Index(col_[p])) += val_[p];
        }
    }
    return m;
}

double BathHamiltonian::sigma_z_expectation(const Eigen::VectorXcd& psi) const {
    const std::size_t k_dim = dim_ / 2;
    double acc = 0.0;
    for (std::size_t i = 0; i < k_dim; ++i) acc += std::norm(psi[Eigen::Index(i)]);
    for (std::size_t i = k_dim; i < dim_; ++i) acc -= std::norm(psi[Eigen::Index(i)]);
    return acc;
}

double BathHamiltonian::energy_expectation(const Eigen::VectorXcd& psi) const {
    Eigen::VectorXcd hp = Eigen::VectorXcd::Zero(Eigen::Index(dim_));
    apply(psi.data(), hp.data());
    return psi.dot(hp).real();
}

namespace {

Trajectory propagate_fixed(const BathHamiltonian& h, const Eigen::VectorXcd& psi0,
                           const std::vector<double>& sample_times, double dt) {
    const auto n = Eigen::Index(h.dim());
    Trajectory traj;
    traj.dt_used = dt;
    traj.times = sample_times;
    traj.states.reserve(sample_times.size());

    Eigen::VectorXcd psi = psi0, k1(n), k2(n), k3(n), k4(n), tmp(n);
    const double e0 = h.energy_expectation(psi0);
    double t = 0.0;
    auto rk4_step = [&](double step) {
        h.apply(psi.data(), k1.data());
        tmp = psi - kI * (0.5 * step) * k1;
        h.apply(tmp.data(), k2.data());
        tmp = psi - kI * (0.5 * step) * k2;
        h.apply(tmp.data(), k3.data());
        tmp = psi - kI * step * k3;
        h.apply(tmp.data(), k4.data());
        psi -= kI * (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    };
    for (double target : sample_times) {
        const double span = target - t;
        if (span > 0.0) {
            const int steps = std::max(1, int(std::ceil(span / dt)));
            const double step = span / steps;
            for (int i = 0; i < steps; ++i) rk4_step(step);
            t = target;
        }
        traj.states.push_back(psi);
        traj.norm_drift = std::max(traj.norm_drift, std::abs(psi.norm() - 1.0));
        traj.energy_drift =
            std::max(traj.energy_drift, std::abs(h.energy_expectation(psi) - e0));
    }
    return traj;
}

}  // namespace

Trajectory evolve_exact(const BathHamiltonian& h, const Eigen::VectorXcd& psi0,
                        const std::vector<double>& sample_times, const StepControl& control) {
    if (psi0.size() != Eigen::Index(h.dim())) {
        throw std::invalid_argument("evolve_exact: state dimension mismatch");
    }
    if (std::abs(psi0.norm() - 1.0) > 1e-8) {
        throw std::invalid_argument("evolve_exact: psi0 must be normalized");
    }
    if (sample_times.empty() || !(sample_times.front() >= 0.0)) {
        throw std::invalid_argument("evolve_exact: sample times must start at t >= 0");
    }
    for (std::size_t i = 0; i + 1 < sample_times.size(); ++i) {
        if (!(sample_times[i + 1] > sample_times[i])) {
            throw std::invalid_argument("evolve_exact: sample times must increase");
        }
    }

    double dt = control.dt > 0.0 ? control.dt : 0.015 / std::max(h.norm_bound(), 1e-12);
    Trajectory coarse = propagate_fixed(h, psi0, sample_times, dt);
    for (int halving = 0; halving <= control.max_halvings; ++halving) {
        dt *= 0.5;
        Trajectory fine = propagate_fixed(h, psi0, sample_times, dt);
        const double change = std::abs(h.sigma_z_expectation(fine.states.back()) -
                                       h.sigma_z_expectation(coarse.states.back()));
        if (change < control.halving_tolerance) return fine;
        coarse = std::move(fine);
    }
    throw StepControlFailure(
        "evolve_exact: step halving did not reach the terminal accuracy target");
}

limits::LimitCoefficients bath_limit_coefficients(const DiscretizedBath& bath,
                                                  const model::Eigensystem& eig) {
    const double nud = eig.nu_delta();
    const double inv_nu2 = 1.0 / (eig.nu * eig.nu);
    double i_minus = 0.0, i_plus = 0.0, i_zero = 0.0;
    for (std::size_t j = 0; j < bath.modes(); ++j) {
        const double g2 = bath.couplings[j] * bath.couplings[j];
        const double w = bath.frequencies[j];
        if (w == nud && g2 > 0.0) {
            throw Error(
                "bath_limit_coefficients: a discretized mode sits exactly at "
                "nu*Delta; the fixed-bath limit coefficients are undefined");
        }
        i_minus += g2 / (w + nud);
        i_plus += g2 / (w - nud);
        i_zero += g2 / w;
    }
    limits::LimitCoefficients c;
    c.gamma = 0.0;  // a finite mode set carries no density at the resonance
    c.sigma = inv_nu2 * (i_minus - i_plus);
    c.phi = inv_nu2 * i_minus + eig.d_pp * eig.d_pp * i_zero;
    c.j_at_resonance = 0.0;
    c.provenance.emplace_back("I_disc(-nu*Delta)", i_minus);
    c.provenance.emplace_back("I_disc(+nu*Delta)", i_plus);
    c.provenance.emplace_back("I_disc(0)", i_zero);
    return c;
}

OracleRun sigma_z_expectation_rescaled(const model::SystemParams& params,
                                       const DiscretizedBath& bath, double lambda,
                                       const std::vector<double>& limit_grid,
                                       const StepControl& control) {
    if (!(lambda > 0.0 && lambda <= 1.0)) {
        throw std::invalid_argument("sigma_z_expectation_rescaled: lambda must be in (0, 1]");
    }
    if (limit_grid.empty()) {
        throw std::invalid_argument("sigma_z_expectation_rescaled: empty limit grid");
    }
    const double tau_max = limit_grid.back() / (lambda * lambda);
    if (tau_max >= bath.recurrence_time()) {
        std::ostringstream msg;
        msg << "sigma_z_expectation_rescaled: physical horizon t/lambda^2 = " << tau_max
            << " reaches the bath recurrence time 2*pi/delta_omega = "
            << bath.recurrence_time() << "; refine the bath or shorten the grid";
        throw RecurrenceHorizon(msg.str());
    }

    const auto eig = model::eigensystem(params);
    OracleRun run;
    run.lambda = lambda;
    run.bath_coefficients = bath_limit_coefficients(bath, eig);
    run.t_limit = limit_grid;
    run.t_physical.reserve(limit_grid.size());
    for (double t : limit_grid) run.t_physical.push_back(t / (lambda * lambda));

    const auto h = build_hamiltonian(params, bath, lambda);
    Eigen::VectorXcd psi0 = Eigen::VectorXcd::Zero(Eigen::Index(h.dim()));
    psi0[0] = 1.0;  // spin-up (x) bath vacuum

    const auto traj = evolve_exact(h, psi0, run.t_physical, control);
    run.norm_drift = traj.norm_drift;
    run.energy_drift = traj.energy_drift;

    const auto up = dynamics::SpinState::up();
    for (std::size_t i = 0; i < limit_grid.size(); ++i) {
        run.sigma_z_raw.push_back(h.sigma_z_expectation(traj.states[i]));
        run.p_limit.push_back(dynamics::p_scalar_corotating(
            run.bath_coefficients, eig, up, limit_grid[i], run.t_physical[i]));
        run.abs_error.push_back(std::abs(run.sigma_z_raw[i] - run.p_limit[i]));
        run.sup_error = std::max(run.sup_error, run.abs_error[i]);
    }
    return run;
}

ConvergenceStudy convergence_study(const model::SystemParams& params,
                                   const DiscretizedBath& bath,
                                   const std::vector<double>& lambda_list,
                                   const std::vector<double>& limit_grid,
                                   const StepControl& control) {
    if (lambda_list.empty()) {
        throw std::invalid_argument("convergence_study: empty lambda list");
    }
    for (std::size_t i = 0; i + 1 < lambda_list.size(); ++i) {
        if (!(lambda_list[i + 1] < lambda_list[i])) {
            throw std::invalid_argument(
                "convergence_study: lambda_list must be strictly decreasing");
        }
    }
    ConvergenceStudy study;
    for (double lambda : lambda_list) {
        study.runs.push_back(
            sigma_z_expectation_rescaled(params, bath, lambda, limit_grid, control));
        study.rows.push_back({lambda, study.runs.back().sup_error});
    }
    study.monotone = true;
    for (std::size_t i = 0; i + 1 < study.rows.size(); ++i) {
        if (!(study.rows[i + 1].sup_error < study.rows[i].sup_error)) study.monotone = false;
    }
    return study;
}

}  // namespace spinboson::oracle
