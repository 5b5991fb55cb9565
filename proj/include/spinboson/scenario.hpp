// scenario.hpp — Scenario files (sectioned key-value text), validation, and
// the orchestration behind the command-line front end.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spinboson/dynamics.hpp"
#include "spinboson/limits.hpp"
#include "spinboson/model.hpp"
#include "spinboson/oracle.hpp"
#include "spinboson/spectral.hpp"

namespace spinboson::cli {

enum class OutputFormat { Csv, Json };

struct RunSection {
    double t_max{0.0};  // <= 0: resolved to 20/gamma (damped) or 20/delta
    int n_points{200};
    dynamics::SpinState initial_state = dynamics::SpinState::up();
    std::string initial_state_name{"up"};
    bool want_p{true};
    bool want_tr_u{true};
    bool want_tr_c{true};
};

struct OracleSection {
    int modes{6};
    double omega_max{0.0};  // <= 0: resolved to 5*max(density scale, nu*Delta)
    int fock_truncation{2};
    std::vector<double> lambda_list{0.5, 0.3, 0.2};
    double t_max{2.0};
    int n_points{21};
    std::size_t dim_budget{20000};
};

struct Scenario {
    model::SystemParams system;
    spectral::SpectralDensity bath = spectral::SpectralDensity::ohmic(0.0, 1.0);
    std::optional<double> beta;
    spectral::QuadratureSettings quadrature;
    RunSection run;
    std::optional<OracleSection> oracle;
    // resolved inputs (defaults applied), echoed into coefficients.json
    std::vector<std::pair<std::string, std::string>> echo;
};

// Parses and validates the documented schema. Throws ParseError with the
// line number or ValidationError naming the offending key.
Scenario load_scenario(const std::string& path);

struct RunOptions {
    std::string out_dir{"."};
    OutputFormat format{OutputFormat::Csv};
};

// Subcommands: run | coeffs | evolve | correlator | regime | solve-damping |
// oracle. Returns the process exit code: 0 success, 1 validation failure,
// 2 numerical failure. No partial artifacts survive a failing run.
int run_subcommand(const std::string& command, const std::string& scenario_path,
                   const RunOptions& options);

// The full pipeline behind `run` (coefficients + regime + series + oracle
// when configured), exposed for tests.
int run_scenario(const Scenario& scenario, const RunOptions& options);

}  // namespace spinboson::cli
