#include "spinboson/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "spinboson/io.hpp"

namespace spinboson::cli {

namespace {

using nlohmann::ordered_json;
namespace fs = std::filesystem;

struct Entry {
    std::string section;
    std::string key;
    std::string value;
    int line;
    bool used{false};
};

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<Entry> parse_entries(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open scenario file: " + path, "file");
    std::vector<Entry> entries;
    std::string section;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']' || t.size() < 3) {
                throw ParseError("malformed section header: " + t, lineno);
            }
            section = trim(t.substr(1, t.size() - 2));
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw ParseError("expected 'key = value': " + t, lineno);
        }
        Entry e;
        e.section = section;
        e.key = trim(t.substr(0, eq));
        e.value = trim(t.substr(eq + 1));
        e.line = lineno;
        if (e.section.empty()) throw ParseError("key outside any [section]: " + e.key, lineno);
        if (e.key.empty()) throw ParseError("empty key", lineno);
        for (const auto& prev : entries) {
            if (prev.section == e.section && prev.key == e.key) {
                throw ValidationError("duplicate key " + e.section + "." + e.key,
                                      e.section + "." + e.key);
            }
        }
        entries.push_back(std::move(e));
    }
    return entries;
}

class EntryView {
  public:
    explicit EntryView(std::vector<Entry>& entries) : entries_(entries) {}

    const Entry* find(const std::string& section, const std::string& key) {
        for (auto& e : entries_) {
            if (e.section == section && e.key == key) {
                e.used = true;
                return &e;
            }
        }
        return nullptr;
    }

    double number(const std::string& section, const std::string& key, double fallback) {
        const Entry* e = find(section, key);
        return e ? to_number(*e) : fallback;
    }

    std::optional<double> optional_number(const std::string& section, const std::string& key) {
        const Entry* e = find(section, key);
        if (!e) return std::nullopt;
        return to_number(*e);
    }

    int integer(const std::string& section, const std::string& key, int fallback) {
        const Entry* e = find(section, key);
        if (!e) return fallback;
        const double v = to_number(*e);
        if (v != std::floor(v)) {
            throw ValidationError(field_of(*e) + " must be an integer", field_of(*e));
        }
        return int(v);
    }

    std::string text(const std::string& section, const std::string& key,
                     const std::string& fallback) {
        const Entry* e = find(section, key);
        return e ? e->value : fallback;
    }

    std::vector<double> number_list(const std::string& section, const std::string& key,
                                    std::vector<double> fallback) {
        const Entry* e = find(section, key);
        if (!e) return fallback;
        std::vector<double> out;
        std::string item;
        std::istringstream row(e->value);
        while (std::getline(row, item, ',')) {
            out.push_back(to_number_text(trim(item), field_of(*e)));
        }
        if (out.empty()) throw ValidationError(field_of(*e) + " is empty", field_of(*e));
        return out;
    }

    void reject_unknown() const {
        for (const auto& e : entries_) {
            if (!e.used) {
                throw ValidationError("unknown key " + e.section + "." + e.key,
                                      e.section + "." + e.key);
            }
        }
    }

    static std::string field_of(const Entry& e) { return e.section + "." + e.key; }

  private:
    static double to_number_text(const std::string& text, const std::string& field) {
        try {
            std::size_t used = 0;
            const double v = std::stod(text, &used);
            if (used != text.size() || !std::isfinite(v)) throw std::invalid_argument(text);
            return v;
        } catch (const std::exception&) {
            throw ValidationError(field + ": not a finite number: '" + text + "'", field);
        }
    }
    static double to_number(const Entry& e) { return to_number_text(e.value, field_of(e)); }

    std::vector<Entry>& entries_;
};

void require(bool ok, const std::string& field, const std::string& msg) {
    if (!ok) throw ValidationError(field + ": " + msg, field);
}

std::string fmt(double v) { return io::format_double(v); }

double density_frequency_scale(const spectral::SpectralDensity& j) {
    if (const auto* pl = std::get_if<spectral::PowerLawExpCutoff>(&j.family())) {
        return pl->omega_c;
    }
    return j.support().second;
}

std::vector<double> linspace(double t_max, int n) {
    std::vector<double> grid;
    grid.reserve(std::size_t(n));
    if (n <= 1) {
        grid.push_back(0.0);
        return grid;
    }
    for (int i = 0; i < n; ++i) grid.push_back(t_max * double(i) / double(n - 1));
    return grid;
}

ordered_json coefficients_report(const Scenario& s, const model::Eigensystem& eig,
                                 const limits::LimitCoefficients& c,
                                 const limits::RegimeReport& regime, double t_max_resolved) {
    ordered_json doc;
    doc["system"] = {{"epsilon", eig.epsilon},          {"delta", eig.delta},
                     {"nu", eig.nu},                    {"nu_delta", eig.nu_delta()},
                     {"lambda_plus", eig.lambda_plus},  {"lambda_minus", eig.lambda_minus},
                     {"d_pp", eig.d_pp},                {"d_mm", eig.d_mm},
                     {"d_pm", eig.d_pm}};
    ordered_json coeff;
    coeff["gamma"] = c.gamma;
    coeff["sigma"] = c.sigma;
    coeff["phi"] = c.phi;
    if (c.beta) {
        coeff["beta"] = *c.beta;
    } else {
        coeff["beta"] = nullptr;
    }
    coeff["j_at_nu_delta"] = c.j_at_resonance;
    if (c.beta) {
        // phi is only given in closed form at zero temperature; the finite-T
        // value follows the same substitution pattern and only moves the
        // global phase.
        coeff["phi_note"] = "extrapolated from the zero-temperature pattern";
    }
    ordered_json prov;
    for (const auto& [label, value] : c.provenance) prov[label] = value;
    coeff["provenance"] = prov;
    doc["coefficients"] = coeff;
    doc["regime"] = {{"regime", limits::regime_name(regime.regime)},
                     {"gamma", regime.gamma},
                     {"effective_frequency", regime.effective_frequency},
                     {"gamma_tol", regime.gamma_tol},
                     {"omega_tol", regime.omega_tol},
                     {"off_resonance", regime.off_resonance},
                     {"j_at_nu_delta", regime.j_at_nu_delta}};
    std::vector<std::string> obs;
    if (s.run.want_p) obs.push_back("p");
    if (s.run.want_tr_u) obs.push_back("trU");
    if (s.run.want_tr_c) obs.push_back("trC");
    doc["run"] = {{"t_max", t_max_resolved},
                  {"n_points", s.run.n_points},
                  {"initial_state", s.run.initial_state_name},
                  {"observables", obs}};
    ordered_json echo;
    for (const auto& [k, v] : s.echo) echo[k] = v;
    doc["scenario"] = echo;
    return doc;
}

std::string series_csv(const Scenario& s, const std::vector<double>& grid,
                       const std::vector<model::Complex>& p,
                       const std::vector<model::Complex>& tr_u,
                       const std::vector<double>& tr_c) {
    std::string out = "t";
    if (s.run.want_p) out += ",re_p,im_p,abs_p";
    if (s.run.want_tr_u) out += ",re_trU,im_trU";
    if (s.run.want_tr_c) out += ",re_trC";
    out += "\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
        out += fmt(grid[i]);
        if (s.run.want_p) {
            out += "," + fmt(p[i].real()) + "," + fmt(p[i].imag()) + "," + fmt(std::abs(p[i]));
        }
        if (s.run.want_tr_u) {
            out += "," + fmt(tr_u[i].real()) + "," + fmt(tr_u[i].imag());
        }
        if (s.run.want_tr_c) out += "," + fmt(tr_c[i]);
        out += "\n";
    }
    return out;
}

std::string series_json(const Scenario& s, const std::vector<double>& grid,
                        const std::vector<model::Complex>& p,
                        const std::vector<model::Complex>& tr_u,
                        const std::vector<double>& tr_c) {
    ordered_json doc;
    std::vector<std::string> columns = {"t"};
    if (s.run.want_p) {
        columns.insert(columns.end(), {"re_p", "im_p", "abs_p"});
    }
    if (s.run.want_tr_u) columns.insert(columns.end(), {"re_trU", "im_trU"});
    if (s.run.want_tr_c) columns.push_back("re_trC");
    doc["columns"] = columns;
    ordered_json rows = ordered_json::array();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        ordered_json row = ordered_json::array();
        row.push_back(grid[i]);
        if (s.run.want_p) {
            row.push_back(p[i].real());
            row.push_back(p[i].imag());
            row.push_back(std::abs(p[i]));
        }
        if (s.run.want_tr_u) {
            row.push_back(tr_u[i].real());
            row.push_back(tr_u[i].imag());
        }
        if (s.run.want_tr_c) row.push_back(tr_c[i]);
        rows.push_back(row);
    }
    doc["rows"] = rows;
    return doc.dump(2) + "\n";
}

std::string plot_script(const Scenario& s) {
    std::string out = "# gnuplot commands for series.csv\n";
    out += "set datafile separator ','\n";
    out += "set key autotitle columnhead\n";
    out += "set xlabel 't'\n";
    if (s.run.want_p) {
        out += "plot 'series.csv' using 1:2 with lines\n";
    } else if (s.run.want_tr_u) {
        out += "plot 'series.csv' using 1:2 with lines\n";
    } else {
        out += "plot 'series.csv' using 1:2 with lines\n";
    }
    return out;
}

struct Computed {
    model::Eigensystem eig;
    limits::LimitCoefficients coefficients;
    limits::RegimeReport regime;
    double t_max{0.0};
    std::vector<double> grid;
};

Computed compute_core(const Scenario& s) {
    Computed out;
    out.eig = model::eigensystem(s.system);
    out.coefficients =
        s.beta ? limits::coefficients_finite_temperature(out.eig, s.bath, *s.beta, s.quadrature)
               : limits::coefficients_zero_temperature(out.eig, s.bath, s.quadrature);
    const double gtol = limits::default_gamma_tol(out.eig, s.bath);
    const double wtol = limits::default_omega_tol(out.eig);
    out.regime = limits::classify_regime(out.coefficients, out.eig, gtol, wtol);
    out.t_max = s.run.t_max > 0.0
                    ? s.run.t_max
                    : (out.coefficients.gamma > gtol ? 20.0 / out.coefficients.gamma
                                                     : 20.0 / s.system.delta);
    out.grid = linspace(out.t_max, s.run.n_points);
    return out;
}

void add_series_artifacts(io::ArtifactSet& artifacts, const Scenario& s, const Computed& core,
                          OutputFormat format) {
    std::vector<model::Complex> p, tr_u;
    std::vector<double> tr_c;
    for (double t : core.grid) {
        if (s.run.want_p) {
            p.push_back(dynamics::p_complex(core.coefficients, core.eig, s.run.initial_state, t));
        }
        if (s.run.want_tr_u) {
            tr_u.push_back(dynamics::vacuum_evolution_trace(core.coefficients, t));
        }
        if (s.run.want_tr_c) {
            tr_c.push_back(
                dynamics::correlator_trace(core.coefficients, core.eig, t).anticommutator);
        }
    }
    if (format == OutputFormat::Csv) {
        artifacts.add("series.csv", series_csv(s, core.grid, p, tr_u, tr_c));
        artifacts.add("plot.gp", plot_script(s));
    } else {
        artifacts.add("series.json", series_json(s, core.grid, p, tr_u, tr_c));
    }
}

void add_oracle_artifacts(io::ArtifactSet& artifacts, const Scenario& s,
                          const model::Eigensystem& eig, OutputFormat format) {
    const OracleSection& o = *s.oracle;
    const double omega_max =
        o.omega_max > 0.0
            ? o.omega_max
            : 5.0 * std::max(density_frequency_scale(s.bath), eig.nu_delta());
    const auto bath = oracle::discretize_bath(s.bath, o.modes, omega_max, o.fock_truncation,
                                              o.dim_budget);
    const auto grid = linspace(o.t_max, o.n_points);
    const auto study = oracle::convergence_study(s.system, bath, o.lambda_list, grid);

    for (const auto& run : study.runs) {
        std::string csv = "t_limit,t_physical,re_sigma_z,p_limit,abs_error\n";
        for (std::size_t i = 0; i < run.t_limit.size(); ++i) {
            csv += fmt(run.t_limit[i]) + "," + fmt(run.t_physical[i]) + "," +
                   fmt(run.sigma_z_raw[i]) + "," + fmt(run.p_limit[i]) + "," +
                   fmt(run.abs_error[i]) + "\n";
        }
        artifacts.add("oracle/lambda_" + fmt(run.lambda) + ".csv", csv);
    }

    ordered_json summary;
    summary["bath"] = {{"modes", int(bath.modes())},
                       {"omega_max", bath.omega_max},
                       {"fock_truncation", bath.fock_truncation},
                       {"delta_omega", bath.delta_omega()},
                       {"recurrence_time", bath.recurrence_time()}};
    const auto& c = study.runs.front().bath_coefficients;
    summary["fixed_bath_coefficients"] = {{"gamma", c.gamma}, {"sigma", c.sigma}, {"phi", c.phi}};
    ordered_json rows = ordered_json::array();
    for (std::size_t i = 0; i < study.rows.size(); ++i) {
        rows.push_back({{"lambda", study.rows[i].lambda},
                        {"sup_error", study.rows[i].sup_error},
                        {"norm_drift", study.runs[i].norm_drift},
                        {"energy_drift", study.runs[i].energy_drift}});
    }
    summary["rows"] = rows;
    summary["monotone"] = study.monotone;
    (void)format;
    artifacts.add("oracle/summary.json", summary.dump(2) + "\n");
}

int guarded(const std::function<void()>& body) {
    try {
        body();
        return 0;
    } catch (const ParseError& e) {
        std::cerr << "parse error (line " << e.line << "): " << e.what() << "\n";
        return 1;
    } catch (const ValidationError& e) {
        std::cerr << "validation error [" << e.field << "]: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid argument: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace

Scenario load_scenario(const std::string& path) {
    auto entries = parse_entries(path);
    EntryView view(entries);
    Scenario s;

    s.system.epsilon = view.number("system", "epsilon", 0.0);
    s.system.delta = view.number("system", "delta", 1.0);
    require(std::isfinite(s.system.epsilon), "system.epsilon", "must be finite");
    require(s.system.delta > 0.0 && std::isfinite(s.system.delta), "system.delta",
            "must be > 0");

    const std::string family = view.text("bath", "family", "");
    require(!family.empty(), "bath.family", "is required (ohmic|power_law|box|table)");
    if (family == "ohmic" || family == "power_law") {
        const double alpha = view.number("bath", "alpha", -1.0);
        require(alpha >= 0.0, "bath.alpha", "must be >= 0");
        const double s_exp = family == "ohmic" ? 1.0 : view.number("bath", "s", 0.0);
        require(s_exp > 0.0, "bath.s", "must be > 0");
        const double omega_c = view.number("bath", "omega_c", 0.0);
        require(omega_c > 0.0, "bath.omega_c", "must be > 0");
        s.bath = spectral::SpectralDensity::power_law(alpha, s_exp, omega_c);
    } else if (family == "box") {
        const double alpha = view.number("bath", "alpha", -1.0);
        require(alpha >= 0.0, "bath.alpha", "must be >= 0");
        const double lo = view.number("bath", "omega_lo", -1.0);
        const double hi = view.number("bath", "omega_hi", -1.0);
        require(lo >= 0.0 && hi > lo, "bath.omega_lo", "need 0 <= omega_lo < omega_hi");
        s.bath = spectral::SpectralDensity::box(alpha, lo, hi);
    } else if (family == "table") {
        std::string file = view.text("bath", "file", "");
        require(!file.empty(), "bath.file", "is required for table densities");
        fs::path p(file);
        if (p.is_relative()) p = fs::path(path).parent_path() / p;
        try {
            s.bath = spectral::SpectralDensity::table_from_file(p.string());
        } catch (const std::invalid_argument& e) {
            throw ValidationError(std::string("bath.file: ") + e.what(), "bath.file");
        }
    } else {
        throw ValidationError("bath.family: unknown family '" + family + "'", "bath.family");
    }
    s.beta = view.optional_number("bath", "beta");
    if (s.beta) require(*s.beta > 0.0, "bath.beta", "must be > 0 (omit for zero temperature)");

    s.quadrature.cutoff_upper = view.number("quadrature", "cutoff_upper", 0.0);
    require(s.quadrature.cutoff_upper >= 0.0, "quadrature.cutoff_upper", "must be >= 0");
    if (s.quadrature.cutoff_upper > 0.0) {
        const double hi = s.bath.support().second;
        require(!std::isfinite(hi) || s.quadrature.cutoff_upper > hi,
                "quadrature.cutoff_upper", "must exceed the bath support upper edge");
    }
    s.quadrature.rel_tol = view.number("quadrature", "rel_tol", 1e-10);
    require(s.quadrature.rel_tol > 0.0, "quadrature.rel_tol", "must be > 0");
    s.quadrature.subtraction_window = view.number("quadrature", "subtraction_window", 1.0);
    require(s.quadrature.subtraction_window > 0.0, "quadrature.subtraction_window",
            "must be > 0");

    s.run.t_max = view.number("run", "t_max", 0.0);
    require(s.run.t_max >= 0.0, "run.t_max", "must be >= 0 (0 = auto)");
    s.run.n_points = view.integer("run", "n_points", 200);
    require(s.run.n_points >= 1, "run.n_points", "must be >= 1");
    const std::string state = view.text("run", "initial_state", "up");
    s.run.initial_state_name = state;
    if (state == "up") {
        s.run.initial_state = dynamics::SpinState::up();
    } else if (state == "down") {
        s.run.initial_state = dynamics::SpinState::down();
    } else if (state == "plus") {
        s.run.initial_state = dynamics::SpinState::plus();
    } else if (state == "custom") {
        const auto comps = view.number_list("run", "state", {});
        require(comps.size() == 4, "run.state",
                "custom state needs 4 reals: re0, im0, re1, im1");
        try {
            s.run.initial_state = dynamics::SpinState::normalized(
                {comps[0], comps[1]}, {comps[2], comps[3]}, dynamics::Basis::SigmaZ);
        } catch (const std::invalid_argument& e) {
            throw ValidationError(std::string("run.state: ") + e.what(), "run.state");
        }
    } else {
        throw ValidationError("run.initial_state: unknown state '" + state + "'",
                              "run.initial_state");
    }
    const std::string obs = view.text("run", "observables", "p,trU,trC");
    s.run.want_p = s.run.want_tr_u = s.run.want_tr_c = false;
    {
        std::istringstream row(obs);
        std::string item;
        while (std::getline(row, item, ',')) {
            const std::string o = trim(item);
            if (o == "p") {
                s.run.want_p = true;
            } else if (o == "trU") {
                s.run.want_tr_u = true;
            } else if (o == "trC") {
                s.run.want_tr_c = true;
            } else {
                throw ValidationError("run.observables: unknown observable '" + o + "'",
                                      "run.observables");
            }
        }
        require(s.run.want_p || s.run.want_tr_u || s.run.want_tr_c, "run.observables",
                "must request at least one of p, trU, trC");
    }

    const bool has_oracle =
        std::any_of(entries.begin(), entries.end(),
                    [](const Entry& e) { return e.section == "oracle"; });
    if (has_oracle) {
        OracleSection o;
        o.modes = view.integer("oracle", "modes", 6);
        require(o.modes >= 1, "oracle.modes", "must be >= 1");
        o.omega_max = view.number("oracle", "omega_max", 0.0);
        require(o.omega_max >= 0.0, "oracle.omega_max", "must be >= 0 (0 = auto)");
        o.fock_truncation = view.integer("oracle", "fock_truncation", 2);
        require(o.fock_truncation >= 1, "oracle.fock_truncation", "must be >= 1");
        o.lambda_list = view.number_list("oracle", "lambda_list", {0.5, 0.3, 0.2});
        for (std::size_t i = 0; i < o.lambda_list.size(); ++i) {
            require(o.lambda_list[i] > 0.0 && o.lambda_list[i] <= 1.0, "oracle.lambda_list",
                    "entries must lie in (0, 1]");
            if (i > 0) {
                require(o.lambda_list[i] < o.lambda_list[i - 1], "oracle.lambda_list",
                        "must be strictly decreasing");
            }
        }
        o.t_max = view.number("oracle", "t_max", 2.0);
        require(o.t_max > 0.0, "oracle.t_max", "must be > 0");
        o.n_points = view.integer("oracle", "n_points", 21);
        require(o.n_points >= 2, "oracle.n_points", "must be >= 2");
        const int budget = view.integer("oracle", "dim_budget", 20000);
        require(budget >= 2, "oracle.dim_budget", "must be >= 2");
        o.dim_budget = std::size_t(budget);
        s.oracle = o;
    }

    view.reject_unknown();

    s.echo.emplace_back("system.epsilon", fmt(s.system.epsilon));
    s.echo.emplace_back("system.delta", fmt(s.system.delta));
    s.echo.emplace_back("bath.family", family);
    if (const auto* pl = std::get_if<spectral::PowerLawExpCutoff>(&s.bath.family())) {
        s.echo.emplace_back("bath.alpha", fmt(pl->alpha));
        s.echo.emplace_back("bath.s", fmt(pl->s));
        s.echo.emplace_back("bath.omega_c", fmt(pl->omega_c));
    } else if (const auto* bx = std::get_if<spectral::Box>(&s.bath.family())) {
        s.echo.emplace_back("bath.alpha", fmt(bx->alpha));
        s.echo.emplace_back("bath.omega_lo", fmt(bx->omega_lo));
        s.echo.emplace_back("bath.omega_hi", fmt(bx->omega_hi));
    } else {
        s.echo.emplace_back("bath.file", view.text("bath", "file", ""));
    }
    s.echo.emplace_back("bath.beta", s.beta ? fmt(*s.beta) : "none (zero temperature)");
    s.echo.emplace_back("quadrature.cutoff_upper",
                        s.quadrature.cutoff_upper > 0.0 ? fmt(s.quadrature.cutoff_upper)
                                                        : fmt(s.bath.default_cutoff()) + " (auto)");
    s.echo.emplace_back("quadrature.rel_tol", fmt(s.quadrature.rel_tol));
    s.echo.emplace_back("quadrature.subtraction_window",
                        fmt(s.quadrature.subtraction_window));
    s.echo.emplace_back("run.t_max", s.run.t_max > 0.0 ? fmt(s.run.t_max) : "auto");
    s.echo.emplace_back("run.n_points", fmt(s.run.n_points));
    s.echo.emplace_back("run.initial_state", s.run.initial_state_name);
    s.echo.emplace_back("run.observables", obs);
    if (s.oracle) {
        s.echo.emplace_back("oracle.modes", fmt(s.oracle->modes));
        s.echo.emplace_back("oracle.omega_max",
                            s.oracle->omega_max > 0.0 ? fmt(s.oracle->omega_max) : "auto");
        s.echo.emplace_back("oracle.fock_truncation", fmt(s.oracle->fock_truncation));
        std::string lambdas;
        for (double l : s.oracle->lambda_list) {
            if (!lambdas.empty()) lambdas += ",";
            lambdas += fmt(l);
        }
        s.echo.emplace_back("oracle.lambda_list", lambdas);
        s.echo.emplace_back("oracle.t_max", fmt(s.oracle->t_max));
        s.echo.emplace_back("oracle.n_points", fmt(s.oracle->n_points));
    }
    return s;
}

namespace {

void run_scenario_impl(const Scenario& scenario, const RunOptions& options) {
    const Computed core = compute_core(scenario);
    io::ArtifactSet artifacts;
    artifacts.add("coefficients.json",
                  coefficients_report(scenario, core.eig, core.coefficients, core.regime,
                                      core.t_max)
                          .dump(2) +
                      "\n");
    add_series_artifacts(artifacts, scenario, core, options.format);
    if (scenario.oracle) {
        add_oracle_artifacts(artifacts, scenario, core.eig, options.format);
    }
    artifacts.commit(options.out_dir);
    std::cout << limits::regime_name(core.regime.regime)
              << " gamma=" << fmt(core.coefficients.gamma)
              << " sigma=" << fmt(core.coefficients.sigma)
              << " phi=" << fmt(core.coefficients.phi) << "\n";
}

}  // namespace

int run_scenario(const Scenario& scenario, const RunOptions& options) {
    return guarded([&] { run_scenario_impl(scenario, options); });
}

int run_subcommand(const std::string& command, const std::string& scenario_path,
                   const RunOptions& options) {
    return guarded([&] {
        const Scenario s = load_scenario(scenario_path);
        if (command == "run") {
            run_scenario_impl(s, options);
            return;
        }
        const Computed core = compute_core(s);
        io::ArtifactSet artifacts;
        if (command == "coeffs") {
            artifacts.add("coefficients.json",
                          coefficients_report(s, core.eig, core.coefficients, core.regime,
                                              core.t_max)
                                  .dump(2) +
                              "\n");
            std::cout << "gamma=" << fmt(core.coefficients.gamma)
                      << " sigma=" << fmt(core.coefficients.sigma)
                      << " phi=" << fmt(core.coefficients.phi) << "\n";
        } else if (command == "evolve") {
            add_series_artifacts(artifacts, s, core, options.format);
            std::cout << "series over t in [0, " << fmt(core.t_max) << "], "
                      << core.grid.size() << " points\n";
        } else if (command == "correlator") {
            std::string csv =
                "t,trC_anticommutator,trC_expanded,trC_difference,op_max_abs_difference\n";
            for (double t : core.grid) {
                const auto tr = dynamics::correlator_trace(core.coefficients, core.eig, t);
                const auto op = dynamics::correlator(core.coefficients, core.eig, t);
                csv += fmt(t) + "," + fmt(tr.anticommutator) + "," + fmt(tr.expanded) + "," +
                       fmt(tr.difference) + "," + fmt(op.max_abs_difference) + "\n";
            }
            artifacts.add("correlator.csv", csv);
            std::cout << "correlator over t in [0, " << fmt(core.t_max) << "]\n";
        } else if (command == "regime") {
            ordered_json doc = {{"regime", limits::regime_name(core.regime.regime)},
                                {"gamma", core.regime.gamma},
                                {"effective_frequency", core.regime.effective_frequency},
                                {"gamma_tol", core.regime.gamma_tol},
                                {"omega_tol", core.regime.omega_tol},
                                {"off_resonance", core.regime.off_resonance},
                                {"j_at_nu_delta", core.regime.j_at_nu_delta}};
            artifacts.add("regime.json", doc.dump(2) + "\n");
            std::cout << limits::regime_name(core.regime.regime) << "\n";
        } else if (command == "solve-damping") {
            const double alpha = limits::solve_damping_condition(s.bath, core.eig,
                                                                 {1e-3, 1e3}, s.quadrature);
            const double sigma_unit = core.coefficients.sigma;  // bath is the unit family
            const auto scaled = s.bath.scaled(alpha);
            const auto c_star = s.beta ? limits::coefficients_finite_temperature(
                                             core.eig, scaled, *s.beta, s.quadrature)
                                       : limits::coefficients_zero_temperature(core.eig, scaled,
                                                                               s.quadrature);
            ordered_json doc = {{"alpha_star", alpha},
                                {"sigma_unit", sigma_unit},
                                {"sigma_at_alpha_star", c_star.sigma},
                                {"residual", std::abs(c_star.sigma - core.eig.nu_delta())},
                                {"nu_delta", core.eig.nu_delta()}};
            artifacts.add("damping.json", doc.dump(2) + "\n");
            std::cout << "alpha_star=" << fmt(alpha) << "\n";
        } else if (command == "oracle") {
            if (!s.oracle) {
                throw ValidationError("scenario has no [oracle] section", "oracle");
            }
            add_oracle_artifacts(artifacts, s, core.eig, options.format);
            std::cout << "oracle study written\n";
        } else {
            throw ValidationError("unknown subcommand '" + command + "'", "command");
        }
        artifacts.commit(options.out_dir);
    });
}

}  // namespace spinboson::cli
