#include "spinboson/spectral.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace spinboson::spectral {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 16-point Gauss-Legendre rule, positive half of the symmetric nodes.
constexpr std::array<double, 8> kGlNode = {
    0.0950125098376375, 0.2816035507792589, 0.4580167776572274,
    0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
    0.9445750230732326, 0.9894009349916499};
constexpr std::array<double, 8> kGlWeight = {
    0.1894506104550686, 0.1826034150449236, 0.1691565193950026,
    0.1495959888165768, 0.1246289712555340, 0.0951585116824926,
    0.0622535239386477, 0.0271524594117540};

struct Accum {
    double value{0.0};
    double abs_value{0.0};
};

template <typename F>
void gl16_panels(const F& f, double a, double b, int panels, Accum& acc) {
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * h;
        const double r = 0.5 * h;
        for (int i = 0; i < 8; ++i) {
            const double lo = f(mid - r * kGlNode[i]);
            const double hi = f(mid + r * kGlNode[i]);
            acc.value += kGlWeight[i] * r * (lo + hi);
            acc.abs_value += kGlWeight[i] * r * (std::abs(lo) + std::abs(hi));
        }
    }
}

// Everything the principal-value engine needs to know about one integrand.
struct PvProblem {
    std::function<double(double)> density;  // J(x) or J_pm(x)
    double support_lo{0.0};
    double support_hi{kInf};
    std::vector<double> breaks;     // interior kinks of the density
    double origin_exponent{kInf};   // density ~ x^p near 0+
    double edge_jump_lo{0.0};       // |density| jump at the support edges
    double edge_jump_hi{0.0};
};

// Composite GL16 over a fixed cell list, panels per cell doubling each
// refinement level; converged when two consecutive levels agree to rel_tol.
double refine(const std::vector<std::pair<double, double>>& cells,
              const std::function<double(const std::pair<double, double>&, double)>& cell_fn,
              double rel_tol, const char* label) {
    constexpr int kMaxLevel = 8;
    double prev = 0.0;
    double disagreement = kInf;
    double scale = 1.0;
    for (int level = 0; level <= kMaxLevel; ++level) {
        Accum acc;
        const int panels = 1 << level;
        for (const auto& cell : cells) {
            auto f = [&](double x) { return cell_fn(cell, x); };
            gl16_panels(f, cell.first, cell.second, panels, acc);
        }
        if (level > 0) {
            scale = std::max({std::abs(acc.value), 1e-3 * acc.abs_value, 1e-300});
            disagreement = std::abs(acc.value - prev);
            if (disagreement <= rel_tol * scale) return acc.value;
        }
        prev = acc.value;
    }
    if (disagreement <= 10.0 * rel_tol * scale) return prev;
    std::ostringstream msg;
    msg << label << ": quadrature refinements disagree by " << disagreement
        << " (scale " << scale << ", rel_tol " << rel_tol << ")";
    throw NonConvergence(msg.str());
}

std::vector<std::pair<double, double>> make_cells(std::vector<double> edges,
                                                  double grade_exponent,
                                                  double rel_tol) {
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    std::vector<std::pair<double, double>> cells;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        if (edges[i + 1] > edges[i]) cells.emplace_back(edges[i], edges[i + 1]);
    }
    // Geometric grading of the cell touching x = 0 when the integrand behaves
    // like x^q with q < 1 there: resolve down to where the remaining mass is
    // below tolerance.
    if (!cells.empty() && cells.front().first == 0.0 && grade_exponent < 1.0) {
        const double q1 = grade_exponent + 1.0;  // mass exponent, > 0 or divergent
        const double digits = -std::log10(rel_tol) + 2.0;
        int depth = static_cast<int>(std::ceil(digits / (q1 * 0.30102999566398120))) + 1;
        depth = std::clamp(depth, 8, 2400);
        const double top = cells.front().second;
        std::vector<std::pair<double, double>> graded;
        double hi = top;
        for (int k = 0; k < depth; ++k) {
            const double lo = (k + 1 == depth) ? 0.0 : hi * 0.5;
            graded.emplace_back(lo, hi);
            hi = lo;
        }
        std::reverse(graded.begin(), graded.end());
        graded.insert(graded.end(), cells.begin() + 1, cells.end());
        cells = std::move(graded);
    }
    return cells;
}

// P.P. int_0^cutoff density(x)/(x - omega) dx by singularity subtraction over
// a symmetric window plus the analytic log remainder.
double pv_engine(const PvProblem& p, double omega, double cutoff, double rel_tol,
                 double window) {
    const double lo = std::max(0.0, p.support_lo);
    const double hi = std::min(cutoff, p.support_hi);
    if (!(hi > lo)) return 0.0;

    if (omega == 0.0 && lo == 0.0) {
        // Endpoint integrability of density(x)/x: need density ~ x^p, p > 0.
        if (!(p.origin_exponent > 0.0)) {
            throw DivergentIntegral(
                "hilbert_pv: I(0) does not exist; the density does not vanish "
                "fast enough at 0");
        }
    }
    if ((omega == lo && lo > 0.0 && p.edge_jump_lo > 0.0) ||
        (omega == hi && p.edge_jump_hi > 0.0)) {
        throw DivergentIntegral(
            "hilbert_pv: density jumps at the requested frequency; the "
            "principal value does not exist");
    }

    const bool pv = omega > lo && omega < hi;
    const double f_omega = pv ? p.density(omega) : 0.0;
    double win_lo = 0.0, win_hi = 0.0;
    std::vector<double> edges = {lo, hi};
    for (double b : p.breaks) {
        if (b > lo && b < hi) edges.push_back(b);
    }
    if (pv) {
        win_lo = std::max(lo, omega - window);
        win_hi = std::min(hi, omega + window);
        edges.push_back(win_lo);
        edges.push_back(win_hi);
        edges.push_back(omega);
    }

    double grade_q = p.origin_exponent;
    if (omega == 0.0) grade_q -= 1.0;  // integrand density(x)/x
    const auto cells = make_cells(std::move(edges), grade_q, rel_tol);

    auto cell_fn = [&](const std::pair<double, double>& cell, double x) -> double {
        const double v = p.density(x);
        if (pv && cell.first >= win_lo && cell.second <= win_hi) {
            return (v - f_omega) / (x - omega);
        }
        return v / (x - omega);
    };
    double result = refine(cells, cell_fn, rel_tol, "hilbert_pv");
    if (pv && f_omega != 0.0) {
        result += f_omega * std::log((win_hi - omega) / (omega - win_lo));
    }
    return result;
}

double resolve_cutoff(const SpectralDensity& j, const QuadratureSettings& q) {
    return q.cutoff_upper > 0.0 ? q.cutoff_upper : j.default_cutoff();
}

PvProblem problem_for(const SpectralDensity& j) {
    PvProblem p;
    p.density = [j](double x) { return j(x); };
    auto [lo, hi] = j.support();
    p.support_lo = lo;
    p.support_hi = hi;
    p.breaks = j.breakpoints();
    p.origin_exponent = j.origin_exponent();
    p.edge_jump_lo = (lo > 0.0 && !j.continuous_at(lo)) ? 1.0 : 0.0;
    p.edge_jump_hi = (std::isfinite(hi) && !j.continuous_at(hi)) ? 1.0 : 0.0;
    return p;
}

PvProblem problem_for_thermal(const ThermalDensities& th, bool plus) {
    PvProblem p = problem_for(th.base);
    if (plus) {
        p.density = [th](double x) { return th.j_plus(x); };
    } else {
        p.density = [th](double x) { return th.j_minus(x); };
    }
    // The occupation factor contributes one inverse power of x near 0.
    p.origin_exponent = th.base.origin_exponent() - 1.0;
    return p;
}

// Exact piecewise antiderivatives for a piecewise-linear density:
//   int (c0 + c1 x)/(x - w) dx = c1 (x1 - x0) + (c0 + c1 w) ln|...|
// with the singular log endpoints cancelling pairwise across the node at w.
double table_pv(const Table& tb, double omega, double cutoff) {
    const std::size_t n = tb.omega.size();
    if (omega == tb.omega.front() && tb.j.front() > 0.0) {
        throw DivergentIntegral(
            "hilbert_pv: table density jumps at its first node; the integral "
            "at that frequency does not exist");
    }
    if (omega == tb.omega.back() && tb.j.back() > 0.0) {
        throw DivergentIntegral(
            "hilbert_pv: table density jumps at its last node; the integral "
            "at that frequency does not exist");
    }
    if (omega == 0.0 && tb.omega.front() == 0.0 && tb.j.front() > 0.0) {
        throw DivergentIntegral("hilbert_pv: I(0) does not exist for a table with J(0) > 0");
    }
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        double x0 = tb.omega[i];
        double x1 = tb.omega[i + 1];
        if (x0 >= cutoff) break;
        const double c1 = (tb.j[i + 1] - tb.j[i]) / (x1 - x0);
        const double c0 = tb.j[i] - c1 * x0;
        if (x1 > cutoff) x1 = cutoff;
        total += c1 * (x1 - x0);
        const double coef = c0 + c1 * omega;
        if (coef == 0.0) continue;
        if (omega > x0 && omega < x1) {
            total += coef * std::log((x1 - omega) / (omega - x0));
        } else if (omega == x0) {
            total += coef * std::log(std::abs(x1 - omega));
        } else if (omega == x1) {
            total -= coef * std::log(std::abs(x0 - omega));
        } else {
            total += coef * std::log(std::abs((x1 - omega) / (x0 - omega)));
        }
    }
    return total;
}

}  // namespace

SpectralDensity::SpectralDensity(std::variant<PowerLawExpCutoff, Box, Table> fam)
    : fam_(std::move(fam)) {}

SpectralDensity SpectralDensity::power_law(double alpha, double s, double omega_c) {
    if (!(alpha >= 0.0)) throw std::invalid_argument("power_law: alpha must be >= 0");
    if (!(s > 0.0)) throw std::invalid_argument("power_law: s must be > 0");
    if (!(omega_c > 0.0)) throw std::invalid_argument("power_law: omega_c must be > 0");
    return SpectralDensity(PowerLawExpCutoff{alpha, s, omega_c});
}

SpectralDensity SpectralDensity::ohmic(double alpha, double omega_c) {
    return power_law(alpha, 1.0, omega_c);
}

SpectralDensity SpectralDensity::box(double alpha, double omega_lo, double omega_hi) {
    if (!(alpha >= 0.0)) throw std::invalid_argument("box: alpha must be >= 0");
    if (!(omega_lo >= 0.0) || !(omega_hi > omega_lo)) {
        throw std::invalid_argument("box: need 0 <= omega_lo < omega_hi");
    }
    return SpectralDensity(Box{alpha, omega_lo, omega_hi});
}

SpectralDensity SpectralDensity::table(std::vector<double> omega, std::vector<double> j) {
    if (omega.size() < 2 || omega.size() != j.size()) {
        throw std::invalid_argument("table: need >= 2 rows of matching (omega, J)");
    }
    if (!(omega.front() >= 0.0)) throw std::invalid_argument("table: omega must be >= 0");
    for (std::size_t i = 0; i + 1 < omega.size(); ++i) {
        if (!(omega[i + 1] > omega[i])) {
            throw std::invalid_argument("table: omega must be strictly increasing");
        }
    }
    for (double v : j) {
        if (!(v >= 0.0)) throw std::invalid_argument("table: J values must be >= 0");
    }
    return SpectralDensity(Table{std::move(omega), std::move(j)});
}

SpectralDensity SpectralDensity::table_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("table_from_file: cannot open " + path);
    std::vector<double> w, j;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream row(line);
        double a, b;
        if (row >> a >> b) {
            w.push_back(a);
            j.push_back(b);
        }
    }
    return table(std::move(w), std::move(j));
}

double SpectralDensity::operator()(double omega) const {
    if (omega < 0.0) return 0.0;
    if (const auto* pl = std::get_if<PowerLawExpCutoff>(&fam_)) {
        if (omega == 0.0) return 0.0;
        return pl->alpha * std::pow(omega, pl->s) * std::pow(pl->omega_c, 1.0 - pl->s) *
               std::exp(-omega / pl->omega_c);
    }
    if (const auto* bx = std::get_if<Box>(&fam_)) {
        return (omega >= bx->omega_lo && omega <= bx->omega_hi) ? bx->alpha : 0.0;
    }
    const auto& tb = std::get<Table>(fam_);
    if (omega < tb.omega.front() || omega > tb.omega.back()) return 0.0;
    const auto it = std::upper_bound(tb.omega.begin(), tb.omega.end(), omega);
    const std::size_t hi = std::min<std::size_t>(
        tb.omega.size() - 1, static_cast<std::size_t>(it - tb.omega.begin()));
    const std::size_t lo = hi == 0 ? 0 : hi - 1;
    if (hi == lo) return tb.j[lo];
    const double f = (omega - tb.omega[lo]) / (tb.omega[hi] - tb.omega[lo]);
    return tb.j[lo] + f * (tb.j[hi] - tb.j[lo]);
}

std::pair<double, double> SpectralDensity::support() const {
    if (std::holds_alternative<PowerLawExpCutoff>(fam_)) return {0.0, kInf};
    if (const auto* bx = std::get_if<Box>(&fam_)) return {bx->omega_lo, bx->omega_hi};
    const auto& tb = std::get<Table>(fam_);
    return {tb.omega.front(), tb.omega.back()};
}

std::vector<double> SpectralDensity::breakpoints() const {
    std::vector<double> out;
    if (const auto* bx = std::get_if<Box>(&fam_)) {
        if (bx->omega_lo > 0.0) out.push_back(bx->omega_lo);
        out.push_back(bx->omega_hi);
    } else if (const auto* tb = std::get_if<Table>(&fam_)) {
        for (double w : tb->omega) {
            if (w > 0.0) out.push_back(w);
        }
    }
    return out;
}

double SpectralDensity::default_cutoff() const {
    if (const auto* pl = std::get_if<PowerLawExpCutoff>(&fam_)) return 50.0 * pl->omega_c;
    return 10.0 * support().second;
}

double SpectralDensity::sup_value() const {
    if (const auto* pl = std::get_if<PowerLawExpCutoff>(&fam_)) {
        return pl->alpha * std::pow(pl->s, pl->s) * std::exp(-pl->s) * pl->omega_c;
    }
    if (const auto* bx = std::get_if<Box>(&fam_)) return bx->alpha;
    const auto& tb = std::get<Table>(fam_);
    return *std::max_element(tb.j.begin(), tb.j.end());
}

double SpectralDensity::limit_at_zero_plus() const {
    if (std::holds_alternative<PowerLawExpCutoff>(fam_)) return 0.0;
    if (const auto* bx = std::get_if<Box>(&fam_)) return bx->omega_lo == 0.0 ? bx->alpha : 0.0;
    const auto& tb = std::get<Table>(fam_);
    return tb.omega.front() == 0.0 ? tb.j.front() : 0.0;
}

double SpectralDensity::origin_exponent() const {
    if (const auto* pl = std::get_if<PowerLawExpCutoff>(&fam_)) return pl->s;
    if (const auto* bx = std::get_if<Box>(&fam_)) {
        return bx->omega_lo > 0.0 ? kInf : (bx->alpha > 0.0 ? 0.0 : kInf);
    }
    const auto& tb = std::get<Table>(fam_);
    if (tb.omega.front() > 0.0) return kInf;
    return tb.j.front() > 0.0 ? 0.0 : 1.0;
}

bool SpectralDensity::vanishes_superlinearly_at_zero() const {
    return origin_exponent() > 1.0;
}

bool SpectralDensity::continuous_at(double w) const {
    if (const auto* bx = std::get_if<Box>(&fam_)) {
        if (bx->alpha == 0.0) return true;
        return w != bx->omega_lo && w != bx->omega_hi;
    }
    if (const auto* tb = std::get_if<Table>(&fam_)) {
        if (w == tb->omega.front() && tb->j.front() > 0.0) return false;
        if (w == tb->omega.back() && tb->j.back() > 0.0) return false;
    }
    return true;
}

SpectralDensity SpectralDensity::scaled(double factor) const {
    if (!(factor >= 0.0)) throw std::invalid_argument("scaled: factor must be >= 0");
    if (const auto* pl = std::get_if<PowerLawExpCutoff>(&fam_)) {
        return SpectralDensity(PowerLawExpCutoff{pl->alpha * factor, pl->s, pl->omega_c});
    }
    if (const auto* bx = std::get_if<Box>(&fam_)) {
        return SpectralDensity(Box{bx->alpha * factor, bx->omega_lo, bx->omega_hi});
    }
    auto tb = std::get<Table>(fam_);
    for (double& v : tb.j) v *= factor;
    return SpectralDensity(std::move(tb));
}

double ThermalDensities::j_plus(double omega) const {
    if (omega <= 0.0) return 0.0;
    // 1/(1 - e^{-y}) via expm1 is stable for every y > 0.
    const double occ = 1.0 / (-std::expm1(-beta * omega));
    return base(omega) * occ;
}

double ThermalDensities::j_minus(double omega) const {
    if (omega <= 0.0) return 0.0;
    const double occ = 1.0 / (-std::expm1(-beta * omega));
    // (occ - 1) keeps j_plus - j_minus == J exact in floating point.
    return base(omega) * (occ - 1.0);
}

ThermalDensities thermal_split(const SpectralDensity& j, double beta) {
    if (!(beta > 0.0)) {
        throw std::invalid_argument(
            "thermal_split: beta must be > 0 (zero temperature is the "
            "beta-absent code path)");
    }
    return ThermalDensities{beta, j};
}

double evaluate_density(const SpectralDensity& j, double omega) { return j(omega); }

double hilbert_pv(const SpectralDensity& j, double omega, const QuadratureSettings& q) {
    const double cutoff = resolve_cutoff(j, q);
    if (omega >= cutoff) {
        throw InvalidCutoff("hilbert_pv: omega >= cutoff_upper");
    }
    if (j.is_table()) {
        return table_pv(std::get<Table>(j.family()), omega, cutoff);
    }
    return pv_engine(problem_for(j), omega, cutoff, q.rel_tol, q.subtraction_window);
}

double hilbert_pv_plus(const ThermalDensities& th, double omega, const QuadratureSettings& q) {
    const double cutoff = resolve_cutoff(th.base, q);
    if (omega >= cutoff) throw InvalidCutoff("hilbert_pv_plus: omega >= cutoff_upper");
    return pv_engine(problem_for_thermal(th, true), omega, cutoff, q.rel_tol,
                     q.subtraction_window);
}

double hilbert_pv_minus(const ThermalDensities& th, double omega, const QuadratureSettings& q) {
    const double cutoff = resolve_cutoff(th.base, q);
    if (omega >= cutoff) throw InvalidCutoff("hilbert_pv_minus: omega >= cutoff_upper");
    return pv_engine(problem_for_thermal(th, false), omega, cutoff, q.rel_tol,
                     q.subtraction_window);
}

double integrate_density(const SpectralDensity& j, double upper, double rel_tol) {
    if (!(upper > 0.0)) throw std::invalid_argument("integrate_density: upper must be > 0");
    const auto p = problem_for(j);
    const double lo = std::max(0.0, p.support_lo);
    const double hi = std::min(upper, p.support_hi);
    if (!(hi > lo)) return 0.0;
    std::vector<double> edges = {lo, hi};
    for (double b : p.breaks) {
        if (b > lo && b < hi) edges.push_back(b);
    }
    const auto cells = make_cells(std::move(edges), p.origin_exponent, rel_tol);
    auto cell_fn = [&](const std::pair<double, double>&, double x) { return p.density(x); };
    return refine(cells, cell_fn, rel_tol, "integrate_density");
}

}  // namespace spinboson::spectral
