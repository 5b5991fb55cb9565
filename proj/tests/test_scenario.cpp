#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <doctest.h>
#include <json.hpp>

#include "spinboson/scenario.hpp"
#include "support/reference.hpp"

using namespace spinboson;
namespace fs = std::filesystem;

namespace {

std::string scenario_dir() { return SPINBOSON_SCENARIO_DIR; }

std::string write_temp(const std::string& name, const std::string& content) {
    const std::string path = "scn_" + name;
    std::ofstream out(path);
    out << content;
    return path;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> csv_lines(const fs::path& p) {
    std::ifstream in(p);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

double csv_field(const std::string& line, std::size_t idx) {
    std::istringstream row(line);
    std::string item;
    for (std::size_t i = 0; i <= idx; ++i) std::getline(row, item, ',');
    return std::stod(item);
}

}  // namespace

TEST_CASE("load_scenario: minimal file and defaults") {
    const auto path = write_temp("minimal.cfg",
                                 "[system]\nepsilon = 0\ndelta = 1\n"
                                 "[bath]\nfamily = ohmic\nalpha = 0.1\nomega_c = 10\n");
    const auto s = cli::load_scenario(path);
    CHECK_FALSE(s.beta.has_value());
    CHECK(s.run.t_max == 0.0);  // auto
    CHECK(s.run.n_points == 200);
    CHECK(s.run.initial_state_name == "up");
    CHECK(s.run.want_p);
    CHECK(s.run.want_tr_u);
    CHECK(s.run.want_tr_c);
    CHECK_FALSE(s.oracle.has_value());
    std::remove(path.c_str());
}

TEST_CASE("load_scenario: validation failures name the field") {
    const auto bad_delta = write_temp("bad_delta.cfg",
                                      "[system]\nepsilon = 0\ndelta = -1\n"
                                      "[bath]\nfamily = ohmic\nalpha = 0.1\nomega_c = 10\n");
    try {
        cli::load_scenario(bad_delta);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(e.field == "system.delta");
    }
    std::remove(bad_delta.c_str());

    const auto unknown = write_temp("unknown.cfg",
                                    "[system]\nepsilon = 0\ndelta = 1\ngama = 0.2\n"
                                    "[bath]\nfamily = ohmic\nalpha = 0.1\nomega_c = 10\n");
    try {
        cli::load_scenario(unknown);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(e.field == "system.gama");
    }
    std::remove(unknown.c_str());

    const auto junk = write_temp("junk.cfg", "[system]\nepsilon 0\n");
    try {
        cli::load_scenario(junk);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
    }
    std::remove(junk.c_str());

    const auto notnum = write_temp("notnum.cfg",
                                   "[system]\nepsilon = fast\ndelta = 1\n"
                                   "[bath]\nfamily = ohmic\nalpha = 0.1\nomega_c = 10\n");
    CHECK_THROWS_AS(cli::load_scenario(notnum), ValidationError);
    std::remove(notnum.c_str());

    const auto dup = write_temp("dup.cfg",
                                "[system]\nepsilon = 0\nepsilon = 1\ndelta = 1\n"
                                "[bath]\nfamily = ohmic\nalpha = 0.1\nomega_c = 10\n");
    CHECK_THROWS_AS(cli::load_scenario(dup), ValidationError);
    std::remove(dup.c_str());
}

TEST_CASE("load_scenario: custom states and observables subsets") {
    const auto path = write_temp("custom.cfg",
                                 "[system]\nepsilon = 0\ndelta = 1\n"
                                 "[bath]\nfamily = ohmic\nalpha = 0.1\nomega_c = 10\n"
                                 "[run]\ninitial_state = custom\nstate = 1, 0, 1, 0\n"
                                 "observables = p\n");
    const auto s = cli::load_scenario(path);
    CHECK(s.run.want_p);
    CHECK_FALSE(s.run.want_tr_u);
    CHECK(s.run.initial_state.norm() == doctest::Approx(1.0).epsilon(1e-15));
    std::remove(path.c_str());

    const auto bad = write_temp("badobs.cfg",
                                "[system]\nepsilon = 0\ndelta = 1\n"
                                "[bath]\nfamily = ohmic\nalpha = 0.1\nomega_c = 10\n"
                                "[run]\nobservables = p,nope\n");
    CHECK_THROWS_AS(cli::load_scenario(bad), ValidationError);
    std::remove(bad.c_str());
}

TEST_CASE("load_scenario: table bath resolves relative to the scenario file") {
    {
        std::ofstream tab("scn_density.txt");
        tab << "0.5 0.0\n1.5 0.2\n2.5 0.0\n";
    }
    const auto path = write_temp("table.cfg",
                                 "[system]\nepsilon = 0\ndelta = 1\n"
                                 "[bath]\nfamily = table\nfile = scn_density.txt\n");
    const auto s = cli::load_scenario(path);
    CHECK(s.bath(1.5) == doctest::Approx(0.2).epsilon(1e-15));
    std::remove(path.c_str());
    std::remove("scn_density.txt");
}

TEST_CASE("run_scenario: Ohmic reference artifacts") {
    const auto s = cli::load_scenario(scenario_dir() + "/ohmic_reference.cfg");
    cli::RunOptions opt;
    opt.out_dir = "out_ohmic_a";
    REQUIRE(cli::run_scenario(s, opt) == 0);

    const auto doc = nlohmann::json::parse(slurp("out_ohmic_a/coefficients.json"));
    CHECK(doc.at("coefficients").at("gamma").get<double>() ==
          doctest::Approx(testref::kOhmicGamma).epsilon(1e-9));
    CHECK(doc.at("coefficients").at("sigma").get<double>() ==
          doctest::Approx(testref::kOhmicSigma).epsilon(1e-7));
    CHECK(doc.at("coefficients").at("beta").is_null());
    CHECK(doc.at("regime").at("regime").get<std::string>() == "DampedOscillation");
    // documented schema: required blocks and types
    for (const char* key : {"system", "coefficients", "regime", "run", "scenario"}) {
        CHECK(doc.contains(key));
    }
    CHECK(doc.at("coefficients").at("provenance").is_object());
    CHECK(doc.at("run").at("t_max").get<double>() == 20.0);

    const auto lines = csv_lines("out_ohmic_a/series.csv");
    REQUIRE(lines.size() == 202);
    CHECK(lines[0] == "t,re_p,im_p,abs_p,re_trU,im_trU,re_trC");
    CHECK(csv_field(lines[1], 0) == 0.0);
    CHECK(csv_field(lines[1], 1) == doctest::Approx(1.0).epsilon(1e-14));  // <sz> at t=0
    CHECK(csv_field(lines[1], 6) == doctest::Approx(2.0).epsilon(1e-13));  // tr C(0)
    CHECK(fs::exists("out_ohmic_a/plot.gp"));

    // byte-identical on rerun
    cli::RunOptions opt_b;
    opt_b.out_dir = "out_ohmic_b";
    REQUIRE(cli::run_scenario(s, opt_b) == 0);
    CHECK(slurp("out_ohmic_a/coefficients.json") == slurp("out_ohmic_b/coefficients.json"));
    CHECK(slurp("out_ohmic_a/series.csv") == slurp("out_ohmic_b/series.csv"));
    fs::remove_all("out_ohmic_a");
    fs::remove_all("out_ohmic_b");
}

TEST_CASE("run_scenario: pure oscillation keeps the envelope flat") {
    const auto s = cli::load_scenario(scenario_dir() + "/pure_oscillation.cfg");
    cli::RunOptions opt;
    opt.out_dir = "out_osc";
    REQUIRE(cli::run_scenario(s, opt) == 0);
    const auto doc = nlohmann::json::parse(slurp("out_osc/coefficients.json"));
    CHECK(doc.at("regime").at("regime").get<std::string>() == "PureOscillation");
    CHECK(doc.at("regime").at("off_resonance").get<bool>());
    const auto lines = csv_lines("out_osc/series.csv");
    for (std::size_t i = 1; i < lines.size(); ++i) {
        CHECK(std::abs(csv_field(lines[i], 3) - 1.0) < 1e-9);  // abs_p column
    }
    fs::remove_all("out_osc");
}

TEST_CASE("run_subcommand: regime and coeffs") {
    cli::RunOptions opt;
    opt.out_dir = "out_sub";
    REQUIRE(cli::run_subcommand("regime", scenario_dir() + "/ohmic_reference.cfg", opt) == 0);
    const auto doc = nlohmann::json::parse(slurp("out_sub/regime.json"));
    CHECK(doc.at("regime").get<std::string>() == "DampedOscillation");

    REQUIRE(cli::run_subcommand("coeffs", scenario_dir() + "/finite_temperature.cfg", opt) ==
            0);
    const auto cdoc = nlohmann::json::parse(slurp("out_sub/coefficients.json"));
    const auto prov = cdoc.at("coefficients").at("provenance");
    CHECK(prov.at("gamma_sum_form").get<double>() ==
          doctest::Approx(prov.at("gamma_coth_form").get<double>()).epsilon(1e-10));
    CHECK(prov.at("coth_ratio_vs_zero_T").get<double>() ==
          doctest::Approx(testref::kCothOne).epsilon(1e-12));
    CHECK(cdoc.at("coefficients").at("gamma").get<double>() ==
          doctest::Approx(testref::kBeta2GammaCoth).epsilon(1e-9));
    fs::remove_all("out_sub");
}

TEST_CASE("run_subcommand: solve-damping") {
    cli::RunOptions opt;
    opt.out_dir = "out_damp";
    REQUIRE(cli::run_subcommand("solve-damping", scenario_dir() + "/damping_box.cfg", opt) ==
            0);
    const auto doc = nlohmann::json::parse(slurp("out_damp/damping.json"));
    CHECK(doc.at("alpha_star").get<double>() ==
          doctest::Approx(testref::kInvLn2).epsilon(1e-8));
    CHECK(doc.at("residual").get<double>() < 1e-8);
    fs::remove_all("out_damp");

    // Ohmic: no positive amplitude works -> exit code 2, nothing written
    cli::RunOptions opt2;
    opt2.out_dir = "out_damp_none";
    CHECK(cli::run_subcommand("solve-damping", scenario_dir() + "/ohmic_reference.cfg",
                              opt2) == 2);
    CHECK_FALSE(fs::exists("out_damp_none/damping.json"));
    fs::remove_all("out_damp_none");
}

TEST_CASE("run_subcommand: oracle study artifacts") {
    cli::RunOptions opt;
    opt.out_dir = "out_oracle";
    REQUIRE(cli::run_subcommand("oracle", scenario_dir() + "/oracle_small.cfg", opt) == 0);
    const auto summary = nlohmann::json::parse(slurp("out_oracle/oracle/summary.json"));
    CHECK(summary.at("rows").size() == 2);
    CHECK(summary.at("bath").at("modes").get<int>() == 3);
    const auto lines = csv_lines("out_oracle/oracle/lambda_0.6.csv");
    REQUIRE(lines.size() == 7);
    CHECK(lines[0] == "t_limit,t_physical,re_sigma_z,p_limit,abs_error");
    for (std::size_t i = 1; i < lines.size(); ++i) {
        CHECK(csv_field(lines[i], 1) ==
              doctest::Approx(csv_field(lines[i], 0) / 0.36).epsilon(1e-12));
    }
    // oracle subcommand without an [oracle] section is a validation error
    CHECK(cli::run_subcommand("oracle", scenario_dir() + "/ohmic_reference.cfg", opt) == 1);
    fs::remove_all("out_oracle");
}

TEST_CASE("run_subcommand: evolve honors the auto t_max default") {
    const auto path = write_temp("auto_tmax.cfg",
                                 "[system]\nepsilon = 0\ndelta = 1\n"
                                 "[bath]\nfamily = ohmic\nalpha = 0.1\nomega_c = 10\n"
                                 "[run]\nn_points = 11\n");
    cli::RunOptions opt;
    opt.out_dir = "out_auto";
    REQUIRE(cli::run_subcommand("coeffs", path, opt) == 0);
    const auto doc = nlohmann::json::parse(slurp("out_auto/coefficients.json"));
    // gamma > 0: t_max = 20/gamma
    CHECK(doc.at("run").at("t_max").get<double>() ==
          doctest::Approx(20.0 / testref::kOhmicGamma).epsilon(1e-9));
    std::remove(path.c_str());

    // gamma = 0: t_max falls back to 20/delta
    const auto silent = write_temp("auto_tmax0.cfg",
                                   "[system]\nepsilon = 0\ndelta = 2\n"
                                   "[bath]\nfamily = ohmic\nalpha = 0\nomega_c = 10\n");
    REQUIRE(cli::run_subcommand("coeffs", silent, opt) == 0);
    const auto doc0 = nlohmann::json::parse(slurp("out_auto/coefficients.json"));
    CHECK(doc0.at("run").at("t_max").get<double>() == doctest::Approx(10.0).epsilon(1e-12));
    std::remove(silent.c_str());
    fs::remove_all("out_auto");
}

TEST_CASE("run_subcommand: json series format") {
    cli::RunOptions opt;
    opt.out_dir = "out_json";
    opt.format = cli::OutputFormat::Json;
    REQUIRE(cli::run_subcommand("evolve", scenario_dir() + "/ohmic_reference.cfg", opt) == 0);
    const auto doc = nlohmann::json::parse(slurp("out_json/series.json"));
    CHECK(doc.at("columns").size() == 7);
    CHECK(doc.at("rows").size() == 201);
    fs::remove_all("out_json");
}

TEST_CASE("run_subcommand: correlator artifact") {
    cli::RunOptions opt;
    opt.out_dir = "out_corr";
    REQUIRE(cli::run_subcommand("correlator", scenario_dir() + "/ohmic_reference.cfg", opt) ==
            0);
    const auto lines = csv_lines("out_corr/correlator.csv");
    REQUIRE(lines.size() == 202);
    CHECK(lines[0] ==
          "t,trC_anticommutator,trC_expanded,trC_difference,op_max_abs_difference");
    CHECK(csv_field(lines[1], 1) == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(csv_field(lines[1], 2) == doctest::Approx(2.0).epsilon(1e-13));
    fs::remove_all("out_corr");
}
