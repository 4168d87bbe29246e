#include <catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nsk/scenario.hpp"

using namespace nsk;
namespace fs = std::filesystem;
using Catch::Matchers::ContainsSubstring;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("nsk_scenario_test_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string meta_value(const fs::path& meta, const std::string& key) {
    std::ifstream in(meta);
    std::string line;
    while (std::getline(in, line))
        if (line.rfind(key + " = ", 0) == 0) return line.substr(key.size() + 3);
    return {};
}

const char* contact_run = R"(
[thermo]
gamma = 1.1
[states]
v_minus = 1
theta_minus = 1
v_plus = 1.05
theta_plus = 1.05
[grid]
L = 20
N = 401
[solver]
cfl = 0.5
t_final = 2
cadence = 20
snapshots = 0, 1, 2
[perturbation]
amp_phi = 0.05
amp_psi = 0.05
amp_zeta = 0.05
)";

} // namespace

TEST_CASE("evolution writes the documented artifacts deterministically") {
    const RunConfig c = parse_config(contact_run);
    const fs::path a = scratch("a"), b = scratch("b");
    const RunResult ra = run_scenario(c, a);
    const RunResult rb = run_scenario(c, b);
    REQUIRE(ra.exit_code == 0);
    REQUIRE(rb.exit_code == 0);
    for (const char* f : {"diagnostics.csv", "profile_t000.csv", "profile_t001.csv", "profile_t002.csv",
                          "wave_t002.csv"}) {
        INFO(f);
        REQUIRE(fs::exists(a / f));
        CHECK(slurp(a / f) == slurp(b / f));
    }
    const std::string csv = slurp(a / "diagnostics.csv");
    CHECK(csv.rfind(std::string(DiagnosticsRecord::header) + "\n", 0) == 0);
    CHECK(csv.find("nan") == std::string::npos);
    CHECK(csv.find("inf") == std::string::npos);
    CHECK(slurp(a / "profile_t001.csv").rfind("x,v,u,theta,V,U,Theta\n", 0) == 0);

    CHECK(meta_value(a / "meta.txt", "thermo.gamma") == "1.1");
    CHECK(meta_value(a / "meta.txt", "result.status") == "ok");
    CHECK_FALSE(meta_value(a / "meta.txt", "decay.sup_ratio").empty());
    CHECK_FALSE(meta_value(a / "meta.txt", "fit.r1_sup_slope").empty());
    CHECK(meta_value(a / "meta.txt", "assumptions.coupling_g_zero") == "yes");
    CHECK_FALSE(meta_value(a / "meta.txt", "assumptions.kappa_theta_small").empty());
    CHECK(ra.records.front().t == 0.0);
    CHECK(ra.records.back().t == 2.0);
    CHECK(ra.summary->ratio < 1.0);
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST_CASE("an abort is reported with a nonzero exit and a reason") {
    RunConfig c = with_override(parse_config(contact_run), "solver.v_max", "1.06");
    const fs::path out = scratch("abort");
    const RunResult r = run_scenario(c, out);
    CHECK(r.exit_code == 2);
    CHECK(r.status == "aborted");
    CHECK_THAT(meta_value(out / "meta.txt", "result.abort_reason"), ContainsSubstring("admissible box"));
    CHECK(fs::exists(out / "diagnostics.csv"));
    fs::remove_all(out);
}

TEST_CASE("unperturbed contact stays within the residual forcing") {
    RunConfig c = parse_config(contact_run);
    c = with_override(c, "perturbation.amp_phi", "0");
    c = with_override(c, "perturbation.amp_psi", "0");
    c = with_override(c, "perturbation.amp_zeta", "0");
    c = with_override(c, "solver.t_final", "5");
    c = with_override(c, "solver.snapshots", "");
    const fs::path out = scratch("exact");
    const RunResult r = run_scenario(c, out);
    REQUIRE(r.exit_code == 0);
    // the deviation is driven by the ansatz defect: bounded by its time integral
    double forcing = 0;
    for (std::size_t k = 1; k < r.records.size(); ++k) {
        const auto& p = r.records[k - 1];
        const auto& q = r.records[k];
        forcing += 0.5 * (q.t - p.t) * (p.r1_sup + p.r2_sup + q.r1_sup + q.r2_sup);
        CHECK(q.sup_perturbation() <= forcing);
    }
    CHECK(r.records.front().sup_perturbation() == 0.0);
    fs::remove_all(out);
}

TEST_CASE("convergence scenario reports the observed order") {
    const RunConfig c = parse_config(R"(
[thermo]
gamma = 1.1
[states]
v_minus = 1
theta_minus = 1
v_plus = 1.05
theta_plus = 1.05
[scenario]
kind = convergence
[grid]
L = 20
N = 200
[solver]
cfl = 0.5
t_final = 0.25
[perturbation]
amp_phi = 0.05
amp_psi = 0.05
amp_zeta = 0.05
width = 1.5
)");
    const fs::path out = scratch("conv");
    const RunResult r = run_scenario(c, out);
    REQUIRE(r.exit_code == 0);
    CHECK(r.level_errors.size() == 2);
    CHECK(r.observed_order > 1.7);
    CHECK(r.observed_order < 2.3);
    CHECK_FALSE(meta_value(out / "meta.txt", "result.observed_order").empty());
    CHECK(fs::exists(out / "convergence.csv"));
    fs::remove_all(out);
}

TEST_CASE("profile validation writes its report and passes") {
    const RunConfig c = parse_config(R"(
[thermo]
gamma = 1.1
[states]
v_minus = 1
theta_minus = 1
v_plus = 1.05
theta_plus = 1.05
[scenario]
kind = profile-validation
)");
    const fs::path out = scratch("profile");
    const RunResult r = run_scenario(c, out);
    CHECK(r.exit_code == 0);
    CHECK(r.checks_passed);
    const std::string rep = slurp(out / "profile_validation.txt");
    for (const char* k : {"ode_residual", "erf_oracle_error", "mass_identity", "envelope_ratio_t100", "r1_slope"})
        CHECK_THAT(rep, ContainsSubstring(k));
    CHECK(rep.find("FAILED") == std::string::npos);
    CHECK_FALSE(meta_value(out / "meta.txt", "fit.envelope_c0").empty());
    CHECK_FALSE(meta_value(out / "meta.txt", "fit.envelope_c1").empty());
    fs::remove_all(out);
}

TEST_CASE("rarefaction scenario runs") {
    // 1-rarefaction from (0.6139.., -0.518.., 1.05) to the middle state (1, 0, 1)
    const RunConfig c = parse_config(R"(
[thermo]
gamma = 1.1
[states]
v_minus = 0.6139132535407594
u_minus = -0.5180082968016476
theta_minus = 1.05
v_plus = 1
u_plus = 0
theta_plus = 1
[scenario]
kind = rarefaction
family = minus
[grid]
L = 30
N = 301
[solver]
cfl = 0.5
t_final = 1
)");
    const fs::path out = scratch("rare");
    const RunResult r = run_scenario(c, out);
    CHECK(r.exit_code == 0);
    CHECK(meta_value(out / "meta.txt", "result.mode") == "rarefaction-only-minus");
    fs::remove_all(out);
}
