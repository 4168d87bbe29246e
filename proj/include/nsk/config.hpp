#pragma once

// Run configuration: a line-oriented "key = value" format with [section]
// headers. '#' and ';' start comments. Every key has a default; unknown
// sections or keys are rejected.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "nsk/coefficients.hpp"
#include "nsk/composite.hpp"
#include "nsk/error.hpp"
#include "nsk/middle_states.hpp"
#include "nsk/solver.hpp"
#include "nsk/states.hpp"
#include "nsk/thermo.hpp"

namespace nsk {

enum class ScenarioKind { contact, composite, rarefaction, convergence, profile_validation };
enum class PerturbationShape { gaussian, sine_packet };

struct PerturbationSpec {
    PerturbationShape shape = PerturbationShape::gaussian;
    double amp_phi = 0.0;
    double amp_psi = 0.0;
    double amp_zeta = 0.0; ///< amplitude of zeta / sqrt(gamma - 1)
    double center = 0.0;
    double width = 1.0;
    double wavenumber = 1.0; ///< sine packet only

    /// Bump profile at x (unit amplitude).
    double shape_at(double x) const {
        const double y = (x - center) / width;
        const double g = std::exp(-y * y);
        return shape == PerturbationShape::gaussian ? g : g * std::sin(wavenumber * (x - center));
    }
};

struct RunConfig {
    ThermoParams thermo{};
    PowerLawModel model = PowerLawModel::default_model();
    double kappa_theta_threshold = 0.05; ///< the smallness level asked of |kappa_theta|
    EndStates ends{};
    ScenarioKind kind = ScenarioKind::contact;
    Family family = Family::minus; ///< rarefaction scenario
    ScenarioKind convergence_wave = ScenarioKind::contact;
    ProfileOptions profile{};
    double L = 20.0;
    std::size_t N = 800;
    SolverSettings solver{};
    std::vector<double> snapshots;
    PerturbationSpec perturbation{};
    std::string out_dir = "out";
    bool residuals = true;
    std::size_t convergence_levels = 3;

    /// Resolved "section.key = value" pairs in a fixed order.
    std::vector<std::pair<std::string, std::string>> resolved;

    WaveMode wave_mode() const {
        const ScenarioKind k = kind == ScenarioKind::convergence ? convergence_wave : kind;
        switch (k) {
        case ScenarioKind::composite: return WaveMode::full_composite;
        case ScenarioKind::rarefaction:
            return family == Family::minus ? WaveMode::rarefaction_minus : WaveMode::rarefaction_plus;
        default: return WaveMode::contact_only;
        }
    }
};

inline std::string to_string(ScenarioKind k) {
    switch (k) {
    case ScenarioKind::contact: return "contact";
    case ScenarioKind::composite: return "composite";
    case ScenarioKind::rarefaction: return "rarefaction";
    case ScenarioKind::convergence: return "convergence";
    case ScenarioKind::profile_validation: return "profile-validation";
    }
    return "?";
}

namespace detail {

inline std::string trim(std::string_view s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

inline std::string format_double(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

inline double parse_double(const std::string& key, const std::string& v) {
    double out = 0.0;
    const char* b = v.data();
    const char* e = v.data() + v.size();
    auto [p, ec] = std::from_chars(b, e, out);
    if (ec != std::errc() || p != e || !std::isfinite(out))
        throw ValidationError("'" + key + "' expects a finite number, got '" + v + "'");
    return out;
}

inline std::size_t parse_size(const std::string& key, const std::string& v) {
    std::size_t out = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size())
        throw ValidationError("'" + key + "' expects a nonnegative integer, got '" + v + "'");
    return out;
}

inline bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "yes" || v == "1" || v == "on") return true;
    if (v == "false" || v == "no" || v == "0" || v == "off") return false;
    throw ValidationError("'" + key + "' expects true or false, got '" + v + "'");
}

inline std::vector<double> parse_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::string item;
    std::istringstream is(v);
    while (std::getline(is, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(parse_double(key, item));
    }
    return out;
}

/// Ordered table of every recognised key with its default value.
inline const std::vector<std::pair<std::string, std::string>>& default_table() {
    static const std::vector<std::pair<std::string, std::string>> t = {
        {"thermo.R", "1"},
        {"thermo.gamma", "1.4"},
        {"thermo.A", "1"},
        {"coefficients.model", "default"},
        {"coefficients.mu0", "1"},
        {"coefficients.mu_exp", "0"},
        {"coefficients.kappa0", "0.1"},
        {"coefficients.kappa_exp", "3"},
        {"coefficients.K1", "1"},
        {"coefficients.eps", "0.01"},
        {"coefficients.alpha0", "1"},
        {"coefficients.alpha_exp", "1"},
        {"coefficients.test_mode", "false"},
        {"coefficients.kappa_theta_threshold", "0.05"},
        {"states.v_minus", "1"},
        {"states.u_minus", "0"},
        {"states.theta_minus", "1"},
        {"states.v_plus", "1"},
        {"states.u_plus", "0"},
        {"states.theta_plus", "1"},
        {"scenario.kind", "contact"},
        {"scenario.family", "minus"},
        {"scenario.wave", "contact"},
        {"scenario.levels", "3"},
        {"scenario.profile_half_width", "0"},
        {"scenario.profile_points", "2001"},
        {"grid.L", "20"},
        {"grid.N", "800"},
        {"solver.cfl", "0.1"},
        {"solver.t_final", "1"},
        {"solver.cadence", "10"},
        {"solver.max_halvings", "10"},
        {"solver.v_min", "0"},
        {"solver.v_max", "inf"},
        {"solver.theta_min", "0"},
        {"solver.theta_max", "inf"},
        {"solver.snapshots", ""},
        {"perturbation.shape", "gaussian"},
        {"perturbation.amp_phi", "0"},
        {"perturbation.amp_psi", "0"},
        {"perturbation.amp_zeta", "0"},
        {"perturbation.center", "0"},
        {"perturbation.width", "1"},
        {"perturbation.wavenumber", "1"},
        {"output.dir", "out"},
        {"output.residuals", "true"},
    };
    return t;
}

inline bool known_key(const std::string& k) {
    const auto& t = default_table();
    return std::any_of(t.begin(), t.end(), [&](const auto& e) { return e.first == k; });
}

inline double parse_bound(const std::string& key, const std::string& v) {
    if (v == "inf") return std::numeric_limits<double>::infinity();
    return parse_double(key, v);
}

inline void require(bool ok, const std::string& what) {
    if (!ok) throw ValidationError(what);
}

} // namespace detail

/// Raw "section.key" -> value map, with unknown keys and malformed lines
/// reported by line number.
inline std::map<std::string, std::string> parse_entries(std::string_view text) {
    std::map<std::string, std::string> out;
    std::string section;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        const std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        std::string line(raw);
        if (auto c = line.find_first_of("#;"); c != std::string::npos) line.erase(c);
        line = detail::trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ParseError(line_no, "unterminated section header");
            section = detail::trim(std::string_view(line).substr(1, line.size() - 2));
            if (section.empty()) throw ParseError(line_no, "empty section name");
            const std::string prefix = section + ".";
            const auto& t = detail::default_table();
            if (std::none_of(t.begin(), t.end(), [&](const auto& e) { return e.first.rfind(prefix, 0) == 0; }))
                throw ParseError(line_no, "unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(line_no, "expected 'key = value'");
        if (section.empty()) throw ParseError(line_no, "key outside of any [section]");
        const std::string key = detail::trim(std::string_view(line).substr(0, eq));
        const std::string val = detail::trim(std::string_view(line).substr(eq + 1));
        if (key.empty()) throw ParseError(line_no, "missing key");
        const std::string full = section + "." + key;
        if (!detail::known_key(full)) throw ParseError(line_no, "unknown key '" + key + "' in [" + section + "]");
        if (out.count(full)) throw ParseError(line_no, "duplicate key '" + full + "'");
        out[full] = val;
    }
    return out;
}

/// Builds and validates a RunConfig from explicit entries (missing keys take
/// defaults). Scenario requirements are checked here, including the middle
/// state solve for composite runs.
inline RunConfig build_config(const std::map<std::string, std::string>& entries) {
    for (const auto& [k, v] : entries)
        if (!detail::known_key(k)) throw ValidationError("unknown key '" + k + "'");
    RunConfig c;
    for (const auto& [k, def] : detail::default_table()) {
        auto it = entries.find(k);
        c.resolved.emplace_back(k, it == entries.end() ? def : it->second);
    }
    auto get = [&](const std::string& k) -> const std::string& {
        for (const auto& e : c.resolved)
            if (e.first == k) return e.second;
        throw ValidationError("internal: missing key " + k);
    };
    auto num = [&](const std::string& k) { return detail::parse_double(k, get(k)); };

    using detail::require;
    c.thermo = {num("thermo.R"), num("thermo.gamma"), num("thermo.A")};
    require(c.thermo.R > 0, "thermo.R must be positive");
    require(c.thermo.gamma > 1, "thermo.gamma must exceed 1");
    require(c.thermo.A > 0, "thermo.A must be positive");

    const std::string model = get("coefficients.model");
    require(model == "default" || model == "power-law" || model == "constant",
            "coefficients.model must be one of default, power-law, constant");
    PowerLawModel m;
    m.name = model;
    m.mu0 = num("coefficients.mu0");
    m.kappa0 = num("coefficients.kappa0");
    m.alpha0 = num("coefficients.alpha0");
    m.eps = num("coefficients.eps");
    m.K1 = num("coefficients.K1");
    m.test_mode = detail::parse_bool("coefficients.test_mode", get("coefficients.test_mode"));
    if (model == "default") {
        m.mu_exp = 0.0;
        m.kappa_exp = 3.0;
        m.alpha_exp = 1.0;
    } else if (model == "constant") {
        m.mu_exp = m.kappa_exp = m.alpha_exp = 0.0;
        m.eps = 0.0;
    } else {
        m.mu_exp = num("coefficients.mu_exp");
        m.kappa_exp = num("coefficients.kappa_exp");
        m.alpha_exp = num("coefficients.alpha_exp");
    }
    c.model = m;
    c.kappa_theta_threshold = num("coefficients.kappa_theta_threshold");
    require(c.kappa_theta_threshold > 0, "coefficients.kappa_theta_threshold must be positive");

    c.ends = {num("states.v_minus"), num("states.u_minus"), num("states.theta_minus"),
              num("states.v_plus"),  num("states.u_plus"),  num("states.theta_plus")};
    require(c.ends.v_minus > 0, "states.v_minus must be positive");
    require(c.ends.v_plus > 0, "states.v_plus must be positive");
    require(c.ends.theta_minus > 0, "states.theta_minus must be positive");
    require(c.ends.theta_plus > 0, "states.theta_plus must be positive");

    auto kind_of = [&](const std::string& key, const std::string& s) {
        if (s == "contact") return ScenarioKind::contact;
        if (s == "composite") return ScenarioKind::composite;
        if (s == "rarefaction") return ScenarioKind::rarefaction;
        if (s == "convergence") return ScenarioKind::convergence;
        if (s == "profile-validation") return ScenarioKind::profile_validation;
        throw ValidationError(key + " must be one of contact, composite, rarefaction, convergence, profile-validation");
    };
    c.kind = kind_of("scenario.kind", get("scenario.kind"));
    c.convergence_wave = kind_of("scenario.wave", get("scenario.wave"));
    require(c.convergence_wave == ScenarioKind::contact || c.convergence_wave == ScenarioKind::composite ||
                c.convergence_wave == ScenarioKind::rarefaction,
            "scenario.wave must be contact, composite or rarefaction");
    const std::string fam = get("scenario.family");
    require(fam == "minus" || fam == "plus", "scenario.family must be minus or plus");
    c.family = fam == "minus" ? Family::minus : Family::plus;
    c.convergence_levels = detail::parse_size("scenario.levels", get("scenario.levels"));
    require(c.convergence_levels >= 3, "scenario.levels must be at least 3");
    c.profile.half_width = num("scenario.profile_half_width");
    require(c.profile.half_width >= 0, "scenario.profile_half_width must be nonnegative (0 selects the default)");
    c.profile.n_points = detail::parse_size("scenario.profile_points", get("scenario.profile_points"));
    require(c.profile.n_points >= 101 && c.profile.n_points % 2 == 1, "scenario.profile_points must be odd and >= 101");

    c.L = num("grid.L");
    c.N = detail::parse_size("grid.N", get("grid.N"));
    require(c.L > 0, "grid.L must be positive");
    require(c.N >= 8, "grid.N must be at least 8");

    c.solver.cfl = num("solver.cfl");
    c.solver.t_final = num("solver.t_final");
    c.solver.cadence = detail::parse_size("solver.cadence", get("solver.cadence"));
    c.solver.max_halvings = static_cast<int>(detail::parse_size("solver.max_halvings", get("solver.max_halvings")));
    c.solver.abort_box = {detail::parse_bound("solver.v_min", get("solver.v_min")),
                          detail::parse_bound("solver.v_max", get("solver.v_max")),
                          detail::parse_bound("solver.theta_min", get("solver.theta_min")),
                          detail::parse_bound("solver.theta_max", get("solver.theta_max"))};
    c.solver.validate();
    require(c.solver.abort_box.v_min < c.solver.abort_box.v_max, "solver.v_min must be below solver.v_max");
    require(c.solver.abort_box.theta_min < c.solver.abort_box.theta_max,
            "solver.theta_min must be below solver.theta_max");
    c.snapshots = detail::parse_list("solver.snapshots", get("solver.snapshots"));
    std::sort(c.snapshots.begin(), c.snapshots.end());
    for (std::size_t i = 0; i < c.snapshots.size(); ++i) {
        require(c.snapshots[i] >= 0 && c.snapshots[i] <= c.solver.t_final,
                "solver.snapshots must lie in [0, t_final]");
        if (i > 0)
            require(std::lround(c.snapshots[i]) != std::lround(c.snapshots[i - 1]),
                    "solver.snapshots must round to distinct integer times");
    }

    const std::string shape = get("perturbation.shape");
    require(shape == "gaussian" || shape == "sine-packet", "perturbation.shape must be gaussian or sine-packet");
    c.perturbation.shape = shape == "gaussian" ? PerturbationShape::gaussian : PerturbationShape::sine_packet;
    c.perturbation.amp_phi = num("perturbation.amp_phi");
    c.perturbation.amp_psi = num("perturbation.amp_psi");
    c.perturbation.amp_zeta = num("perturbation.amp_zeta");
    c.perturbation.center = num("perturbation.center");
    c.perturbation.width = num("perturbation.width");
    c.perturbation.wavenumber = num("perturbation.wavenumber");
    require(c.perturbation.width > 0, "perturbation.width must be positive");
    require(std::abs(c.perturbation.center) < c.L, "perturbation.center must lie inside the domain");

    c.out_dir = get("output.dir");
    require(!c.out_dir.empty(), "output.dir must not be empty");
    c.residuals = detail::parse_bool("output.residuals", get("output.residuals"));

    // scenario-specific requirements
    const double pm = c.ends.p_minus(c.thermo), pp = c.ends.p_plus(c.thermo);
    const WaveMode mode = c.wave_mode();
    double theta_hi = std::max(c.ends.theta_minus, c.ends.theta_plus);
    if (mode == WaveMode::contact_only) {
        require(c.ends.u_minus == c.ends.u_plus, "contact scenario requires u_minus == u_plus");
        require(std::abs(pm - pp) <= 1e-12 * pp, "contact scenario requires p_minus == p_plus");
    } else if (mode == WaveMode::full_composite) {
        const MiddleStates ms = solve_middle_states(c.ends, c.thermo);
        if (!ms.in_rarefaction_region(c.thermo, c.ends))
            throw ValidationError("composite scenario requires end states joined by two rarefactions and a contact");
        theta_hi = std::max({theta_hi, ms.theta_m_minus, ms.theta_m_plus});
    } else {
        const double sm = entropy(c.thermo, c.ends.v_minus, c.ends.theta_minus);
        const double sp = entropy(c.thermo, c.ends.v_plus, c.ends.theta_plus);
        require(std::abs(sm - sp) <= 1e-10 * std::max(1.0, std::abs(sm)),
                "rarefaction scenario requires equal entropies on both sides");
    }
    // kappa must stay positive up to twice the largest temperature
    m.validate(2.0 * theta_hi);
    return c;
}

inline RunConfig parse_config(std::string_view text) { return build_config(parse_entries(text)); }

/// Overrides one "section.key" entry and rebuilds; used by sweeps.
inline RunConfig with_override(const RunConfig& base, const std::string& key, const std::string& value) {
    if (!detail::known_key(key)) throw ValidationError("unknown key '" + key + "'");
    std::map<std::string, std::string> e(base.resolved.begin(), base.resolved.end());
    e[key] = value;
    return build_config(e);
}

inline std::string resolved_text(const RunConfig& c) {
    std::string out;
    for (const auto& [k, v] : c.resolved) out += k + " = " + v + "\n";
    return out;
}

} // namespace nsk
