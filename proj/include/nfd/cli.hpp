#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "nfd/dephasing.hpp"
#include "nfd/errors.hpp"
#include "nfd/parallel.hpp"
#include "nfd/spectra.hpp"
#include "nfd/validation.hpp"

namespace nfd::cli {

using json = nlohmann::json;

enum ExitCode : int { ok = 0, validation_failed = 1, config_error = 2, numerical_failure = 3 };

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline const std::vector<std::string>& commands() {
    static const std::vector<std::string> c{"spectrum", "kernel", "dephase", "regimes", "reproduce", "validate"};
    return c;
}

struct Sweep {
    std::string axis;
    double from = 0.0, to = 0.0;
    int points = 1;
    bool log = true;

    std::vector<double> values() const {
        std::vector<double> v(points);
        for (int i = 0; i < points; ++i) {
            const double t = points == 1 ? 0.0 : double(i) / (points - 1);
            v[i] = log ? from * std::pow(to / from, t) : from + (to - from) * t;
        }
        if (points > 1) v.back() = to;
        return v;
    }
};

struct RunConfig {
    std::string command;
    std::optional<Material> material;
    std::string sigma_unit = "1/s";
    // beam; exactly one of v_over_c / tau
    std::optional<double> L, a, v_over_c, tau;
    double d = 0.0;
    double T = 300.0;
    bool high_T = false;
    std::optional<double> omega, k;
    std::optional<Sweep> sweep;
    std::string out;
    std::string psi_dump;
    double rel_tol = 1e-6, abs_tol = 0.0;
    unsigned threads = 0;
};

namespace detail {

inline double number(const json& j, const char* key) {
    const auto& v = j.at(key);
    if (!v.is_number()) throw ConfigError(std::string("'") + key + "' must be a number");
    return v.get<double>();
}

inline void only_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + " must be an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key())) throw ConfigError("unknown key '" + it.key() + "' in " + where);
}

inline double sigma_to_cgs(double s, const std::string& unit) {
    if (unit == "1/s") return s;
    if (unit == "S/cm" || unit == "1/(Ohm cm)") return s * constants::siemens_per_cm;
    throw ConfigError("sigma_unit must be one of 1/s, S/cm, 1/(Ohm cm)");
}

} // namespace detail

inline Material parse_material(const json& j, std::string* unit_out = nullptr) {
    detail::only_keys(j, {"type", "n", "sigma", "sigma_unit", "eps0"}, "material");
    const std::string type = j.at("type").get<std::string>();
    try {
        if (type == "vacuum") return Vacuum{};
        if (type == "ideal") return IdealMirror{};
        if (type == "dielectric") return make_dielectric(detail::number(j, "n"));
        if (type == "conductor") {
            const std::string unit = j.value("sigma_unit", std::string("1/s"));
            if (unit_out) *unit_out = unit;
            const double eps0 = j.contains("eps0") ? detail::number(j, "eps0") : 1.0;
            return make_conductor(detail::sigma_to_cgs(detail::number(j, "sigma"), unit), eps0);
        }
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    throw ConfigError("material type must be vacuum, ideal, dielectric or conductor");
}

inline RunConfig parse_config(const json& j) {
    detail::only_keys(j,
                      {"command", "material", "beam", "d", "T", "high_T", "omega", "k", "sweep", "out", "psi_dump",
                       "tolerance", "threads"},
                      "config");
    RunConfig c;
    if (j.contains("command")) c.command = j["command"].get<std::string>();
    if (j.contains("material")) c.material = parse_material(j["material"], &c.sigma_unit);
    if (j.contains("beam")) {
        const auto& b = j["beam"];
        detail::only_keys(b, {"L", "a", "v_over_c", "tau", "d"}, "beam");
        if (b.contains("L")) c.L = detail::number(b, "L");
        if (b.contains("a")) c.a = detail::number(b, "a");
        if (b.contains("v_over_c")) c.v_over_c = detail::number(b, "v_over_c");
        if (b.contains("tau")) c.tau = detail::number(b, "tau");
        if (b.contains("d")) c.d = detail::number(b, "d");
        if (c.v_over_c && c.tau) throw ConfigError("beam: give v_over_c or tau, not both");
    }
    if (j.contains("d")) c.d = detail::number(j, "d");
    if (j.contains("T")) c.T = detail::number(j, "T");
    if (j.contains("high_T")) c.high_T = j["high_T"].get<bool>();
    if (j.contains("omega")) c.omega = detail::number(j, "omega");
    if (j.contains("k")) c.k = detail::number(j, "k");
    if (j.contains("out")) c.out = j["out"].get<std::string>();
    if (j.contains("psi_dump")) c.psi_dump = j["psi_dump"].get<std::string>();
    if (j.contains("threads")) c.threads = j["threads"].get<unsigned>();
    if (j.contains("tolerance")) {
        const auto& t = j["tolerance"];
        detail::only_keys(t, {"rel", "abs"}, "tolerance");
        if (t.contains("rel")) c.rel_tol = detail::number(t, "rel");
        if (t.contains("abs")) c.abs_tol = detail::number(t, "abs");
    }
    if (j.contains("sweep")) {
        const auto& s = j["sweep"];
        detail::only_keys(s, {"axis", "from", "to", "points", "scale"}, "sweep");
        Sweep sw;
        sw.axis = s.at("axis").get<std::string>();
        sw.from = detail::number(s, "from");
        sw.to = detail::number(s, "to");
        sw.points = s.value("points", 11);
        const std::string scale = s.value("scale", std::string("log"));
        if (scale != "log" && scale != "linear") throw ConfigError("sweep scale must be log or linear");
        sw.log = scale == "log";
        c.sweep = sw;
    }
    return c;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_config(j);
}

inline void check_config(const RunConfig& c) {
    if (std::find(commands().begin(), commands().end(), c.command) == commands().end())
        throw ConfigError("command must be one of spectrum|kernel|dephase|regimes|reproduce|validate");
    if (!(c.rel_tol > 0.0 && c.rel_tol < 1.0)) throw ConfigError("tolerance.rel must lie in (0,1)");
    if (!(c.abs_tol >= 0.0)) throw ConfigError("tolerance.abs must be nonnegative");
    if (!(c.d >= 0.0)) throw ConfigError("d must be nonnegative");
    if (!(c.T >= 0.0)) throw ConfigError("T must be nonnegative");
    if (c.sweep) {
        const auto& s = *c.sweep;
        if (s.points < 1 || s.points > 100000) throw ConfigError("sweep points must lie in [1, 100000]");
        if (!(s.from > 0.0) || (!(s.to > s.from) && !(s.points == 1 && s.to == s.from)))
            throw ConfigError("sweep range must be positive and ordered");
    }
}

// ---- CSV

inline std::string fmt(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    std::ostringstream os;
    os << std::setprecision(17) << x;
    return os.str();
}

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void write(std::ostream& os) const {
        auto line = [&](const std::vector<std::string>& r) {
            for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
            os << '\n';
        };
        line(header);
        for (const auto& r : rows) line(r);
    }
};

// ---- scenario helpers

inline QuadratureSpec quad_spec(const RunConfig& c) {
    QuadratureSpec q;
    q.rel_tol = c.rel_tol;
    q.abs_tol = c.abs_tol;
    return q;
}

inline const Material& need_material(const RunConfig& c) {
    if (!c.material) throw ConfigError(c.command + ": material is required");
    return *c.material;
}

inline double need(const std::optional<double>& v, const char* what, const RunConfig& c) {
    if (!v) throw ConfigError(c.command + ": " + what + " is required");
    return *v;
}

inline BeamPair make_beam(const RunConfig& c, double d, std::optional<double> v_override = {}) {
    const double L = need(c.L, "beam.L", c), a = need(c.a, "beam.a", c);
    try {
        if (v_override) return beam_from_velocity(L, *v_override, a, d);
        if (c.v_over_c) return beam_from_velocity(L, *c.v_over_c, a, d);
        if (!c.tau) throw ConfigError(c.command + ": beam needs v_over_c or tau");
        BeamPair bp{L, *c.tau, a, d};
        check_beam(bp);
        if (!(bp.v() < constants::c)) throw DomainError("beam: v must be below c");
        return bp;
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
}

inline Scenario make_scenario(const RunConfig& c, const Material& m, double d, std::optional<double> v = {}) {
    Scenario sc{m, make_beam(c, d, v), c.T, c.high_T};
    sc.spec.rel_tol = c.rel_tol;
    sc.spec.abs_tol = c.abs_tol;
    try {
        check_scenario(sc);
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    return sc;
}

inline void require_axis(const RunConfig& c, std::initializer_list<const char*> axes) {
    if (!c.sweep) return;
    for (const char* a : axes)
        if (c.sweep->axis == a) return;
    std::string msg = c.command + ": sweep axis must be one of";
    for (const char* a : axes) msg += std::string(" ") + a;
    throw ConfigError(msg);
}

inline std::vector<double> axis_values(const RunConfig& c, double fallback) {
    return c.sweep ? c.sweep->values() : std::vector<double>{fallback};
}

template <class Row>
Table sweep_table(std::vector<std::string> header, const std::vector<double>& xs, unsigned threads, Row&& row) {
    Table t{std::move(header), std::vector<std::vector<std::string>>(xs.size())};
    parallel_for(xs.size(), threads, [&](std::size_t i) { t.rows[i] = row(xs[i]); });
    return t;
}

inline double nan() { return std::numeric_limits<double>::quiet_NaN(); }

// ---- commands

inline Table cmd_spectrum(const RunConfig& c) {
    require_axis(c, {"d", "omega"});
    const Material& m = need_material(c);
    const bool over_d = !c.sweep || c.sweep->axis == "d";
    const double omega0 = over_d ? need(c.omega, "omega", c) : 0.0;
    const auto xs = axis_values(c, c.d);
    const auto spec = quad_spec(c);
    return sweep_table({"omega", "d", "S_p", "S_e", "S_ideal", "S_asymptotic", "regime_tag", "err_p", "err_e"}, xs,
                       c.threads, [&](double x) {
                           const double omega = over_d ? omega0 : x, d = over_d ? x : c.d;
                           try {
                               check_omega_d(omega, d);
                           } catch (const DomainError& e) {
                               throw ConfigError(e.what());
                           }
                           const auto s = spectrum(m, omega, d, spec);
                           double sa = nan();
                           std::string tag = material_name(m);
                           if (std::holds_alternative<Dielectric>(m) || std::holds_alternative<Conductor>(m)) {
                               const auto a = S_asymptotic(m, omega, d);
                               sa = a.value;
                               tag = a.tag;
                           }
                           return std::vector<std::string>{fmt(omega), fmt(d), fmt(s.S_p), fmt(s.S_e),
                                                           fmt(S_ideal_closed(omega, d)), fmt(sa), tag,
                                                           fmt(s.err_p), fmt(s.err_e)};
                       });
}

/// -Im g_{l,t} on a k sweep (axis xi = k c/omega, or k itself), or on a d / omega sweep at fixed k.
inline Table cmd_kernel(const RunConfig& c) {
    require_axis(c, {"xi", "k", "d", "omega"});
    const Material& m = need_material(c);
    const std::string axis = c.sweep ? c.sweep->axis : "k";
    const auto xs = axis_values(c, c.k.value_or(nan()));
    return sweep_table({"omega", "k", "xi", "d", "domain", "neg_im_gl", "neg_im_gt"}, xs, c.threads, [&](double x) {
        double omega = axis == "omega" ? x : need(c.omega, "omega", c);
        double d = axis == "d" ? x : c.d;
        double k;
        if (axis == "xi")
            k = x * omega / constants::c;
        else if (axis == "k")
            k = c.sweep ? x : need(c.k, "k", c);
        else
            k = need(c.k, "k", c);
        KernelValues kv;
        try {
            kv = neg_im_g(m, omega, k, d);
        } catch (const DomainError& e) {
            throw ConfigError(e.what());
        }
        return std::vector<std::string>{fmt(omega), fmt(k), fmt(k * constants::c / omega), fmt(d),
                                        domain_name(kv.domain), fmt(kv.neg_im_gl), fmt(kv.neg_im_gt)};
    });
}

inline Table cmd_dephase(const RunConfig& c) {
    require_axis(c, {"d"});
    const Material& m = need_material(c);
    const auto xs = axis_values(c, c.d);
    // build the shared Psi grid once, with all threads, before the sweep
    const double aL = need(c.a, "beam.a", c) / need(c.L, "beam.L", c);
    shared_spectrum(aL, c.threads);
    return sweep_table({"d", "K_full", "K_dipole", "K_asymptotic", "kappa", "regime", "d_cross", "err"}, xs, c.threads,
                       [&](double d) {
                           const auto sc = make_scenario(c, m, d);
                           const auto full = K_full(sc);
                           const auto da = K_dipole(sc);
                           double ka = nan();
                           try {
                               ka = K_asymptotic(sc).K;
                           } catch (const DomainError&) {
                               // vacuum and the ideal mirror have no near-field law
                           }
                           return std::vector<std::string>{fmt(d),         fmt(full.K), fmt(da.K),
                                                           fmt(ka),        fmt(full.kappa), full.regime,
                                                           fmt(full.d_cross), fmt(full.error)};
                       });
}

inline Table cmd_regimes(const RunConfig& c) {
    require_axis(c, {"v", "sigma"});
    const Material& m0 = need_material(c);
    if (!std::holds_alternative<Conductor>(m0)) throw ConfigError("regimes: material must be a conductor");
    const auto& con = std::get<Conductor>(m0);
    const bool over_v = c.sweep && c.sweep->axis == "v";
    const auto xs = c.sweep ? c.sweep->values() : std::vector<double>{0.0};
    return sweep_table({"v_over_c", "sigma", "tau", "zeta_bar", "delta_bar", "lambda", "gamma", "regime", "lower_B",
                        "d_cross", "eta", "K0"},
                       xs, c.threads, [&](double x) {
                           Material m = m0;
                           std::optional<double> v;
                           if (over_v) v = x;
                           if (c.sweep && !over_v) m = make_conductor(detail::sigma_to_cgs(x, c.sigma_unit), con.eps0);
                           const auto sc = make_scenario(c, m, c.d, v);
                           const auto s = scales(sc);
                           const auto ri = classify_regime(sc);
                           const auto en = enhancement(sc);
                           return std::vector<std::string>{
                               fmt(s.v_over_c), fmt(std::get<Conductor>(m).sigma), fmt(sc.beam.tau),
                               fmt(s.zeta_bar), fmt(s.delta_bar), fmt(s.lambda), fmt(s.gamma),
                               regime_name(ri.regime), ri.lower_B ? "1" : "0", fmt(crossover_d(sc)), fmt(en.eta),
                               fmt(K0(sc))};
                       });
}

struct Estimate {
    std::string quantity;
    double quoted, computed;
    double lo = 1.0 / 3.0, hi = 3.0; // window on computed/quoted
};

/// Order-of-magnitude estimates for built-in scenarios, plus the printed and
/// derived forms of the model coefficients.
inline json cmd_reproduce() {
    auto base = [](double tau, double a) { return K0_base(Scenario{Vacuum{}, BeamPair{10.0, tau, a, 0.0}}); };
    const double L = 10.0, vc = 0.1;
    const double tau_exact = L / (vc * constants::c);
    const Material cu = make_conductor(5e17), si = make_conductor(1.0 * constants::siemens_per_cm);
    auto scen = [&](const Material& m, double v) { return Scenario{m, beam_from_velocity(L, v, 0.1, 0.0)}; };

    std::vector<Estimate> est{
        {"K0 base combination / theta (v/c=0.1, L=10 cm, T=300 K, tau=3e-9 s)", 10.0, base(3e-9, L)},
        {"K0 base combination / theta (tau = L/v exactly)", 10.0, base(tau_exact, L)},
        {"K0 base combination, theta=1e-6", 1e-5, base(3e-9, 1e-3 * L)},
        {"gamma copper (sigma=5e17 1/s, L=10 cm)", 1e-10, enhancement(scen(cu, 1e-4)).gamma},
        {"gamma^(1/3) copper", 1e-3, std::cbrt(enhancement(scen(cu, 1e-4)).gamma)},
        {"eta copper v/c=1e-4", 10.0, enhancement(scen(cu, 1e-4)).eta},
        {"gamma Si (sigma=1 S/cm)", 1e-4, enhancement(scen(si, 1e-4)).gamma},
        {"eta Si v/c=1e-4", 1e4, enhancement(scen(si, 1e-4)).eta},
    };
    json rows = json::array();
    bool all = true;
    for (const auto& e : est) {
        const double r = e.computed / e.quoted;
        const bool pass = r >= e.lo && r <= e.hi;
        all = all && pass;
        rows.push_back({{"quantity", e.quantity},
                        {"quoted_value", e.quoted},
                        {"computed_value", e.computed},
                        {"ratio", r},
                        {"window", {e.lo, e.hi}},
                        {"pass", pass}});
    }

    const auto& mc = model_constants();
    const double s2 = std::sqrt(2.0);
    json coef = json::array();
    auto add = [&](const char* name, double printed, double derived) {
        coef.push_back({{"coefficient", name}, {"printed", printed}, {"derived", derived}, {"ratio", derived / printed}});
    };
    add("kappa_e dielectric d<<lambda_n, per unit n", 0.5, 1.0);
    add("b_e dielectric d>>lambda_n", 3.0 * mc.Jm2 / (8.0 * mc.J0), mc.b_e());
    add("A_3 conductor A, L<<d<<delta_bar", 3.0 * mc.Jm2 / (4.0 * mc.J0), mc.A_3());
    add("C_e conductor A, d>>delta_bar", 3.0 * mc.Jm32 / (std::pow(s2, 7) * mc.J0), mc.C_e());
    add("C_e conductor B+C, d>>L", 3.0 * mc.Jm32 / (std::pow(s2, 5) * mc.J0), mc.C_e());
    add("b_p1 free space (asserted order one)", 1.0, mc.b_p1());
    json models = {{"J0", mc.J0}, {"J_-2", mc.Jm2}, {"J_-3/2", mc.Jm32}, {"J2", mc.J2},
                   {"b_p1", mc.b_p1()}, {"b_p2", mc.b_p2()}, {"b_e", mc.b_e()}, {"C_e", mc.C_e()},
                   {"A_3", mc.A_3()}, {"B_loop", mc.B_loop()}};
    return {{"estimates", rows}, {"all_pass", all}, {"coefficients", coef}, {"model_constants", models}};
}

inline json cmd_validate(unsigned threads, bool* all_pass = nullptr) {
    json suites = json::array();
    bool all = true;
    for (const auto& s : run_validation(threads)) {
        all = all && s.pass;
        suites.push_back({{"name", s.name}, {"pass", s.pass}, {"measured", s.measured}});
    }
    if (all_pass) *all_pass = all;
    return {{"suites", suites}, {"all_pass", all}};
}

// ---- driver

struct Output {
    std::string text;
    int code = ok;
};

inline Output execute(const RunConfig& c) {
    check_config(c);
    Output o;
    std::ostringstream os;
    if (!c.psi_dump.empty()) {
        const double aL = need(c.a, "beam.a", c) / need(c.L, "beam.L", c);
        std::ofstream f(c.psi_dump, std::ios::binary);
        if (!f) throw ConfigError("cannot write " + c.psi_dump);
        shared_spectrum(aL, c.threads)->write_csv(f);
    }
    if (c.command == "spectrum")
        cmd_spectrum(c).write(os);
    else if (c.command == "kernel")
        cmd_kernel(c).write(os);
    else if (c.command == "dephase")
        cmd_dephase(c).write(os);
    else if (c.command == "regimes")
        cmd_regimes(c).write(os);
    else if (c.command == "reproduce") {
        const auto j = cmd_reproduce();
        os << j.dump(2) << '\n';
    } else {
        bool all = false;
        os << cmd_validate(c.threads, &all).dump(2) << '\n';
        if (!all) o.code = validation_failed;
    }
    o.text = os.str();
    return o;
}

/// Runs a config and maps failures onto exit codes; diagnostics go to err.
inline int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
    try {
        auto o = execute(c);
        if (c.out.empty()) {
            out << o.text;
        } else {
            std::ofstream f(c.out, std::ios::binary);
            if (!f) throw ConfigError("cannot write " + c.out);
            f << o.text;
        }
        return o.code;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return config_error;
    } catch (const json::exception& e) {
        err << "config error: " << e.what() << '\n';
        return config_error;
    } catch (const DivergenceError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return numerical_failure;
    } catch (const DomainError& e) {
        err << "config error: " << e.what() << '\n';
        return config_error;
    } catch (const QuadratureError& e) {
        err << "numerical failure: " << e.what() << " (estimate " << e.estimate() << ", bound " << e.bound() << ")\n";
        return numerical_failure;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << '\n';
        return numerical_failure;
    }
}

} // namespace nfd::cli
