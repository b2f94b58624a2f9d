// One line per acceptance criterion; nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "nfd/dephasing.hpp"
#include "nfd/validation.hpp"
#include "oracles.hpp"

using namespace nfd;

namespace {

int failures = 0;

void report(int id, const char* what, bool pass, const std::string& detail) {
    std::printf("[%s] %d %s: %s\n", pass ? "PASS" : "FAIL", id, what, detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<double> logspace(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = a * std::pow(b / a, n == 1 ? 0.0 : double(i) / (n - 1));
    return v;
}

double rel(double x, double ref) { return std::abs(x / ref - 1.0); }

Scenario hot(const Material& m, double L, double vc, double a, double d) {
    Scenario sc{m, beam_from_velocity(L, vc, a, d)};
    sc.high_T = true;
    return sc;
}

void closed_form() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = suites::ideal_closed_form(50);
    const double t = seconds_since(t0);
    const double err = r.measured["max_rel_err"];
    report(1, "ideal-mirror S_p vs closed form", r.pass && t < 5.0,
           fmt("max rel err %.2e over 50 p in [1e-2,1e2] (tol 1e-6), %.3g s (limit 5 s)", err, t));
}

void near_field_spectra() {
    QuadratureSpec spec;
    spec.rel_tol = 1e-8;
    double worst = 0.0;
    std::string where;
    auto check = [&](const Material& m, double omega, const std::vector<double>& ds, auto law, const char* tag) {
        for (double d : ds) {
            const double e = rel(S_e_quadrature(m, omega, d, spec).value, law(d));
            if (e > worst) worst = e, where = fmt("%s d=%.3g", tag, d);
        }
    };

    // copper at omega = 3.33e8: delta ~ 3e-3 cm, d_x ~ 4 cm
    const double sigma = 5e17, omega = 3.33e8;
    const Material cu = make_conductor(sigma);
    const double delta = oracle::c / std::sqrt(2 * oracle::pi * sigma * omega);
    const double dx = S_crossover_d(cu, omega);
    check(cu, omega, logspace(delta / 3e4, delta / 30, 5), [&](double d) { return delta * delta / (8 * d * d * d); },
          "conductor d<<delta");
    check(cu, omega, logspace(30 * delta, dx / 30, 5), [&](double d) { return delta / (4 * d * d); },
          "conductor delta<<d<<d_x");

    const double w = 1e10, k0 = w / oracle::c;
    for (double n : {10.0, 1e6}) {
        const Material die = make_dielectric(n);
        const double lam_n = 1 / (k0 * n);
        check(die, w, logspace(lam_n / 3e3, lam_n / 30, 5), [&](double) { return 2.0 / 3.0 * k0 * n; },
              "dielectric d<<lambda_n");
        const double hi = S_crossover_d(die, w) / 30;
        if (30 * lam_n < hi)
            check(die, w, logspace(30 * lam_n, hi, 5), [&](double d) { return 1 / (2 * k0 * n * d * d); },
                  "dielectric lambda_n<<d<<d_x");
    }
    report(2, "near-field S_e asymptotics", worst <= 0.1,
           fmt("worst rel dev %.3g at %s (tol 0.1); conductor window [30 delta, d_x/30] = [%.3g, %.3g] cm", worst,
               where.c_str(), 30 * delta, dx / 30));
}

void k0_estimate() {
    Scenario sc{Vacuum{}, BeamPair{10.0, 3e-9, 10.0, 0.0}};
    const double per_theta = K0_base(sc);
    sc.beam.a = 1e-2; // theta = 1e-6
    const double small = K0_base(sc);
    const bool pass = rel(per_theta, 10.6) <= 0.05 && small / 1e-5 >= 1.0 / 3.0 && small / 1e-5 <= 3.0;
    report(3, "K0 base combination", pass,
           fmt("K0/theta = %.4g (target 10.6 +- 5%%); theta=1e-6 gives %.3g (target 1e-5 within x3)", per_theta, small));
}

void gamma_eta() {
    const Material cu = make_conductor(5e17), si = make_conductor(1.0 * constants::siemens_per_cm);
    const auto ec = enhancement(hot(cu, 10.0, 1e-4, 0.1, 0.0));
    const auto es = enhancement(hot(si, 10.0, 1e-4, 0.1, 0.0));
    const bool pass = ec.gamma >= 1e-10 && ec.gamma <= 1e-9 && es.gamma >= 0.3e-4 && es.gamma <= 3e-4 &&
                      ec.eta >= 3 && ec.eta <= 50 && es.eta >= 0.3e4 && es.eta <= 3e4;
    report(4, "gamma and eta estimates", pass,
           fmt("gamma(Cu)=%.3g in [1e-10,1e-9]; gamma(Si)=%.3g in [3e-5,3e-4]; eta(Cu)=%.3g in [3,50]; "
               "eta(Si)=%.3g in [3e3,3e4]",
               ec.gamma, es.gamma, ec.eta, es.eta));
}

void dipole_vs_full() {
    const double L = 10.0, vc = 1e-3, a = 0.1, lam = L / vc;
    shared_spectrum(a / L);
    double worst = 0.0;
    std::string where;
    for (const Material& m : {Material{IdealMirror{}}, make_dielectric(10.0)})
        for (double f : logspace(1e-3, 10.0, 10)) {
            const auto sc = hot(m, L, vc, a, f * lam);
            const double e = rel(K_full(sc).K, K_dipole(sc).K);
            if (e > worst) worst = e, where = fmt("%s d/lambda=%.3g", material_name(m).c_str(), f);
        }
    report(5, "dipole approximation vs full K", worst <= 0.1,
           fmt("worst rel diff %.3g at %s over d/lambda in [1e-3,10], ideal and n=10 (tol 0.1)", worst, where.c_str()));
}

void regime_structure() {
    const double L = 10.0, a = 0.01;
    shared_spectrum(a / L);

    // lower B: copper at v/c = 1e-8
    const Material cu = make_conductor(5e17);
    const auto base = hot(cu, L, 1e-8, a, 0.0);
    const auto s = scales(base);
    const bool lower_B = classify_regime(base).lower_B;
    const double dx = crossover_d(base);
    const auto ds = logspace(dx / 100, dx * 100, 25);
    std::vector<double> kappa;
    for (double d : ds) kappa.push_back(K_full(hot(cu, L, 1e-8, a, d)).kappa);
    const auto it = std::min_element(kappa.begin(), kappa.end());
    const std::size_t im = it - kappa.begin();
    const bool interior = im > 0 && im + 1 < kappa.size();
    const double loc = ds[im] / dx, depth = *it / std::sqrt(s.zeta_bar);
    const bool min_ok = lower_B && interior && loc >= 1.0 / 3 && loc <= 3 && depth >= 1.0 / 3 && depth <= 3;

    std::vector<double> d2 = logspace(30 * s.delta_bar, dx / 30, 6), k2;
    for (double d : d2) k2.push_back(K_full(hot(cu, L, 1e-8, a, d)).K_e);
    const double slope2 = oracle::loglog_slope(d2, k2);

    // interval A: delta_bar ~ 2e6 cm >> L
    const Material weak = make_conductor(1.1926e9);
    const auto sa = scales(hot(weak, L, 1e-11, a, 0.0));
    const bool is_A = classify_regime(hot(weak, L, 1e-11, a, 0.0)).regime == Regime::A;
    std::vector<double> d3 = logspace(30 * L, sa.delta_bar / 30, 6), k3;
    for (double d : d3) k3.push_back(K_full(hot(weak, L, 1e-11, a, d)).K_e);
    const double slope3 = oracle::loglog_slope(d3, k3);

    const bool pass = min_ok && is_A && std::abs(slope3 + 3) <= 0.2 && std::abs(slope2 + 2) <= 0.2;
    report(6, "regime structure", pass,
           fmt("lower-B copper v/c=1e-8: min at d/d_x=%.3g, kappa_min/zeta_bar^(1/2)=%.3g (both within x3); "
               "slope K_e %.3f in [30 delta_bar, d_x/30]; interval A slope %.3f in [30 L, delta_bar/30] (+-0.2)",
               loc, depth, slope2, slope3));
}

void ideal_suppression() {
    const double L = 10.0, vc = 1e-3, a = 0.1, lam = L / vc;
    const double b = model_constants().b_p2();
    std::vector<double> ds = logspace(1e-4 * lam, 1e-2 * lam, 6), ks;
    double worst = 0.0;
    for (double d : ds) {
        const auto r = K_full(hot(IdealMirror{}, L, vc, a, d));
        ks.push_back(r.K);
        worst = std::max(worst, rel(r.kappa, b * d * d / (lam * lam)));
    }
    const double slope = oracle::loglog_slope(ds, ks);
    report(7, "ideal-mirror suppression", std::abs(slope - 2) <= 0.1 && worst <= 0.05,
           fmt("exponent %.4f (2 +- 0.1); worst |kappa/(b_p2 d^2/lambda^2) - 1| = %.3g (tol 0.05), b_p2 = %.4f", slope,
               worst, b));
}

void invariants() {
    bool all = true;
    std::string names;
    for (const auto& s : run_validation()) {
        all = all && s.pass;
        names += s.name + (s.pass ? "=ok " : "=FAILED ");
    }
    report(8, "invariant suites", all, names);
}

} // namespace

int main() {
    closed_form();
    near_field_spectra();
    k0_estimate();
    gamma_eta();
    dipole_vs_full();
    regime_structure();
    ideal_suppression();
    invariants();
    std::printf("%s: %d of 8 criteria failed\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
