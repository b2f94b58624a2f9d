#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "nfd/beams.hpp"
#include "nfd/dephasing.hpp"
#include "nfd/kernels.hpp"
#include "nfd/spectra.hpp"

namespace nfd {

struct SuiteResult {
    std::string name;
    bool pass = false;
    nlohmann::json measured = nlohmann::json::object();
};

namespace suites {

inline double log_uniform(std::mt19937_64& g, double lo, double hi) {
    std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
    return std::exp(u(g));
}

inline Material random_material(std::mt19937_64& g) {
    std::uniform_int_distribution<int> pick(0, 3);
    switch (pick(g)) {
    case 0: return Vacuum{};
    case 1: return IdealMirror{};
    case 2: return make_dielectric(1.0 + log_uniform(g, 1e-3, 1e3));
    default: return make_conductor(log_uniform(g, 1e9, 1e18), log_uniform(g, 1.0, 10.0));
    }
}

inline SuiteResult branch_cuts(int samples = 20000, unsigned seed = 1) {
    std::mt19937_64 g(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double min_u = INFINITY, min_v = INFINITY;
    for (int i = 0; i < samples; ++i) {
        const double xi = log_uniform(g, 1e-4, 1e4);
        const double re = (unit(g) < 0.5 ? -1.0 : 1.0) * log_uniform(g, 1e-3, 1e8);
        const double im = unit(g) < 0.2 ? 0.0 : log_uniform(g, 1e-6, 1e12);
        min_u = std::min(min_u, branch_u(xi).imag());
        min_v = std::min(min_v, branch_v(cplx{re, im}, xi).imag());
    }
    SuiteResult r{"branch_cuts", min_u >= 0.0 && min_v >= 0.0};
    r.measured = {{"samples", samples}, {"min_im_u", min_u}, {"min_im_v", min_v}};
    return r;
}

/// Smallest eigenvalue of -Im g_ab relative to the largest, over random
/// materials, frequencies, wave vectors and distances.
inline SuiteResult positive_semidefinite(int samples = 20000, unsigned seed = 2) {
    std::mt19937_64 g(seed);
    std::uniform_real_distribution<double> ang(0.0, 2.0 * constants::pi);
    double worst = INFINITY;
    for (int i = 0; i < samples; ++i) {
        const Material m = random_material(g);
        const double omega = log_uniform(g, 1e6, 1e14);
        const double k = omega / constants::c * log_uniform(g, 1e-3, 1e5);
        const double d = constants::c / omega * (i % 10 == 0 ? 0.0 : log_uniform(g, 1e-6, 1e3));
        const double a = ang(g);
        const auto t = neg_im_g_tensor(m, omega, {k * std::cos(a), k * std::sin(a)}, d);
        const double tr = 0.5 * (t[0][0] + t[1][1]);
        const double r = std::hypot(0.5 * (t[0][0] - t[1][1]), t[0][1]);
        const double big = std::abs(tr) + r;
        if (big == 0.0) continue;
        worst = std::min(worst, (tr - r) / big);
    }
    const double tol = 1e-12;
    SuiteResult r{"positive_semidefinite", worst >= -tol};
    r.measured = {{"samples", samples}, {"min_relative_eigenvalue", worst}, {"tolerance", tol}};
    return r;
}

/// The EW brackets vanish identically for vacuum, the ideal mirror and a
/// lossless dielectric above xi = n.
inline SuiteResult ew_vanishing(int samples = 5000, unsigned seed = 3) {
    std::mt19937_64 g(seed);
    double worst = 0.0;
    int checked = 0;
    for (int i = 0; i < samples; ++i) {
        const double omega = log_uniform(g, 1e6, 1e14);
        const double k0 = omega / constants::c;
        const double d = log_uniform(g, 1e-6, 1e2) / k0;
        const double n = 1.0 + log_uniform(g, 1e-3, 1e3);
        const Material ms[3] = {Vacuum{}, IdealMirror{}, make_dielectric(n)};
        for (int j = 0; j < 3; ++j) {
            const double lo = j == 2 ? n : 1.0;
            const double k = k0 * lo * (1.0 + log_uniform(g, 1e-9, 1e3));
            const auto kv = neg_im_g(ms[j], omega, k, d);
            worst = std::max({worst, std::abs(kv.neg_im_gl), std::abs(kv.neg_im_gt)});
            ++checked;
        }
    }
    SuiteResult r{"ew_vanishing", worst == 0.0};
    r.measured = {{"points", checked}, {"max_abs_bracket", worst}};
    return r;
}

/// Psi_2(z,0)/z^2 settles to a constant as z -> 0 (closed-form axis and the
/// sampled radiation amplitudes), and Psi_1(0,y) = 0.
inline SuiteResult psi_closure() {
    const auto bp = beam_from_velocity(10.0, 1e-3, 0.1, 0.0);
    const double zs[3] = {1e-2, 1e-3, 1e-4};
    nlohmann::json ratios = nlohmann::json::array(), direct = nlohmann::json::array();
    double rr[3], rd[3];
    for (int i = 0; i < 3; ++i) {
        rr[i] = psi2_axis(zs[i]) / (zs[i] * zs[i]);
        rd[i] = psi_functions(bp, zs[i], 0.0).psi2 / (zs[i] * zs[i]);
        ratios.push_back(rr[i]);
        direct.push_back(rd[i]);
    }
    const double drift = std::abs(rr[2] - rr[1]) / rr[2];
    const double agree = std::abs(rd[2] - rr[2]) / rr[2];
    double p1 = 0.0;
    for (double y : {0.5, 1.0, 2.0, 4.0}) p1 = std::max(p1, std::abs(psi_functions(bp, 0.0, y).psi1));
    SuiteResult r{"psi_closure", drift < 1e-5 && agree < 1e-4 && p1 == 0.0};
    r.measured = {{"z", {zs[0], zs[1], zs[2]}}, {"axis_ratio", ratios}, {"sampled_ratio", direct},
                  {"ratio_drift", drift}, {"sampled_vs_axis", agree}, {"max_abs_psi1_at_z0", p1}};
    return r;
}

inline SuiteResult j_moments() {
    const double J0 = J_moment(0.0), Jm2 = J_moment(-2.0);
    const double J0x = 1.0 / (8.0 * std::sqrt(2.0));
    const double Jm2x = 1.0 / (2.0 * std::sqrt(2.0) * constants::pi);
    const double e0 = std::abs(J0 / J0x - 1.0), e2 = std::abs(Jm2 / Jm2x - 1.0);
    SuiteResult r{"j_moments", e0 <= 1e-6 && e2 <= 1e-6};
    r.measured = {{"J0", J0}, {"J0_exact", J0x}, {"J0_rel_err", e0},
                  {"Jm2", Jm2}, {"Jm2_exact", Jm2x}, {"Jm2_rel_err", e2}};
    return r;
}

/// Ideal-mirror S_p quadrature against the closed form at log-spaced p.
inline SuiteResult ideal_closed_form(int points = 50) {
    const double omega = 1e10, k0 = omega / constants::c;
    QuadratureSpec spec;
    spec.rel_tol = 1e-10;
    double worst = 0.0, worst_p = 0.0;
    for (int i = 0; i < points; ++i) {
        const double p = std::pow(10.0, -2.0 + 4.0 * i / (points - 1));
        const double d = p / (2.0 * k0);
        const double q = S_p_quadrature(IdealMirror{}, omega, d, spec).value;
        const double e = std::abs(q / S_ideal_closed(omega, d) - 1.0);
        if (e > worst) worst = e, worst_p = p;
    }
    SuiteResult r{"ideal_closed_form", worst <= 1e-6};
    r.measured = {{"points", points}, {"max_rel_err", worst}, {"at_p", worst_p}, {"tolerance", 1e-6}};
    return r;
}

/// K_full against the dipole approximation where the latter holds.
inline SuiteResult da_vs_full(unsigned threads = 0) {
    const double vc = 1e-3, L = 10.0, a = 0.1;
    const double lam = L / vc;
    const Material ms[2] = {IdealMirror{}, make_dielectric(10.0)};
    const double ds[4] = {1e-3, 1e-2, 1e-1, 1.0};
    shared_spectrum(a / L, threads);
    double worst = 0.0;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& m : ms)
        for (double f : ds) {
            Scenario sc{m, beam_from_velocity(L, vc, a, f * lam)};
            const double full = K_full(sc).K, da = K_dipole(sc).K;
            const double e = std::abs(full / da - 1.0);
            worst = std::max(worst, e);
            rows.push_back({{"material", material_name(m)}, {"d_over_lambda", f}, {"K_full", full}, {"K_dipole", da}});
        }
    SuiteResult r{"da_vs_full", worst <= 0.1};
    r.measured = {{"v_over_c", vc}, {"max_rel_diff", worst}, {"tolerance", 0.1}, {"rows", rows}};
    return r;
}

} // namespace suites

inline std::vector<SuiteResult> run_validation(unsigned threads = 0) {
    return {suites::branch_cuts(),        suites::positive_semidefinite(), suites::ew_vanishing(),
            suites::psi_closure(),        suites::j_moments(),             suites::ideal_closed_form(),
            suites::da_vs_full(threads)};
}

} // namespace nfd
