#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "nfd/constants.hpp"
#include "nfd/errors.hpp"
#include "nfd/kernels.hpp"
#include "nfd/materials.hpp"
#include "nfd/numerics.hpp"

namespace nfd {

struct SpectrumResult {
    double S_p = 0.0, S_e = 0.0; // cm^-1
    double err_p = 0.0, err_e = 0.0;
    std::string method = "quadrature";
    double S() const { return S_p + S_e; }
};

inline void check_omega_d(double omega, double d) {
    if (!(omega > 0.0)) throw DomainError("omega must be positive");
    if (!(d >= 0.0)) throw DomainError("d must be nonnegative");
}

/// S_p = (k0/2) int_0^1 dxi xi n_l(xi), integrated in phi with xi = sin(phi).
inline QuadResult S_p_quadrature(const Material& m, double omega, double d, const QuadratureSpec& spec = {}) {
    check_omega_d(omega, d);
    const Medium med = medium_at(m, omega);
    const double k0 = omega / constants::c;
    const double p = 2.0 * k0 * d;
    auto f = [&](double phi) {
        const double xi = std::sin(phi);
        return xi * pw_brackets_times_u(med, xi, std::cos(phi), p).l;
    };
    // ~p/pi oscillations of cos(p cos phi); seed the partition accordingly.
    const int nseed = std::min(2000, 1 + static_cast<int>(p / constants::pi));
    std::vector<double> br;
    for (int i = 1; i < nseed; ++i) br.push_back(0.5 * constants::pi * i / nseed);
    auto r = integrate_adaptive(f, 0.0, 0.5 * constants::pi, spec, br);
    r.value *= 0.5 * k0;
    r.error *= 0.5 * k0;
    return r;
}

/// S_e = (k0/2) int_1^inf dxi xi n_l(xi), integrated in t with xi = cosh(t).
inline QuadResult S_e_quadrature(const Material& m, double omega, double d, const QuadratureSpec& spec = {}) {
    check_omega_d(omega, d);
    const Medium med = medium_at(m, omega);
    if (med.kind == Medium::vacuum || med.kind == Medium::ideal) return {};
    const double k0 = omega / constants::c;
    const double p = 2.0 * k0 * d;
    const double budget = spec.tail_exponent_budget;
    double t_max;
    if (med.kind == Medium::lossless) {
        t_max = std::acosh(med.n);
        if (p > 0.0) t_max = std::min(t_max, std::asinh(budget / p));
    } else {
        if (p == 0.0) throw DivergenceError("S_e diverges at d = 0 for a lossy medium");
        t_max = std::asinh(budget / p);
    }
    auto f = [&](double t) {
        const double xi = std::cosh(t);
        return xi * std::sinh(t) * kernel_brackets(med, xi, p).l;
    };
    std::vector<double> br;
    const double xi2 = std::sqrt(std::abs(med.eps.value));
    if (xi2 > 1.0) br.push_back(std::acosh(xi2));
    if (p > 0.0) {
        br.push_back(std::asinh(1.0 / p));
        br.push_back(std::asinh(5.0 / p));
    }
    auto r = integrate_adaptive(f, 0.0, t_max, spec, br);
    if (med.kind == Medium::lossy) r.error += std::abs(f(t_max)) / (p * std::cosh(t_max));
    r.value *= 0.5 * k0;
    r.error *= 0.5 * k0;
    return r;
}

inline SpectrumResult spectrum(const Material& m, double omega, double d, const QuadratureSpec& spec = {}) {
    SpectrumResult s;
    auto p = S_p_quadrature(m, omega, d, spec);
    auto e = S_e_quadrature(m, omega, d, spec);
    s.S_p = p.value;
    s.err_p = p.error;
    s.S_e = e.value;
    s.err_e = e.error;
    return s;
}

/// (omega/c)[2/3 - cos p/p^2 - (sin p/p)(1 - 1/p^2)], p = 2 omega d / c.
inline double S_ideal_closed(double omega, double d) {
    check_omega_d(omega, d);
    const double k0 = omega / constants::c;
    const double p = 2.0 * k0 * d;
    if (p < 0.5) {
        // Even Taylor series; the closed form cancels to ~1/p^2 relative here.
        double sum = 0.0, pk = 1.0, f1 = 1.0; // f1 = (2n+1)!
        for (int n = 1; n <= 14; ++n) {
            pk *= p * p;
            f1 *= (2.0 * n) * (2.0 * n + 1.0);
            const double f2 = f1 * (2.0 * n + 2.0);
            const double f3 = f2 * (2.0 * n + 3.0);
            sum += (n % 2 ? -1.0 : 1.0) * (1.0 / f2 - 1.0 / f1 - 1.0 / f3) * pk;
        }
        return k0 * sum;
    }
    return k0 * (2.0 / 3.0 - std::cos(p) / (p * p) - std::sin(p) / p * (1.0 - 1.0 / (p * p)));
}

enum class SpectrumRegime { near_field, far_field };

struct AsymptoticS {
    double value; // cm^-1
    SpectrumRegime regime;
    std::string tag;
};

/// Piecewise near-field forms. Dielectric: (2/3)k0 n below d = (sqrt3/2) lambda_n,
/// 1/(2 k0 n d^2) above (lambda_n = c/(n omega)). Conductor: delta^2/(8 d^3)
/// below d = delta/2, delta/(4 d^2) above. The switch points are where the
/// pieces meet.
inline AsymptoticS S_asymptotic(const Material& m, double omega, double d) {
    check_omega_d(omega, d);
    const double k0 = omega / constants::c;
    if (auto* die = std::get_if<Dielectric>(&m)) {
        const double lam_n = 1.0 / (k0 * die->n);
        if (d < 0.5 * std::sqrt(3.0) * lam_n)
            return {2.0 / 3.0 * k0 * die->n, SpectrumRegime::near_field, "dielectric d<<lambda_n"};
        return {1.0 / (2.0 * k0 * die->n * d * d), SpectrumRegime::far_field, "dielectric d>>lambda_n"};
    }
    if (auto* con = std::get_if<Conductor>(&m)) {
        if (d == 0.0) throw DivergenceError("S diverges at d = 0 for a conductor");
        const double delta = surface_scales(con->sigma, omega).delta;
        if (d < 0.5 * delta)
            return {delta * delta / (8.0 * d * d * d), SpectrumRegime::near_field, "conductor d<<delta"};
        return {delta / (4.0 * d * d), SpectrumRegime::far_field, "conductor d>>delta"};
    }
    throw DomainError("S_asymptotic: only dielectric and conductor have near-field forms");
}

/// Distance where S_e overtakes the ideal far-field S_p: (c/omega) zeta^{1/4}
/// for a conductor, (c/omega) n^{-1/4} for a dielectric.
inline double S_crossover_d(const Material& m, double omega) {
    if (!(omega > 0.0)) throw DomainError("omega must be positive");
    const double lam = constants::c / omega;
    if (auto* die = std::get_if<Dielectric>(&m)) return lam * std::pow(die->n, -0.25);
    if (auto* con = std::get_if<Conductor>(&m))
        return lam * std::pow(surface_scales(con->sigma, omega).zeta, 0.25);
    throw DomainError("S_crossover_d: no near-field crossover for this material");
}

/// (E_t^2)_omega = (hbar/pi)(omega/c)^2 coth(hbar omega/2 k_B T) S.
inline double Et2(const Material& m, double omega, double d, double T, const QuadratureSpec& spec = {}) {
    const double cf = coth_factor(omega, T);
    const double k0 = omega / constants::c;
    return constants::hbar / constants::pi * k0 * k0 * cf * spectrum(m, omega, d, spec).S();
}

} // namespace nfd
