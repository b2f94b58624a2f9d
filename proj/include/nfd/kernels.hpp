#pragma once

#include <array>
#include <cmath>
#include <complex>

#include "nfd/constants.hpp"
#include "nfd/errors.hpp"
#include "nfd/materials.hpp"

namespace nfd {

enum class Domain { PW, EW };

inline const char* domain_name(Domain d) { return d == Domain::PW ? "PW" : "EW"; }

/// u = sqrt(1 - xi^2) with Im u >= 0.
inline cplx branch_u(double xi) {
    if (xi <= 1.0) return {std::sqrt((1.0 - xi) * (1.0 + xi)), 0.0};
    return {0.0, std::sqrt((xi - 1.0) * (xi + 1.0))};
}

/// v = sqrt(eps - xi^2) with Im v >= 0. For real eps the lossless limit
/// Im eps -> 0+ is taken.
inline cplx branch_v(cplx eps, double xi) {
    const double re = eps.real() - xi * xi;
    const double im = eps.imag();
    if (im == 0.0) {
        if (re >= 0.0) return {std::sqrt(re), 0.0};
        return {0.0, std::sqrt(-re)};
    }
    cplx v = std::sqrt(cplx{re, im});
    if (v.imag() < 0.0) v = -v;
    return v;
}

struct FGValues {
    cplx Fl, Ft, Gl, Gt;
};

struct DeltaF {
    cplx l, t; // F - G
};

/// F - G in a form that is regular at xi = 1 and free of cancellation for
/// |eps| >> 1. Zero for the ideal mirror.
inline DeltaF delta_F(const Permittivity& eps, double xi) {
    if (eps.infinite) return {};
    const cplx u = branch_u(xi);
    const cplx v = branch_v(eps.value, xi);
    const cplx a = v + u;
    const cplx b = v + eps.value * u;
    return {-2.0 / a - 2.0 * u * v / b, 2.0 * xi * xi / b};
}

inline FGValues FG(const Permittivity& eps, double xi) {
    if (!(xi > 0.0)) throw DomainError("FG: xi must be positive");
    if (xi == 1.0) throw DomainError("FG: G has a pole at xi = 1");
    const cplx u = branch_u(xi);
    const cplx Gl = u + 1.0 / u;
    const cplx Gt = u - 1.0 / u;
    const auto d = delta_F(eps, xi);
    return {Gl + d.l, Gt + d.t, Gl, Gt};
}

enum class Expansion { below, above };

/// Truncated expansions of F well below / well above xi = |eps|^{1/2}.
inline std::array<cplx, 2> asymptotic_F(cplx eps, double xi, Expansion which) {
    const cplx u = branch_u(xi);
    if (which == Expansion::below) {
        const cplx Gl = u + 1.0 / u;
        const cplx Gt = u - 1.0 / u;
        return {Gl - 4.0 / std::sqrt(eps), Gt * (1.0 - 2.0 / eps)};
    }
    const cplx r = (eps - 1.0) / (eps + 1.0);
    const cplx I{0.0, 1.0};
    const cplx F = I * r * xi + I * r * r / (2.0 * xi);
    return {F, F};
}

/// Material evaluated at one frequency, tagged for the kernel branches.
struct Medium {
    enum Kind { vacuum, ideal, lossless, lossy } kind;
    Permittivity eps;
    double n = 1.0; // refractive index for lossless media
};

inline Medium medium_at(const Material& m, double omega) {
    const auto eps = permittivity(m, omega);
    if (std::holds_alternative<Vacuum>(m)) return {Medium::vacuum, eps};
    if (eps.infinite) return {Medium::ideal, eps};
    if (auto* d = std::get_if<Dielectric>(&m)) return {Medium::lossless, eps, d->n};
    return {Medium::lossy, eps};
}

/// Dimensionless brackets: -Im g_{l,t} = (2 pi / k0) * {l, t}.
struct Brackets {
    double l = 0.0, t = 0.0;
    Domain domain = Domain::PW;
};

/// PW: Re[G(1 - e^{ipu}) - e^{ipu}(F - G)], which equals G - Re(e^{ipu}F).
/// EW: -e^{-p sqrt(xi^2-1)} Re F. xi = 1 is taken on the EW side.
inline Brackets kernel_brackets(const Medium& med, double xi, double p) {
    Brackets b;
    b.domain = xi < 1.0 ? Domain::PW : Domain::EW;
    if (b.domain == Domain::PW) {
        const double u = std::sqrt((1.0 - xi) * (1.0 + xi));
        const double Gl = u + 1.0 / u;
        const double Gt = u - 1.0 / u;
        if (med.kind == Medium::vacuum) {
            b.l = Gl;
            b.t = Gt;
            return b;
        }
        const double s = std::sin(0.5 * p * u);
        const double one_minus_cos = 2.0 * s * s;
        b.l = Gl * one_minus_cos;
        b.t = Gt * one_minus_cos;
        if (med.kind == Medium::ideal) return b;
        const cplx ph = std::polar(1.0, p * u);
        const auto d = delta_F(med.eps, xi);
        b.l -= (ph * d.l).real();
        b.t -= (ph * d.t).real();
        return b;
    }
    if (med.kind == Medium::vacuum || med.kind == Medium::ideal) return b;
    if (med.kind == Medium::lossless && xi >= med.n) return b;
    const double decay = std::exp(-p * std::sqrt((xi - 1.0) * (xi + 1.0)));
    if (decay == 0.0) return b;
    // G is purely imaginary here, so Re F = Re(F - G).
    const auto d = delta_F(med.eps, xi);
    b.l = -decay * d.l.real();
    b.t = -decay * d.t.real();
    return b;
}

/// PW brackets multiplied by u = cos(phi) for xi = sin(phi). Regular at
/// xi = 1, which is where the substitution xi = sin(phi) puts the pole.
inline Brackets pw_brackets_times_u(const Medium& med, double xi, double u, double p) {
    Brackets b;
    const double Gl = u * u + 1.0;
    const double Gt = u * u - 1.0;
    if (med.kind == Medium::vacuum) {
        b.l = Gl;
        b.t = Gt;
        return b;
    }
    const double s = std::sin(0.5 * p * u);
    const double w = 2.0 * s * s;
    b.l = Gl * w;
    b.t = Gt * w;
    if (med.kind == Medium::ideal) return b;
    const cplx ph = std::polar(u, p * u);
    const auto d = delta_F(med.eps, xi);
    b.l -= (ph * d.l).real();
    b.t -= (ph * d.t).real();
    return b;
}

/// Same as kernel_brackets but returns l + t and l - t, each formed without
/// the 1/u cancellation (G_l + G_t = 2u, G_l - G_t = 2/u,
/// dF_l - dF_t = -4/(v+u)).
struct BracketPair {
    double sum = 0.0, diff = 0.0;
};

inline BracketPair kernel_bracket_pair(const Medium& med, double xi, double p) {
    BracketPair r;
    const bool pw = xi < 1.0;
    if (pw) {
        const double u = std::sqrt((1.0 - xi) * (1.0 + xi));
        double w = 1.0;
        if (med.kind != Medium::vacuum) {
            const double s = std::sin(0.5 * p * u);
            w = 2.0 * s * s;
        }
        r.sum = 2.0 * u * w;
        r.diff = 2.0 / u * w;
        if (med.kind == Medium::vacuum || med.kind == Medium::ideal) return r;
        const cplx ph = std::polar(1.0, p * u);
        const auto d = delta_F(med.eps, xi);
        const cplx vv = branch_v(med.eps.value, xi);
        r.sum -= (ph * (d.l + d.t)).real();
        r.diff -= (ph * (-4.0 / (vv + u))).real();
        return r;
    }
    const auto b = kernel_brackets(med, xi, p);
    if (b.l == 0.0 && b.t == 0.0) return r;
    const double decay = std::exp(-p * std::sqrt((xi - 1.0) * (xi + 1.0)));
    const cplx u = branch_u(xi);
    const cplx vv = branch_v(med.eps.value, xi);
    r.sum = b.l + b.t;
    r.diff = -decay * (-4.0 / (vv + u)).real();
    return r;
}

struct KernelValues {
    double neg_im_gl; // cm
    double neg_im_gt; // cm
    Domain domain;
};

inline KernelValues neg_im_g(const Material& m, double omega, double k, double d) {
    if (!(omega > 0.0)) throw DomainError("neg_im_g: omega must be positive");
    if (!(k > 0.0)) throw DomainError("neg_im_g: k must be positive");
    if (!(d >= 0.0)) throw DomainError("neg_im_g: d must be nonnegative");
    const double k0 = omega / constants::c;
    const auto b = kernel_brackets(medium_at(m, omega), k / k0, 2.0 * k0 * d);
    const double f = 2.0 * constants::pi / k0;
    return {f * b.l, f * b.t, b.domain};
}

/// coth(hbar omega / 2 k_B T); T = 0 gives 1.
inline double coth_factor(double omega, double T) {
    if (!(T >= 0.0)) throw DomainError("temperature must be nonnegative");
    if (T == 0.0) return 1.0;
    const double x = constants::hbar * omega / (2.0 * constants::k_B * T);
    if (x < 1e-4) return 1.0 / x + x / 3.0;
    return 1.0 / std::tanh(x);
}

using Tensor2 = std::array<std::array<double, 2>, 2>;

/// -Im g_ab = (-Im g_t)[k^_a k^_b - delta_ab/2] + delta_ab (-Im g_l)/2.
inline Tensor2 neg_im_g_tensor(const Material& m, double omega, std::array<double, 2> kvec, double d) {
    const double k = std::hypot(kvec[0], kvec[1]);
    const auto kv = neg_im_g(m, omega, k, d);
    const double kx = kvec[0] / k, ky = kvec[1] / k;
    const double kh[2] = {kx, ky};
    Tensor2 t{};
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            t[a][b] = kv.neg_im_gt * (kh[a] * kh[b] - (a == b ? 0.5 : 0.0)) + (a == b ? 0.5 * kv.neg_im_gl : 0.0);
    return t;
}

/// Tangential field correlator density (E_a E_b)_{omega k}.
inline Tensor2 et_density(const Material& m, double omega, std::array<double, 2> kvec, double d, double T) {
    const double cf = coth_factor(omega, T);
    const double k0 = omega / constants::c;
    const double pre = 2.0 * constants::hbar / std::pow(2.0 * constants::pi, 3) * k0 * k0 * cf;
    auto t = neg_im_g_tensor(m, omega, kvec, d);
    for (auto& row : t)
        for (auto& x : row) x *= pre;
    return t;
}

} // namespace nfd
