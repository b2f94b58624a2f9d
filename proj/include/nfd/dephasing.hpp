#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "nfd/beams.hpp"
#include "nfd/constants.hpp"
#include "nfd/errors.hpp"
#include "nfd/kernels.hpp"
#include "nfd/materials.hpp"
#include "nfd/numerics.hpp"
#include "nfd/spectra.hpp"

namespace nfd {

struct Scenario {
    Material material;
    BeamPair beam;
    double T = 300.0; // K
    /// Replace coth(x) by 1/x, as in the classical estimates.
    bool high_T = false;
    QuadratureSpec spec{1e-6, 0.0, 50, 40.0, 20000};
};

inline void check_scenario(const Scenario& sc) {
    check_material(sc.material);
    check_beam(sc.beam);
    if (!(sc.T >= 0.0)) throw DomainError("temperature must be nonnegative");
    if (sc.high_T && sc.T == 0.0) throw DomainError("high-T approximation needs T > 0");
}

struct Scales {
    double v_over_c, lambda, theta;
    double zeta_bar = 0.0, delta_bar = 0.0, gamma = 0.0; // conductor only
    double hbar_over_kT_tau = 0.0;                       // << 1 in the classical regime
};

inline Scales scales(const Scenario& sc) {
    Scales s;
    const auto& b = sc.beam;
    s.v_over_c = b.v() / constants::c;
    s.lambda = b.lambda();
    s.theta = b.theta();
    if (auto* c = std::get_if<Conductor>(&sc.material)) {
        s.zeta_bar = 1.0 / std::sqrt(8.0 * constants::pi * c->sigma * b.tau);
        s.delta_bar = 2.0 * s.lambda * s.zeta_bar;
        s.gamma = constants::c / (8.0 * constants::pi * c->sigma * b.L);
    }
    s.hbar_over_kT_tau = sc.T > 0 ? constants::hbar / (constants::k_B * sc.T * b.tau)
                                  : std::numeric_limits<double>::infinity();
    return s;
}

/// coth(hbar omega / 2 k_B T) at omega = 2z/tau.
inline double coth_z(const Scenario& sc, double z) {
    if (sc.T == 0.0) return 1.0;
    const double x = constants::hbar * z / (constants::k_B * sc.T * sc.beam.tau);
    if (sc.high_T || x < 1e-4) return 1.0 / x + (sc.high_T ? 0.0 : x / 3.0);
    return 1.0 / std::tanh(x);
}

enum class Regime { A, B, C };

inline const char* regime_name(Regime r) {
    switch (r) {
    case Regime::A: return "A";
    case Regime::B: return "B";
    default: return "C";
    }
}

struct RegimeInfo {
    Regime regime;
    bool lower_B;        // zeta_bar < v/c < zeta_bar^{1/2}
    double zeta_bar;
    double bound_AB;     // zeta_bar
    double bound_BC;     // zeta_bar^{1/4}
};

inline RegimeInfo classify_regime(const Scenario& sc) {
    if (!std::holds_alternative<Conductor>(sc.material))
        throw DomainError("classify_regime: velocity intervals are defined for conductors");
    const auto s = scales(sc);
    const double vc = s.v_over_c, zb = s.zeta_bar;
    RegimeInfo r{Regime::C, false, zb, zb, std::pow(zb, 0.25)};
    if (vc < zb)
        r.regime = Regime::A;
    else if (vc < r.bound_BC) {
        r.regime = Regime::B;
        r.lower_B = vc < std::sqrt(zb);
    }
    return r;
}

/// Near-field / far-field crossover distance, order-one prefactor set to 1.
inline double crossover_d(const Scenario& sc) {
    const auto s = scales(sc);
    if (auto* d = std::get_if<Dielectric>(&sc.material)) return s.lambda * std::pow(d->n, -0.25);
    if (std::holds_alternative<Conductor>(sc.material)) {
        if (classify_regime(sc).regime == Regime::C)
            return std::sqrt(s.zeta_bar) * s.lambda * s.lambda / sc.beam.L;
        return std::pow(s.zeta_bar, 0.25) * s.lambda;
    }
    throw DomainError("crossover_d: no near-field crossover for vacuum or an ideal mirror");
}

struct Enhancement {
    double gamma, eta;
};

/// gamma = c/(8 pi sigma L); eta = gamma (v/c)^-2 in A, gamma^{1/2} (v/c)^{-3/2} otherwise.
inline Enhancement enhancement(const Scenario& sc) {
    const auto r = classify_regime(sc);
    const auto s = scales(sc);
    const double vc = s.v_over_c;
    if (r.regime == Regime::A) return {s.gamma, s.gamma / (vc * vc)};
    return {s.gamma, std::sqrt(s.gamma) * std::pow(vc, -1.5)};
}

/// alpha theta (L/c)^2 (k_B T/hbar)/tau: the free-space estimate without b_p1.
inline double K0_base(const Scenario& sc) {
    const auto& b = sc.beam;
    return constants::alpha * b.theta() * std::pow(b.L / constants::c, 2) * constants::k_B * sc.T /
           constants::hbar / b.tau;
}

struct ModelConstants {
    double J0, Jm2, Jm32, J2;
    double b_p1() const { return 2.0 * J0 / (3.0 * constants::pi); }
    double b_p2() const { return 16.0 * J2 / (5.0 * J0); }
    /// dielectric far field: K_e = b_e K0 lambda^2/(n d^2)
    double b_e() const { return 3.0 * Jm2 / (16.0 * J0); }
    /// conductor, DA with d >> delta: kappa_e = C_e delta_bar lambda / d^2
    double C_e() const { return 3.0 * Jm32 / (std::pow(2.0, 4.5) * J0); }
    /// conductor, DA with d << delta: kappa_e = A_3 delta_bar^2 lambda / d^3
    double A_3() const { return 3.0 * Jm2 / (64.0 * J0); }
    /// conductor, d >> L and d >> delta_bar: kappa_loop = B_loop lambda L^2/d^3.
    /// Comes from Psi_2(0,y) = y^2/(8 pi^2) (the pair encloses area) with the
    /// kernel integral int_0^inf h(q) dq = pi/2.
    double B_loop() const { return 3.0 / (256.0 * constants::pi * J0); }
};

inline const ModelConstants& model_constants() {
    static const ModelConstants mc{J_moment(0.0), J_moment(-2.0), J_moment(-1.5), J_moment(2.0)};
    return mc;
}

struct DephasingResult {
    double K = 0.0, K_p = 0.0, K_e = 0.0;
    double error = 0.0;
    double K0 = 0.0;
    double kappa = 0.0;
    std::string regime;
    double d_cross = std::numeric_limits<double>::quiet_NaN();
    double gamma = 0.0, eta = 0.0;
    double zeta_bar = 0.0, delta_bar = 0.0, lambda = 0.0;
    std::string method;
};

namespace detail {

inline constexpr double psi_axis_cut = 40.0; // exp(-2 z^2/pi) reaches e^-40

inline void fill_common(const Scenario& sc, DephasingResult& r) {
    const auto s = scales(sc);
    r.zeta_bar = s.zeta_bar;
    r.delta_bar = s.delta_bar;
    r.lambda = s.lambda;
    if (std::holds_alternative<Conductor>(sc.material)) {
        r.regime = regime_name(classify_regime(sc).regime);
        auto e = enhancement(sc);
        r.gamma = e.gamma;
        r.eta = e.eta;
        r.d_cross = crossover_d(sc);
    } else if (std::holds_alternative<Dielectric>(sc.material)) {
        r.d_cross = crossover_d(sc);
        r.regime = sc.beam.d < r.d_cross ? "dielectric-NF" : "far-field";
    } else if (std::holds_alternative<IdealMirror>(sc.material)) {
        r.regime = "ideal";
    } else {
        r.regime = "far-field";
    }
}

/// alpha theta L^2/(2 pi c tau) int dz C(z) S(z) Psi_2(z,0), integrated in w = sqrt(z).
template <class SFun>
QuadResult dipole_integral(const Scenario& sc, SFun&& S) {
    const auto& b = sc.beam;
    const double pre = constants::alpha * b.theta() * b.L * b.L / (2.0 * constants::pi * constants::c * b.tau);
    const double z_cut = std::sqrt(0.5 * constants::pi * psi_axis_cut);
    auto f = [&](double w) {
        const double z = w * w;
        return 2.0 * w * coth_z(sc, z) * S(2.0 * z / b.tau) * psi2_axis(z);
    };
    auto r = integrate_adaptive(f, 0.0, std::sqrt(z_cut), sc.spec);
    r.value *= pre;
    r.error *= pre;
    return r;
}

} // namespace detail

/// Free-space reference: the dipole integral with S = (2/3) omega/c.
inline double K0(const Scenario& sc) {
    check_scenario(sc);
    return detail::dipole_integral(sc, [](double omega) { return 2.0 / 3.0 * omega / constants::c; }).value;
}

/// Dipole approximation. For a conductor at d = 0 S_e diverges and the
/// full (omega, k) integral is returned instead.
inline DephasingResult K_full(const Scenario& sc);

inline DephasingResult K_dipole(const Scenario& sc) {
    check_scenario(sc);
    if (std::holds_alternative<Conductor>(sc.material) && sc.beam.d == 0.0) {
        auto r = K_full(sc);
        r.method = "full (dipole S_e diverges at d=0)";
        return r;
    }
    DephasingResult r;
    detail::fill_common(sc, r);
    QuadratureSpec inner = sc.spec;
    inner.rel_tol = std::min(1e-8, sc.spec.rel_tol * 1e-2);
    const double d = sc.beam.d;
    auto p = detail::dipole_integral(sc, [&](double om) { return S_p_quadrature(sc.material, om, d, inner).value; });
    auto e = detail::dipole_integral(sc, [&](double om) { return S_e_quadrature(sc.material, om, d, inner).value; });
    r.K_p = p.value;
    r.K_e = e.value;
    r.K = r.K_p + r.K_e;
    r.error = p.error + e.error;
    r.K0 = K0(sc);
    r.kappa = r.K / r.K0;
    r.method = "dipole";
    return r;
}

struct FullOptions {
    std::shared_ptr<const RadiationSpectrum> spectrum; // defaults to shared_spectrum(a/L)
};

/// K = (alpha theta/8 pi) int dz [C(z)/z] int dy y [2 n_t Psi_1 + (n_l - n_t) Psi_2]
/// over the rectangle of the Psi grid, with -Im g_{l,t} = (2 pi/k0) n_{l,t}.
/// The prefactor includes the 1/2 that makes the k -> 0 limit coincide with
/// the dipole integral of the printed S(omega).
inline DephasingResult K_full_with(const Scenario& sc, const FullOptions& opt) {
    check_scenario(sc);
    const auto& b = sc.beam;
    auto psi = opt.spectrum ? opt.spectrum : shared_spectrum(b.a / b.L);
    const double vc = b.v() / constants::c;
    const double lam = b.lambda();
    const double d = b.d;
    const double z_max = psi->z_max(), y_max = psi->y_max();
    const double budget = sc.spec.tail_exponent_budget;
    const auto s = scales(sc);

    QuadratureSpec inner_spec = sc.spec;
    inner_spec.rel_tol = sc.spec.rel_tol * 0.1;

    // inner integrals over y for a given z, split into PW and EW parts
    auto inner = [&](double z, bool pw) -> QuadResult {
        const double omega = 2.0 * z / b.tau;
        const Medium med = medium_at(sc.material, omega);
        const double y1 = 2.0 * z * vc; // xi = 1
        const double p = 4.0 * z * d / lam;
        if (pw) {
            const double phi_top = y1 <= y_max ? 0.5 * constants::pi : std::asin(y_max / y1);
            auto f = [&](double phi) {
                const double xi = std::sin(phi), u = std::cos(phi);
                const auto bu = pw_brackets_times_u(med, xi, u, p);
                const auto ps = psi->psi(z, y1 * xi);
                return y1 * y1 * xi * (2.0 * bu.t * ps.psi1 + (bu.l - bu.t) * ps.psi2);
            };
            const int nseed = std::min(200, 1 + static_cast<int>(p / constants::pi));
            std::vector<double> br;
            for (int i = 1; i < nseed; ++i) br.push_back(phi_top * i / nseed);
            return integrate_adaptive(f, 0.0, phi_top, inner_spec, br);
        }
        if (med.kind == Medium::vacuum || med.kind == Medium::ideal || y1 >= y_max) return {};
        double xi_top = y_max / y1;
        if (p > 0.0) xi_top = std::min(xi_top, std::hypot(1.0, budget / p));
        if (med.kind == Medium::lossless) xi_top = std::min(xi_top, med.n);
        if (xi_top <= 1.0) return {};
        const double t_top = std::acosh(xi_top);
        auto f = [&](double t) {
            const double xi = std::cosh(t);
            const auto br = kernel_brackets(med, xi, p);
            const auto pr = kernel_bracket_pair(med, xi, p);
            const auto ps = psi->psi(z, y1 * xi);
            return y1 * y1 * xi * std::sinh(t) * (2.0 * br.t * ps.psi1 + pr.diff * ps.psi2);
        };
        std::vector<double> br;
        if (med.kind == Medium::lossy) {
            const double xi2 = std::sqrt(std::abs(med.eps.value));
            if (xi2 > 1.0) br.push_back(std::acosh(xi2));
        }
        if (p > 0.0) {
            br.push_back(std::asinh(1.0 / p));
            br.push_back(std::asinh(5.0 / p));
        }
        return integrate_adaptive(f, 0.0, t_top, inner_spec, br);
    };

    const double pre = constants::alpha * b.theta() / (8.0 * constants::pi);
    // outer in w = sqrt(z)
    std::vector<double> wbr;
    if (s.delta_bar > 0.0)
        for (double y : {0.05, 0.2, 1.0, y_max}) {
            const double wc = y * s.delta_bar / (2.0 * b.L);
            if (wc < std::sqrt(z_max)) wbr.push_back(wc);
        }
    const double z_pw_clip = y_max / (2.0 * vc);
    if (z_pw_clip < z_max) wbr.push_back(std::sqrt(z_pw_clip));

    auto outer = [&](bool pw) {
        auto inner_w = [&](double w) {
            const double z = w * w;
            QuadResult r = inner(z, pw);
            const double fac = 2.0 * w * coth_z(sc, z) / z;
            r.value *= fac;
            r.error *= std::abs(fac);
            return r;
        };
        return integrate_iterated(inner_w, 0.0, std::sqrt(z_max), sc.spec, wbr);
    };
    auto rp = outer(true);
    auto re = outer(false);

    DephasingResult r;
    detail::fill_common(sc, r);
    r.K_p = pre * rp.value;
    r.K_e = pre * re.value;
    r.K = r.K_p + r.K_e;
    r.error = pre * (rp.error + re.error);
    r.K0 = K0(sc);
    r.kappa = r.K / r.K0;
    r.method = "full";
    return r;
}

inline DephasingResult K_full(const Scenario& sc) { return K_full_with(sc, {}); }

} // namespace nfd

namespace nfd {

/// Plateau integrals of the conductor near field at d << L, with
/// z_c(y) = (y delta_bar / 2L)^2 the second borderline:
///   I1 = int dy y^2 int_{z < z_c} dz z^-2 Psi_1   (above the borderline)
///   I2 = int dy y   int_{z > z_c} dz z^-3/2 Psi_2 (between the borderlines)
///   I  = int dz z^-3/2 int dy y [4 q Psi_1 + h(q) Psi_2], q = sqrt(z_c/z),
///        h(q) = Re 4/(sqrt(i - q^2) + i q)
/// I is the d -> 0 limit of the full integral with the good-conductor
/// kernel; it tends to (2 delta_bar/L) I1 when z_c >> 1 and to 2 sqrt2 I2
/// when z_c << 1, but keeps the transition region at the borderline that
/// the sharp split drops.
struct PlateauIntegrals {
    double I1, I2, I;
};

inline double plateau_h(double q) {
    const cplx v = std::sqrt(cplx{-q * q, 1.0});
    return (4.0 / (v + cplx{0.0, q})).real();
}

inline PlateauIntegrals plateau_integrals(const RadiationSpectrum& psi, double delta_bar_over_L,
                                          const QuadratureSpec& spec = {1e-6, 0.0, 50, 40.0, 20000}) {
    const double wmax = std::sqrt(psi.z_max());
    const double r = 0.5 * delta_bar_over_L;
    auto wc = [&](double y) { return std::min(wmax, r * y); };
    QuadratureSpec in = spec;
    in.rel_tol = spec.rel_tol * 0.1;
    auto scaled = [](QuadResult q, double f) {
        q.value *= f;
        q.error *= std::abs(f);
        return q;
    };
    // z = w^2 in every inner integral
    auto i1 = integrate_iterated(
        [&](double y) {
            auto f = [&](double w) { return 2.0 * psi.psi(w * w, y).psi1 / (w * w * w); };
            return scaled(integrate_adaptive(f, 0.0, wc(y), in), y * y);
        },
        0.0, psi.y_max(), spec);
    auto i2 = integrate_iterated(
        [&](double y) {
            auto f = [&](double w) { return 2.0 * psi.psi(w * w, y).psi2 / (w * w); };
            return scaled(integrate_adaptive(f, wc(y), wmax, in), y);
        },
        0.0, psi.y_max(), spec);
    std::vector<double> br;
    for (double y : {0.1, 0.5, 1.0, 2.0, 5.0})
        if (r * y < wmax) br.push_back(r * y);
    auto iall = integrate_iterated(
        [&](double y) {
            auto f = [&](double w) {
                const auto ps = psi.psi(w * w, y);
                const double q = r * y / w;
                return 2.0 / (w * w) * (4.0 * q * ps.psi1 + plateau_h(q) * ps.psi2);
            };
            std::vector<double> b;
            if (wc(y) < wmax) b.push_back(wc(y));
            return scaled(integrate_adaptive(f, 0.0, wmax, in, b), y);
        },
        0.0, psi.y_max(), spec);
    return {i1.value, i2.value, iall.value};
}

struct AsymptoticK {
    double kappa_p, kappa_e;
    std::string piece;
};

/// Piecewise near-field laws in the classical (high-T) limit. Coefficients
/// are those implied by the implemented Psi model and K normalization:
///   kappa_p = min(1, b_p2 d^2/lambda^2)
///   dielectric: kappa_e = n below d = sqrt(b_e) lambda/n, b_e lambda^2/(n d^2) above
///   conductor A:   kappa_e = min(P, max(A_3 db^2 lambda/d^3, C_e db lambda/d^2 + B_loop lambda L^2/d^3))
///   conductor B,C: kappa_e = min(P, C_e db lambda/d^2 + B_loop lambda L^2/d^3)
/// with the d << L plateau P = (3/16 J0)(db lambda/L^2) I, which becomes
/// (3/8 J0)(db^2 lambda/L^3) I1 in A and (3/2^{5/2} J0)(db lambda/L^2) I2 in B, C.
inline AsymptoticK kappa_asymptotic(const Scenario& sc, const RadiationSpectrum* psi = nullptr) {
    check_scenario(sc);
    const auto& mc = model_constants();
    const auto s = scales(sc);
    const double d = sc.beam.d, lam = s.lambda, L = sc.beam.L;
    AsymptoticK r{std::min(1.0, mc.b_p2() * d * d / (lam * lam)), 0.0, ""};
    if (auto* die = std::get_if<Dielectric>(&sc.material)) {
        const double n = die->n;
        if (d < std::sqrt(mc.b_e()) * lam / n) {
            r.kappa_e = n;
            r.piece = "dielectric d<<lambda_n";
        } else {
            r.kappa_e = mc.b_e() * lam * lam / (n * d * d);
            r.piece = "dielectric d>>lambda_n";
        }
        return r;
    }
    if (!std::holds_alternative<Conductor>(sc.material))
        throw DomainError("K_asymptotic: only dielectric and conductor have near-field laws");
    std::shared_ptr<const RadiationSpectrum> owned;
    if (!psi) {
        owned = shared_spectrum(sc.beam.a / L);
        psi = owned.get();
    }
    const double db = s.delta_bar;
    const auto reg = classify_regime(sc).regime;
    const auto I = plateau_integrals(*psi, db / L);
    const double inf = std::numeric_limits<double>::infinity();
    const double tail2 = d > 0 ? mc.C_e() * db * lam / (d * d) + mc.B_loop() * lam * L * L / (d * d * d) : inf;
    const double P = 3.0 / (16.0 * mc.J0) * db * lam / (L * L) * I.I;
    if (reg == Regime::A) {
        const double tail3 = d > 0 ? mc.A_3() * db * db * lam / (d * d * d) : inf;
        const double law = std::max(tail3, tail2);
        r.kappa_e = std::min(P, law);
        r.piece = P <= law ? "A: d<<L plateau" : (tail3 >= tail2 ? "A: L<<d<<delta_bar" : "A: delta_bar<<d<<d_x");
    } else {
        r.kappa_e = std::min(P, tail2);
        r.piece = std::string(regime_name(reg)) + (P <= tail2 ? ": d<<L plateau" : ": L<<d<<d_x");
    }
    if (r.kappa_p >= r.kappa_e) r.piece += " (far field dominates)";
    return r;
}

inline DephasingResult K_asymptotic(const Scenario& sc) {
    const auto a = kappa_asymptotic(sc);
    DephasingResult r;
    detail::fill_common(sc, r);
    r.K0 = K0(sc);
    r.K_p = a.kappa_p * r.K0;
    r.K_e = a.kappa_e * r.K0;
    r.K = r.K_p + r.K_e;
    r.kappa = a.kappa_p + a.kappa_e;
    r.method = "asymptotic: " + a.piece;
    return r;
}

} // namespace nfd
