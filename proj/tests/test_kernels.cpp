#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "nfd/kernels.hpp"
#include "oracles.hpp"

using namespace nfd;

namespace {

Permittivity eps_of(cplx e) { return {e, false}; }
const Permittivity ideal{cplx{}, true};

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

} // namespace

TEST(Branch, U) {
    EXPECT_EQ(branch_u(0.0), cplx(1.0, 0.0));
    EXPECT_NEAR(branch_u(0.6).real(), 0.8, 1e-15);
    EXPECT_NEAR(branch_u(std::sqrt(2.0)).imag(), 1.0, 1e-15);
    EXPECT_EQ(branch_u(std::sqrt(2.0)).real(), 0.0);
    EXPECT_EQ(branch_u(1.0), cplx(0.0, 0.0));
}

TEST(Branch, V) {
    EXPECT_NEAR(branch_v({100.0, 0.0}, 6.0).real(), 8.0, 1e-14);
    EXPECT_NEAR(branch_v({100.0, 0.0}, std::sqrt(101.0)).imag(), 1.0, 1e-12);
    const cplx v = branch_v({0.0, 2e10}, 1.0);
    EXPECT_LT(rel(v, std::sqrt(cplx(-1.0, 2e10))), 1e-14);
    EXPECT_NEAR(v.real() / 1e5, 1.0, 1e-9);
    EXPECT_NEAR(v.imag() / 1e5, 1.0, 1e-9);
}

TEST(Branch, RandomImNonnegative) {
    std::mt19937_64 g(7);
    std::uniform_real_distribution<double> xi(0.0, 10.0), re(-50.0, 50.0), im(0.0, 50.0);
    for (int i = 0; i < 5000; ++i) {
        const double x = xi(g);
        EXPECT_GE(branch_u(x).imag(), 0.0);
        EXPECT_GE(branch_v({re(g), i % 3 ? im(g) : 0.0}, x).imag(), 0.0);
    }
}

TEST(FG, IdealAtPointSix) {
    auto f = FG(ideal, 0.6);
    EXPECT_NEAR(f.Fl.real(), 2.05, 1e-14);
    EXPECT_NEAR(f.Ft.real(), -0.45, 1e-14);
    EXPECT_EQ(f.Fl, f.Gl);
    EXPECT_EQ(f.Ft, f.Gt);
}

TEST(FG, SmallXi) {
    auto f = FG(eps_of({4.0, 1.0}), 1e-8);
    EXPECT_NEAR(f.Gl.real(), 2.0, 1e-12);
    EXPECT_NEAR(f.Gt.real(), 0.0, 1e-12);
}

TEST(FG, PoleAtOne) { EXPECT_THROW(FG(eps_of({4.0, 0.0}), 1.0), DomainError); }

TEST(FG, MatchesPrintedForm) {
    for (cplx e : {cplx(100.0, 0.0), cplx(2.0, 5.0), cplx(1.0, 1e4), cplx(9.0, 0.1)})
        for (double xi : {0.1, 0.5, 0.9, 0.999, 1.001, 1.5, 3.0, 20.0, 300.0}) {
            auto a = FG(eps_of(e), xi);
            auto b = oracle::fg(e, xi);
            EXPECT_LT(rel(a.Fl, b.Fl), 1e-9) << e << " " << xi;
            EXPECT_LT(rel(a.Ft, b.Ft), 1e-9) << e << " " << xi;
            EXPECT_LT(rel(a.Gl, b.Gl), 1e-12);
        }
}

TEST(FG, DielectricBelowSecondBorderline) {
    const double e = 100.0, xi = 2.0, x2 = xi * xi;
    auto f = FG(eps_of({e, 0.0}), xi);
    const double pre = -2.0 / (e - 1.0) * std::sqrt(e - x2);
    const double br = e * (x2 - 1.0) / ((e + 1.0) * x2 - e);
    EXPECT_NEAR(f.Fl.real(), pre * (br + 1.0), 1e-12);
    EXPECT_NEAR(f.Ft.real(), pre * (br - 1.0), 1e-12);
}

TEST(AsymptoticF, IdealLimitBelow) {
    auto a = asymptotic_F({1e14, 0.0}, 0.4, Expansion::below);
    auto g = FG(ideal, 0.4);
    EXPECT_LT(rel(a[0], g.Gl), 1e-6);
    EXPECT_LT(rel(a[1], g.Gt), 1e-6);
}

TEST(AsymptoticF, BelowErrorIsOrderInverseEps) {
    auto a = asymptotic_F({100.0, 0.0}, 0.5, Expansion::below);
    auto f = FG(eps_of({100.0, 0.0}), 0.5);
    const double e = std::abs(a[0] - f.Fl) / std::abs(f.Fl);
    EXPECT_LT(e, 3e-2);
    EXPECT_GT(e, 1e-4);
}

TEST(AsymptoticF, ConductorFarAboveBorderline) {
    const double sigma = 5e17, w = 3.33e8;
    const auto ss = surface_scales(sigma, w);
    const auto eps = permittivity(make_conductor(sigma), w);
    const double xi = 100.0 * ss.k_border2 / (w / oracle::c);
    auto f = FG(eps, xi);
    const double want = -4.0 * ss.zeta * ss.zeta * xi;
    EXPECT_NEAR(f.Fl.real() / want, 1.0, 0.05);
    EXPECT_NEAR(f.Ft.real() / want, 1.0, 0.05);
    auto a = asymptotic_F(eps.value, xi, Expansion::above);
    EXPECT_NEAR(a[0].real() / want, 1.0, 0.05);
}

TEST(NegImG, VacuumPW) {
    const double w = 3e10, k0 = w / oracle::c;
    auto kv = neg_im_g(Vacuum{}, w, 0.6 * k0, 1.0);
    EXPECT_NEAR(kv.neg_im_gl, 2 * oracle::pi / k0 * 2.05, 1e-12);
    EXPECT_NEAR(kv.neg_im_gt, 2 * oracle::pi / k0 * -0.45, 1e-12);
    EXPECT_EQ(kv.domain, Domain::PW);
}

TEST(NegImG, VacuumAndIdealEWVanish) {
    for (double xi : {1.0, 1.0001, 2.0, 1e3}) {
        auto a = neg_im_g(Vacuum{}, 1e9, xi * 1e9 / oracle::c, 0.1);
        auto b = neg_im_g(IdealMirror{}, 1e9, xi * 1e9 / oracle::c, 0.0);
        EXPECT_EQ(a.neg_im_gl, 0.0);
        EXPECT_EQ(a.neg_im_gt, 0.0);
        EXPECT_EQ(b.neg_im_gl, 0.0);
        EXPECT_EQ(b.neg_im_gt, 0.0);
        EXPECT_EQ(a.domain, Domain::EW);
    }
}

TEST(NegImG, DielectricAboveN) {
    const double w = 1e9, k0 = w / oracle::c;
    for (double xi : {10.0, 10.5, 50.0}) {
        auto kv = neg_im_g(make_dielectric(10.0), w, xi * k0, 0.01);
        EXPECT_EQ(kv.neg_im_gl, 0.0);
        EXPECT_EQ(kv.neg_im_gt, 0.0);
    }
    EXPECT_GT(neg_im_g(make_dielectric(10.0), w, 5.0 * k0, 0.01).neg_im_gl, 0.0);
}

TEST(NegImG, IdealAtWall) {
    for (double xi : {0.1, 0.5, 0.99}) {
        auto kv = neg_im_g(IdealMirror{}, 1e9, xi * 1e9 / oracle::c, 0.0);
        EXPECT_EQ(kv.neg_im_gl, 0.0);
        EXPECT_EQ(kv.neg_im_gt, 0.0);
    }
}

TEST(NegImG, MatchesGreenFunction) {
    const double w = 2e9, k0 = w / oracle::c;
    const Material ms[] = {make_dielectric(3.0), make_conductor(1e11), make_conductor(1e10, 4.0)};
    for (const auto& m : ms)
        for (double xi : {0.2, 0.7, 0.95, 1.2, 2.5, 8.0})
            for (double p : {0.0, 0.3, 4.0}) {
                const cplx e = permittivity(m, w).value;
                auto [l, t] = oracle::brackets(e, xi, p);
                auto kv = neg_im_g(m, w, xi * k0, p / (2 * k0));
                const double f = 2 * oracle::pi / k0;
                const double sc = f * (std::abs(l) + std::abs(t) + 1e-3);
                EXPECT_NEAR(kv.neg_im_gl, f * l, 1e-9 * sc) << material_name(m) << " xi=" << xi << " p=" << p;
                EXPECT_NEAR(kv.neg_im_gt, f * t, 1e-9 * sc) << material_name(m) << " xi=" << xi << " p=" << p;
            }
}

TEST(NegImG, ConductorBetweenBorderlines) {
    const double sigma = 5e17, w = 3.33e8, k0 = w / oracle::c;
    const auto ss = surface_scales(sigma, w);
    const double xmax = ss.k_border2 / (30.0 * k0);
    for (double xi : {30.0, 300.0, 0.99 * xmax}) {
        const double k = xi * k0, d = 0.3 / k;
        auto kv = neg_im_g(make_conductor(sigma), w, k, d);
        const double el = std::exp(-2 * k * d);
        EXPECT_NEAR(kv.neg_im_gl / (8 * oracle::pi / k0 * ss.zeta * el), 1.0, 0.05) << xi;
        EXPECT_NEAR(kv.neg_im_gt / (8 * oracle::pi / (k0 * k0) * ss.zeta * ss.zeta * k * el), 1.0, 0.05) << xi;
    }
}

TEST(NegImG, ConductorAboveBorderline) {
    const double sigma = 5e17, w = 3.33e8, k0 = w / oracle::c;
    const auto ss = surface_scales(sigma, w);
    for (double f : {30.0, 100.0}) {
        const double k = f * ss.k_border2, d = 0.2 / k;
        auto kv = neg_im_g(make_conductor(sigma), w, k, d);
        const double want = 8 * oracle::pi / (k0 * k0) * ss.zeta * ss.zeta * k * std::exp(-2 * k * d);
        EXPECT_NEAR(kv.neg_im_gl / want, 1.0, 0.05);
        EXPECT_NEAR(kv.neg_im_gt / want, 1.0, 0.05);
    }
}

TEST(NegImG, BadInput) {
    EXPECT_THROW(neg_im_g(Vacuum{}, 0.0, 1.0, 0.0), DomainError);
    EXPECT_THROW(neg_im_g(Vacuum{}, 1.0, 0.0, 0.0), DomainError);
    EXPECT_THROW(neg_im_g(Vacuum{}, 1.0, 1.0, -1.0), DomainError);
}

TEST(NegImG, FiniteAtLightLine) {
    const double w = 1e9;
    auto kv = neg_im_g(make_conductor(1e12), w, w / oracle::c, 0.1);
    EXPECT_TRUE(std::isfinite(kv.neg_im_gl));
    EXPECT_TRUE(std::isfinite(kv.neg_im_gt));
}

TEST(Brackets, TimesUAndPair) {
    const double w = 1e9;
    const Material ms[] = {Vacuum{}, IdealMirror{}, make_dielectric(4.0), make_conductor(1e12)};
    for (const auto& m : ms) {
        const auto med = medium_at(m, w);
        for (double xi : {0.1, 0.6, 0.9, 1.5, 3.0})
            for (double p : {0.0, 0.5, 7.0}) {
                const auto b = kernel_brackets(med, xi, p);
                const auto pr = kernel_bracket_pair(med, xi, p);
                EXPECT_NEAR(pr.sum, b.l + b.t, 1e-12 * (1 + std::abs(b.l)));
                EXPECT_NEAR(pr.diff, b.l - b.t, 1e-12 * (1 + std::abs(b.l)));
                if (xi < 1) {
                    const double u = std::sqrt(1 - xi * xi);
                    const auto bu = pw_brackets_times_u(med, xi, u, p);
                    EXPECT_NEAR(bu.l, u * b.l, 1e-12 * (1 + std::abs(b.l)));
                    EXPECT_NEAR(bu.t, u * b.t, 1e-12 * (1 + std::abs(b.t)));
                }
            }
    }
}

TEST(Tensor, TraceIsLongitudinal) {
    const double w = 1e9, k = 3e-2;
    auto t = neg_im_g_tensor(make_conductor(1e12), w, {0.6 * k, 0.8 * k}, 0.5);
    auto kv = neg_im_g(make_conductor(1e12), w, k, 0.5);
    EXPECT_NEAR(t[0][0] + t[1][1], kv.neg_im_gl, 1e-12 * std::abs(kv.neg_im_gl));
    EXPECT_DOUBLE_EQ(t[0][1], t[1][0]);
}

TEST(Tensor, RotatesCovariantly) {
    const double w = 1e9, k = 3e-2, a = 0.7;
    auto t = neg_im_g_tensor(make_dielectric(5.0), w, {k, 0.0}, 0.2);
    auto r = neg_im_g_tensor(make_dielectric(5.0), w, {k * std::cos(a), k * std::sin(a)}, 0.2);
    const double c = std::cos(a), s = std::sin(a);
    const double R[2][2] = {{c, -s}, {s, c}};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            double v = 0;
            for (int m = 0; m < 2; ++m)
                for (int n = 0; n < 2; ++n) v += R[i][m] * R[j][n] * t[m][n];
            EXPECT_NEAR(r[i][j], v, 1e-12 * std::abs(t[0][0]));
        }
}

TEST(Tensor, PositiveSemidefinite) {
    std::mt19937_64 g(11);
    std::uniform_real_distribution<double> lx(-3.0, 3.0), ang(0.0, 6.283);
    const Material ms[] = {Vacuum{}, IdealMirror{}, make_dielectric(10.0), make_conductor(1e14), make_conductor(1e9, 3.0)};
    for (int i = 0; i < 4000; ++i) {
        const auto& m = ms[i % 5];
        const double w = 1e9, k0 = w / oracle::c;
        const double k = k0 * std::pow(10.0, lx(g)), d = std::pow(10.0, lx(g)) / k0, a = ang(g);
        auto t = neg_im_g_tensor(m, w, {k * std::cos(a), k * std::sin(a)}, d);
        const double tr = 0.5 * (t[0][0] + t[1][1]), r = std::hypot(0.5 * (t[0][0] - t[1][1]), t[0][1]);
        EXPECT_GE(tr - r, -1e-10 * (std::abs(tr) + r)) << material_name(m) << " k/k0=" << k / k0;
    }
}

TEST(Tensor, VacuumEWIsZero) {
    const double w = 1e9;
    auto t = neg_im_g_tensor(Vacuum{}, w, {3 * w / oracle::c, 0.0}, 0.1);
    for (auto& row : t)
        for (double x : row) EXPECT_EQ(x, 0.0);
}

TEST(EtDensity, Prefactor) {
    const double w = 1e12, k = 0.5 * w / oracle::c;
    auto t = neg_im_g_tensor(Vacuum{}, w, {k, 0.0}, 0.0);
    auto e = et_density(Vacuum{}, w, {k, 0.0}, 0.0, 0.0);
    const double pre = 2 * constants::hbar / std::pow(2 * oracle::pi, 3) * std::pow(w / oracle::c, 2);
    EXPECT_NEAR(e[0][0], pre * t[0][0], 1e-14 * std::abs(pre * t[0][0]));
    const double T = 300;
    const double x = constants::hbar * w / (2 * constants::k_B * T);
    auto eT = et_density(Vacuum{}, w, {k, 0.0}, 0.0, T);
    EXPECT_NEAR(eT[1][1] / e[1][1], 1.0 / std::tanh(x), 1e-12);
    EXPECT_THROW(et_density(Vacuum{}, w, {k, 0.0}, 0.0, -1.0), DomainError);
}

TEST(Coth, Limits) {
    EXPECT_EQ(coth_factor(1e9, 0.0), 1.0);
    const double w = 1e6, T = 300;
    const double x = constants::hbar * w / (2 * constants::k_B * T);
    EXPECT_NEAR(coth_factor(w, T) * x, 1.0, 1e-8);
    EXPECT_NEAR(coth_factor(w, 2 * T) / coth_factor(w, T), 2.0, 1e-8);
}
