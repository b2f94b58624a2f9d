#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <vector>

#include "nfd/constants.hpp"
#include "nfd/errors.hpp"
#include "nfd/numerics.hpp"
#include "nfd/parallel.hpp"

namespace nfd {

using cplx = std::complex<double>;
using cvec2 = std::array<cplx, 2>;

struct BeamPair {
    double L;   // cm
    double tau; // s
    double a;   // cm
    double d;   // cm

    double v() const { return L / tau; }
    double theta() const { return (a / L) * (a / L); }
    double lambda() const { return constants::c * tau; }
    /// a/L above this is outside the thin-interferometer picture.
    static constexpr double max_a_over_L = 0.1;
    bool thin() const { return a / L <= max_a_over_L; }
};

inline void check_beam(const BeamPair& bp) {
    if (!(bp.L > 0.0) || !(bp.tau > 0.0) || !(bp.a > 0.0))
        throw DomainError("beam: L, tau and a must be positive");
    if (!(bp.d >= 0.0)) throw DomainError("beam: d must be nonnegative");
}

inline BeamPair beam_from_velocity(double L, double v_over_c, double a, double d) {
    BeamPair bp{L, L / (v_over_c * constants::c), a, d};
    if (!(v_over_c > 0.0 && v_over_c < 1.0)) throw DomainError("beam: v/c must lie in (0,1)");
    check_beam(bp);
    return bp;
}

// Canonical model, with s = t/tau:
//   v_x = (L/tau) exp(-pi s^2), common to both paths
//   y_{1,2} = +-(a/2) exp(-pi s^2)
//   X = (L/2) erf(sqrt(pi) s)
inline constexpr double s_half_width = 5.0;
inline constexpr int s_points = 4097;
inline constexpr double g_floor = 1e-18;

struct SampledPath {
    double tau = 0.0;
    double ds = 0.0;
    std::vector<double> s, x, y, vx, vy; // cm and cm/s
};

inline std::array<SampledPath, 2> canonical_trajectories(const BeamPair& bp, int n = s_points) {
    check_beam(bp);
    if (n < 4097) throw DomainError("canonical_trajectories: need at least 4097 samples");
    std::array<SampledPath, 2> out;
    const double ds = 2.0 * s_half_width / (n - 1);
    for (int j = 0; j < 2; ++j) {
        auto& p = out[j];
        const double sgn = j == 0 ? 1.0 : -1.0;
        p.tau = bp.tau;
        p.ds = ds;
        for (int i = 0; i < n; ++i) {
            const double s = -s_half_width + i * ds;
            const double g = std::exp(-constants::pi * s * s);
            p.s.push_back(s);
            p.x.push_back(0.5 * bp.L * std::erf(std::sqrt(constants::pi) * s));
            p.y.push_back(sgn * 0.5 * bp.a * g);
            p.vx.push_back(bp.L / bp.tau * g);
            p.vy.push_back(sgn * 0.5 * bp.a / bp.tau * (-2.0 * constants::pi * s) * g);
        }
    }
    return out;
}

inline void check_resolution(double omega_tau, double kL, double ds) {
    if ((std::abs(omega_tau) + std::abs(kL)) * ds > 0.5 * constants::pi)
        throw ResolutionError("time grid too coarse for the requested (omega, k)");
}

/// l_{k omega} = (1/2 pi) int dt v(t) exp(i omega t - i k.R(t)), trapezoid
/// on the sampled grid. L_extent bounds |R| for the resolution check.
inline cvec2 radiation_amplitude(const SampledPath& p, double omega, std::array<double, 2> k) {
    double rmax = 0.0;
    for (std::size_t i = 0; i < p.s.size(); ++i) rmax = std::max(rmax, std::hypot(p.x[i], p.y[i]));
    check_resolution(omega * p.tau, 2.0 * std::hypot(k[0], k[1]) * rmax, p.ds);
    cvec2 l{};
    for (std::size_t i = 0; i < p.s.size(); ++i) {
        const cplx e = std::polar(1.0, omega * p.tau * p.s[i] - k[0] * p.x[i] - k[1] * p.y[i]);
        l[0] += p.vx[i] * e;
        l[1] += p.vy[i] * e;
    }
    const double w = p.tau * p.ds / (2.0 * constants::pi);
    return {l[0] * w, l[1] * w};
}

namespace detail {

struct CanonicalGrid {
    double ds;
    std::vector<double> s, g, X; // X in units of L
};

inline const CanonicalGrid& canonical_grid() {
    static const CanonicalGrid grid = [] {
        CanonicalGrid cg;
        cg.ds = 2.0 * s_half_width / (s_points - 1);
        for (int i = 0; i < s_points; ++i) {
            const double s = -s_half_width + i * cg.ds;
            const double g = std::exp(-constants::pi * s * s);
            if (g < g_floor) continue;
            cg.s.push_back(s);
            cg.g.push_back(g);
            cg.X.push_back(0.5 * std::erf(std::sqrt(constants::pi) * s));
        }
        return cg;
    }();
    return grid;
}

// Per-sample weights of the difference amplitude l/a (and its y-derivative)
// for fixed y and direction phi, before the exp(2izs) factor. Uses
//   v1 e^{-i th1} - v2 e^{-i th2} = e^{-i thbar}[(v1-v2) cos dth - i (v1+v2) sin dth]
// so nothing cancels when a/L is small.
struct SampleTerms {
    std::vector<cvec2> T, Ty;
};

inline void difference_terms(double y, double phi, double aL, SampleTerms& st) {
    const auto& cg = canonical_grid();
    const std::size_t n = cg.s.size();
    st.T.resize(n);
    st.Ty.resize(n);
    const double c = std::cos(phi), sn = std::sin(phi);
    const double w = cg.ds / (2.0 * constants::pi);
    const cplx I{0.0, 1.0};
    for (std::size_t i = 0; i < n; ++i) {
        const double g = cg.g[i], s = cg.s[i];
        const double al = 0.5 * sn * aL * g; // dth = y * al
        const double be = c * cg.X[i];      // thbar = y * be
        const double sd = std::sin(y * al), cd = std::cos(y * al);
        const cplx P = std::polar(w, -y * be);
        const cplx Ax = -2.0 * I * g * sd / aL;
        const cplx Ay = -2.0 * constants::pi * s * g * cd;
        const cplx Axy = -I * g * g * sn * cd;
        const cplx Ayy = 2.0 * constants::pi * s * g * al * sd;
        st.T[i] = {Ax * P, Ay * P};
        st.Ty[i] = {(Axy - I * be * Ax) * P, (Ayy - I * be * Ay) * P};
    }
}

inline std::vector<double> phi_nodes() {
    std::vector<double> v;
    for (int j = 0; j <= 16; ++j) v.push_back(constants::pi * j / 16.0);
    return v;
}
inline double phi_weight(int j) { return (j == 0 || j == 16) ? 1.0 / 32.0 : 2.0 / 32.0; }

} // namespace detail

/// Difference amplitude l_1 - l_2 for the canonical pair, evaluated stably.
inline cvec2 difference_amplitude(const BeamPair& bp, double omega, std::array<double, 2> k) {
    check_beam(bp);
    const auto& cg = detail::canonical_grid();
    const double z = 0.5 * omega * bp.tau;
    const double kk = std::hypot(k[0], k[1]);
    const double y = kk * bp.L;
    check_resolution(2.0 * z, y, cg.ds);
    const double phi = kk > 0.0 ? std::atan2(k[1], k[0]) : 0.0;
    detail::SampleTerms st;
    detail::difference_terms(y, phi, bp.a / bp.L, st);
    cvec2 l{};
    for (std::size_t i = 0; i < cg.s.size(); ++i) {
        const cplx e = std::polar(1.0, 2.0 * z * cg.s[i]);
        l[0] += st.T[i][0] * e;
        l[1] += st.T[i][1] * e;
    }
    // T carries l/a; restore dimensions (l has units of length).
    return {l[0] * bp.a, l[1] * bp.a};
}

struct PsiValues {
    double psi1 = 0.0, psi2 = 0.0;
};

namespace detail {

struct PsiJet {
    // value, d/dz, d/dy, d2/dzdy for psi1 and psi2
    std::array<double, 4> p1{}, p2{};
};

inline void accumulate_jet(const cvec2& l, const cvec2& lz, const cvec2& ly, const cvec2& lzy, double phi,
                           double w, PsiJet& jet) {
    auto re = [](cplx a, cplx b) { return (std::conj(a) * b).real(); };
    for (int c = 0; c < 2; ++c) {
        jet.p2[0] += w * std::norm(l[c]);
        jet.p2[1] += w * 2.0 * re(l[c], lz[c]);
        jet.p2[2] += w * 2.0 * re(l[c], ly[c]);
        jet.p2[3] += w * 2.0 * (re(ly[c], lz[c]) + re(l[c], lzy[c]));
    }
    const double cx = std::cos(phi), cy = std::sin(phi);
    const cplx q = cx * l[0] + cy * l[1];
    const cplx qz = cx * lz[0] + cy * lz[1];
    const cplx qy = cx * ly[0] + cy * ly[1];
    const cplx qzy = cx * lzy[0] + cy * lzy[1];
    jet.p1[0] += w * std::norm(q);
    jet.p1[1] += w * 2.0 * re(q, qz);
    jet.p1[2] += w * 2.0 * re(q, qy);
    jet.p1[3] += w * 2.0 * (re(qy, qz) + re(q, qzy));
}

inline PsiJet psi_jet(double z, double y, double aL, bool derivs) {
    const auto& cg = canonical_grid();
    check_resolution(2.0 * z, y, cg.ds);
    const auto phis = phi_nodes();
    SampleTerms st;
    PsiJet jet;
    const cplx I{0.0, 1.0};
    const int nphi = (y == 0.0 && !derivs) ? 1 : static_cast<int>(phis.size());
    for (int j = 0; j < nphi; ++j) {
        difference_terms(y, phis[j], aL, st);
        cvec2 l{}, lz{}, ly{}, lzy{};
        for (std::size_t i = 0; i < cg.s.size(); ++i) {
            const cplx e = std::polar(1.0, 2.0 * z * cg.s[i]);
            const cplx ez = 2.0 * I * cg.s[i] * e;
            for (int c = 0; c < 2; ++c) {
                l[c] += st.T[i][c] * e;
                ly[c] += st.Ty[i][c] * e;
                if (derivs) {
                    lz[c] += st.T[i][c] * ez;
                    lzy[c] += st.Ty[i][c] * ez;
                }
            }
        }
        accumulate_jet(l, lz, ly, lzy, phis[j], nphi == 1 ? 1.0 : phi_weight(j), jet);
    }
    if (nphi == 1) jet.p1[0] = 0.5 * jet.p2[0]; // <cos^2> = 1/2 for a fixed vector
    if (z == 0.0) jet.p1 = {};                  // k.l = 0 at omega = 0 for a closed loop
    return jet;
}

} // namespace detail

/// Direct (non-interpolated) angle averages Psi_1 = <|k^.l|^2>/theta L^2,
/// Psi_2 = <|l|^2>/theta L^2 at omega = 2z/tau, k = y/L.
inline PsiValues psi_functions(const BeamPair& bp, double z, double y) {
    check_beam(bp);
    if (!(z >= 0.0) || !(y >= 0.0)) throw DomainError("psi_functions: z and y must be nonnegative");
    auto jet = detail::psi_jet(z, y, bp.a / bp.L, false);
    return {jet.p1[0], jet.p2[0]};
}

/// Psi_2(z, 0), evaluated directly.
inline double psi2_axis(double z) {
    const auto& cg = detail::canonical_grid();
    cplx sum{};
    for (std::size_t i = 0; i < cg.s.size(); ++i)
        sum += cg.s[i] * cg.g[i] * std::polar(1.0, 2.0 * z * cg.s[i]);
    return std::norm(sum * cg.ds);
}

/// J_k = int_0^inf dz z^k Psi_2(z,0), via z = w^2 so the small-z behaviour
/// Psi_2 ~ z^2 makes every integrand regular.
inline double J_moment(double kexp, const QuadratureSpec& spec = {1e-11, 0.0, 50, 40.0, 20000}) {
    if (!(kexp > -3.0)) throw DomainError("J_moment: exponent must exceed -3");
    const double z_cut = std::sqrt(0.5 * constants::pi * spec.tail_exponent_budget);
    auto f = [&](double w) {
        const double z = w * w;
        return 2.0 * std::pow(w, 2.0 * kexp + 1.0) * psi2_axis(z);
    };
    return integrate_adaptive(f, 0.0, std::sqrt(z_cut), spec).value;
}

/// Psi grids on a uniform (z, y) lattice with exact first and mixed
/// derivatives, interpolated bicubically. Immutable after construction.
struct SpectrumGridOptions {
    int nz = 51, ny = 51;
    double z_max = 5.0, y_max = 5.0;
    unsigned threads = 0;
};

class RadiationSpectrum {
public:
    using Options = SpectrumGridOptions;

    explicit RadiationSpectrum(double a_over_L, Options o = {}) : aL_(a_over_L), opt_(o) {
        if (!(a_over_L > 0.0)) throw DomainError("RadiationSpectrum: a/L must be positive");
        if (o.nz < 2 || o.ny < 2 || !(o.z_max > 0) || !(o.y_max > 0))
            throw DomainError("RadiationSpectrum: bad grid options");
        hz_ = o.z_max / (o.nz - 1);
        hy_ = o.y_max / (o.ny - 1);
        jets_.resize(static_cast<std::size_t>(o.nz) * o.ny);
        build();
    }

    double a_over_L() const { return aL_; }
    double z_max() const { return opt_.z_max; }
    double y_max() const { return opt_.y_max; }
    int nz() const { return opt_.nz; }
    int ny() const { return opt_.ny; }

    /// Interpolated values; zero outside the grid rectangle.
    PsiValues psi(double z, double y) const {
        z = std::abs(z);
        y = std::abs(y);
        if (z > opt_.z_max || y > opt_.y_max) return {};
        int i = std::min(static_cast<int>(z / hz_), opt_.nz - 2);
        int j = std::min(static_cast<int>(y / hy_), opt_.ny - 2);
        const double t = z / hz_ - i, u = y / hy_ - j;
        const double H[2] = {(1 + 2 * t) * (1 - t) * (1 - t), t * t * (3 - 2 * t)};
        const double K[2] = {t * (1 - t) * (1 - t) * hz_, t * t * (t - 1) * hz_};
        const double Hu[2] = {(1 + 2 * u) * (1 - u) * (1 - u), u * u * (3 - 2 * u)};
        const double Ku[2] = {u * (1 - u) * (1 - u) * hy_, u * u * (u - 1) * hy_};
        PsiValues r;
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
                const auto& jt = jet(i + a, j + b);
                const double w0 = H[a] * Hu[b], wz = K[a] * Hu[b], wy = H[a] * Ku[b], wzy = K[a] * Ku[b];
                r.psi1 += w0 * jt.p1[0] + wz * jt.p1[1] + wy * jt.p1[2] + wzy * jt.p1[3];
                r.psi2 += w0 * jt.p2[0] + wz * jt.p2[1] + wy * jt.p2[2] + wzy * jt.p2[3];
            }
        return r;
    }

    PsiValues psi_direct(double z, double y) const {
        auto jt = detail::psi_jet(z, y, aL_, false);
        return {jt.p1[0], jt.p2[0]};
    }

    /// Grid node values, for dumps and tests.
    PsiValues node(int i, int j) const { return {jet(i, j).p1[0], jet(i, j).p2[0]}; }
    double z_node(int i) const { return i * hz_; }
    double y_node(int j) const { return j * hy_; }

    void write_csv(std::ostream& os) const {
        const auto prec = os.precision(17);
        os << "z,y,psi1,psi2\n";
        for (int i = 0; i < opt_.nz; ++i)
            for (int j = 0; j < opt_.ny; ++j) {
                const auto v = node(i, j);
                os << z_node(i) << ',' << y_node(j) << ',' << v.psi1 << ',' << v.psi2 << '\n';
            }
        os.precision(prec);
    }

private:
    const detail::PsiJet& jet(int i, int j) const { return jets_[static_cast<std::size_t>(i) * opt_.ny + j]; }

    void build() {
        const auto& cg = detail::canonical_grid();
        const std::size_t ns = cg.s.size();
        // exp(2 i z s) for every z node, shared by all rows.
        std::vector<cplx> ez(static_cast<std::size_t>(opt_.nz) * ns);
        for (int i = 0; i < opt_.nz; ++i)
            for (std::size_t k = 0; k < ns; ++k) ez[i * ns + k] = std::polar(1.0, 2.0 * z_node(i) * cg.s[k]);
        const auto phis = detail::phi_nodes();
        const cplx I{0.0, 1.0};
        parallel_for(static_cast<std::size_t>(opt_.ny), opt_.threads, [&](std::size_t j) {
            const double y = y_node(static_cast<int>(j));
            detail::SampleTerms st;
            std::vector<detail::PsiJet> row(opt_.nz);
            for (std::size_t a = 0; a < phis.size(); ++a) {
                detail::difference_terms(y, phis[a], aL_, st);
                for (int i = 0; i < opt_.nz; ++i) {
                    cvec2 l{}, lz{}, ly{}, lzy{};
                    const cplx* e = &ez[i * ns];
                    for (std::size_t k = 0; k < ns; ++k) {
                        const cplx ek = e[k];
                        const cplx ezk = 2.0 * I * cg.s[k] * ek;
                        const cvec2& T = st.T[k];
                        const cvec2& Ty = st.Ty[k];
                        l[0] += T[0] * ek;
                        l[1] += T[1] * ek;
                        ly[0] += Ty[0] * ek;
                        ly[1] += Ty[1] * ek;
                        lz[0] += T[0] * ezk;
                        lz[1] += T[1] * ezk;
                        lzy[0] += Ty[0] * ezk;
                        lzy[1] += Ty[1] * ezk;
                    }
                    detail::accumulate_jet(l, lz, ly, lzy, phis[a], detail::phi_weight(static_cast<int>(a)), row[i]);
                }
            }
            // k.l vanishes identically at omega = 0 (closed loop); drop the roundoff
            row[0].p1 = {};
            for (int i = 0; i < opt_.nz; ++i) jets_[static_cast<std::size_t>(i) * opt_.ny + j] = row[i];
        });
    }

    double aL_;
    Options opt_;
    double hz_, hy_;
    std::vector<detail::PsiJet> jets_;
};

/// Process-wide cache: the Psi grid depends on the geometry only through a/L.
inline std::shared_ptr<const RadiationSpectrum> shared_spectrum(double a_over_L, unsigned threads = 0) {
    static std::mutex mu;
    static std::map<double, std::shared_ptr<const RadiationSpectrum>> cache;
    std::lock_guard lk(mu);
    auto it = cache.find(a_over_L);
    if (it != cache.end()) return it->second;
    RadiationSpectrum::Options o;
    o.threads = threads;
    auto sp = std::make_shared<const RadiationSpectrum>(a_over_L, o);
    cache.emplace(a_over_L, sp);
    return sp;
}

} // namespace nfd
