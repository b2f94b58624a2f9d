#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "nfd/errors.hpp"

namespace nfd {

struct QuadratureSpec {
    double rel_tol = 1e-8;
    double abs_tol = 0.0;
    int max_depth = 50;
    double tail_exponent_budget = 40.0;
    std::size_t max_intervals = 20000;
};

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    long evaluations = 0;
};

namespace detail {

// 7-point Gauss / 15-point Kronrod nodes on [-1,1]; index 0 is the centre.
inline constexpr std::array<double, 8> gk_x = {
    0.0,
    0.207784955007898467600689403773245,
    0.405845151377397166906606412076961,
    0.586087235467691130294144845693013,
    0.741531185599394439863864773280788,
    0.864864423359769072789712788640926,
    0.949107912342758524526189684047851,
    0.991455371120812639206854697526329};
inline constexpr std::array<double, 8> gk_wk = {
    0.209482141084727828012999174891714,
    0.204432940075298892414161999234649,
    0.190350578064785409913256402421014,
    0.169004726639267902826583426598550,
    0.140653259715525918745189590510238,
    0.104790010322250183839876322541518,
    0.063092092629978553290700663189204,
    0.022935322010529224963732008058970};
// Gauss weights for the odd Kronrod indices 0,2,4,6 (centre first).
inline constexpr std::array<double, 4> gk_wg = {
    0.417959183673469387755102040816327,
    0.381830050505118944950369775488975,
    0.279705391489276667901467771423780,
    0.129484966168869693270611432679082};

struct Segment {
    double a, b;
    double value, error, resabs;
    int depth;
    bool operator<(const Segment& o) const { return error < o.error; }
};

template <class F>
Segment gk15(F& f, double a, double b, int depth) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double k15 = gk_wk[0] * fc;
    double g7 = gk_wg[0] * fc;
    double abs15 = gk_wk[0] * std::abs(fc);
    for (int j = 1; j < 8; ++j) {
        const double dx = h * gk_x[j];
        const double f1 = f(c - dx);
        const double f2 = f(c + dx);
        k15 += gk_wk[j] * (f1 + f2);
        abs15 += gk_wk[j] * (std::abs(f1) + std::abs(f2));
        if (j % 2 == 0) g7 += gk_wg[j / 2] * (f1 + f2);
    }
    return {a, b, k15 * h, std::abs((k15 - g7) * h), abs15 * std::abs(h), depth};
}

} // namespace detail

/// Nodes and weights of the 15-point Kronrod rule mapped to [a,b].
inline void gk15_nodes(double a, double b, std::array<double, 15>& x, std::array<double, 15>& w) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    x[0] = c;
    w[0] = detail::gk_wk[0] * h;
    for (int j = 1; j < 8; ++j) {
        x[2 * j - 1] = c - h * detail::gk_x[j];
        x[2 * j] = c + h * detail::gk_x[j];
        w[2 * j - 1] = w[2 * j] = detail::gk_wk[j] * h;
    }
}

/// Global adaptive Gauss-Kronrod 7/15 on [a,b] with optional interior
/// breakpoints. If `partition` is non-null it receives the final segments.
template <class F>
QuadResult integrate_adaptive(F&& f, double a, double b, const QuadratureSpec& spec,
                              const std::vector<double>& breaks = {},
                              std::vector<std::pair<double, double>>* partition = nullptr) {
    if (!(spec.rel_tol > 0 || spec.abs_tol > 0) || spec.max_depth > 60)
        throw std::invalid_argument("integrate_adaptive: bad QuadratureSpec");
    if (!(std::isfinite(a) && std::isfinite(b)))
        throw std::invalid_argument("integrate_adaptive: bounds must be finite");
    QuadResult out;
    if (a == b) return out;
    double sign = 1.0;
    if (b < a) {
        std::swap(a, b);
        sign = -1.0;
    }
    long nev = 0;
    auto fc = [&](double x) {
        ++nev;
        const double y = f(x);
        if (!std::isfinite(y))
            throw QuadratureError("integrand not finite at x=" + std::to_string(x), 0.0,
                                  std::numeric_limits<double>::infinity());
        return y;
    };

    std::vector<double> pts{a};
    for (double p : breaks)
        if (p > a && p < b) pts.push_back(p);
    pts.push_back(b);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    std::priority_queue<detail::Segment> work;
    std::vector<detail::Segment> done;
    double total = 0.0, err = 0.0, resabs = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        auto s = detail::gk15(fc, pts[i], pts[i + 1], 0);
        total += s.value;
        err += s.error;
        resabs += s.resabs;
        work.push(s);
    }
    constexpr double eps = std::numeric_limits<double>::epsilon();
    auto target = [&] {
        return std::max({spec.abs_tol, spec.rel_tol * std::abs(total), 50.0 * eps * resabs});
    };

    std::size_t count = work.size();
    while (!work.empty() && err > target()) {
        auto s = work.top();
        work.pop();
        const double mid = 0.5 * (s.a + s.b);
        if (s.depth >= spec.max_depth || !(mid > s.a && mid < s.b)) {
            done.push_back(s);
            continue;
        }
        if (count >= spec.max_intervals) {
            work.push(s);
            break;
        }
        auto l = detail::gk15(fc, s.a, mid, s.depth + 1);
        auto r = detail::gk15(fc, mid, s.b, s.depth + 1);
        total += l.value + r.value - s.value;
        err += l.error + r.error - s.error;
        resabs += l.resabs + r.resabs - s.resabs;
        work.push(l);
        work.push(r);
        ++count;
    }
    // Re-sum from scratch so the running updates carry no drift.
    total = err = 0.0;
    while (!work.empty()) {
        done.push_back(work.top());
        work.pop();
    }
    std::sort(done.begin(), done.end(), [](auto& x, auto& y) { return x.a < y.a; });
    for (auto& s : done) {
        total += s.value;
        err += s.error;
    }
    out.value = sign * total;
    out.error = err;
    out.evaluations = nev;
    if (partition) {
        partition->clear();
        for (auto& s : done) partition->emplace_back(s.a, s.b);
    }
    if (err > target())
        throw QuadratureError("adaptive quadrature did not converge", out.value, err);
    return out;
}

/// Integral over [a, inf) of a function with a known exponential envelope
/// e^{-(x-a)/decay_scale}. The range is truncated at
/// a + budget*decay_scale and |f(b)|*decay_scale is added to the error.
template <class F>
QuadResult integrate_semi_infinite(F&& f, double a, double decay_scale, const QuadratureSpec& spec,
                                   const std::vector<double>& breaks = {}) {
    if (!(decay_scale > 0))
        throw std::invalid_argument("integrate_semi_infinite: decay_scale must be positive");
    const double b = a + spec.tail_exponent_budget * decay_scale;
    auto r = integrate_adaptive(f, a, b, spec, breaks);
    r.error += std::abs(f(b)) * decay_scale;
    return r;
}

/// Iterated 2D integral of f(x,y) over [ax,bx] x [ay(x),by(x)]. The inner
/// integral is memoized per outer node; its error is propagated through the
/// final outer partition.
template <class Inner>
QuadResult integrate_iterated(Inner&& inner, double ax, double bx, const QuadratureSpec& outer_spec,
                              const std::vector<double>& breaks = {}) {
    std::map<double, QuadResult> memo;
    auto g = [&](double x) {
        auto it = memo.find(x);
        if (it != memo.end()) return it->second.value;
        QuadResult r = inner(x);
        memo.emplace(x, r);
        return r.value;
    };
    std::vector<std::pair<double, double>> part;
    QuadResult out = integrate_adaptive(g, ax, bx, outer_spec, breaks, &part);
    double inner_err = 0.0;
    long nev = 0;
    for (auto& [x, r] : memo) nev += r.evaluations;
    for (auto [a, b] : part) {
        std::array<double, 15> xs, ws;
        gk15_nodes(a, b, xs, ws);
        for (int i = 0; i < 15; ++i) {
            auto it = memo.find(xs[i]);
            if (it != memo.end()) inner_err += ws[i] * it->second.error;
        }
    }
    out.error += inner_err;
    out.evaluations = nev;
    return out;
}

template <class F>
QuadResult integrate_2d(F&& f, double ax, double bx, double ay, double by, const QuadratureSpec& spec) {
    QuadratureSpec inner_spec = spec;
    inner_spec.rel_tol = spec.rel_tol * 0.1;
    auto inner = [&](double x) {
        return integrate_adaptive([&](double y) { return f(x, y); }, ay, by, inner_spec);
    };
    return integrate_iterated(inner, ax, bx, spec);
}

} // namespace nfd
