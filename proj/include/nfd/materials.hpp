#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <variant>

#include "nfd/constants.hpp"
#include "nfd/errors.hpp"

namespace nfd {

using cplx = std::complex<double>;

struct Vacuum {};
/// The |eps| = infinity limit. Kept separate so that no formula ever does
/// arithmetic on an infinite permittivity.
struct IdealMirror {};
struct Dielectric {
    double n;
};
struct Conductor {
    double eps0 = 1.0;
    double sigma; // s^-1
};

using Material = std::variant<Vacuum, IdealMirror, Dielectric, Conductor>;

inline Material make_dielectric(double n) {
    if (!(n > 1.0)) throw DomainError("dielectric: refractive index must exceed 1");
    return Dielectric{n};
}

inline Material make_conductor(double sigma, double eps0 = 1.0) {
    if (!(sigma > 0.0)) throw DomainError("conductor: sigma must be positive");
    if (!(eps0 >= 1.0)) throw DomainError("conductor: eps0 must be >= 1");
    return Conductor{eps0, sigma};
}

/// Validates a material that may have been built by aggregate initialisation.
inline void check_material(const Material& m) {
    if (auto* d = std::get_if<Dielectric>(&m)) make_dielectric(d->n);
    if (auto* c = std::get_if<Conductor>(&m)) make_conductor(c->sigma, c->eps0);
}

inline std::string material_name(const Material& m) {
    struct V {
        std::string operator()(const Vacuum&) const { return "vacuum"; }
        std::string operator()(const IdealMirror&) const { return "ideal"; }
        std::string operator()(const Dielectric&) const { return "dielectric"; }
        std::string operator()(const Conductor&) const { return "conductor"; }
    };
    return std::visit(V{}, m);
}

struct Permittivity {
    cplx value{1.0, 0.0};
    bool infinite = false;
};

inline Permittivity permittivity(const Material& m, double omega) {
    if (!(omega > 0.0)) throw DomainError("permittivity: omega must be positive");
    if (std::holds_alternative<IdealMirror>(m)) return {cplx{}, true};
    if (auto* d = std::get_if<Dielectric>(&m)) return {cplx{d->n * d->n, 0.0}, false};
    if (auto* c = std::get_if<Conductor>(&m))
        return {cplx{c->eps0, 4.0 * constants::pi * c->sigma / omega}, false};
    return {cplx{1.0, 0.0}, false};
}

struct SurfaceScales {
    double zeta;      // surface impedance
    double delta;     // skin depth, cm
    double k_border2; // sqrt(2)/delta, cm^-1
    bool good_conductor; // omega < 4 pi sigma
};

inline SurfaceScales surface_scales(double sigma, double omega) {
    if (!(sigma > 0.0) || !(omega > 0.0))
        throw DomainError("surface_scales: sigma and omega must be positive");
    const double zeta = std::sqrt(omega / (8.0 * constants::pi * sigma));
    const double delta = 2.0 * zeta * constants::c / omega;
    return {zeta, delta, std::sqrt(2.0) / delta, omega < 4.0 * constants::pi * sigma};
}

struct Borderlines {
    double k0;
    double k2; // +inf for the ideal mirror
};

inline Borderlines borderlines(const Material& m, double omega) {
    const auto eps = permittivity(m, omega);
    const double k0 = omega / constants::c;
    if (eps.infinite) return {k0, std::numeric_limits<double>::infinity()};
    return {k0, k0 * std::sqrt(std::abs(eps.value))};
}

} // namespace nfd
