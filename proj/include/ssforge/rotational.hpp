#pragma once

#include "weierstrass.hpp"

#include <cmath>

namespace ssforge {

/// Parameters of the rotational family X_{a,b}.
struct RotationalParams {
    double a{};
    double b{};
};

struct ProfilePoint {
    double M;   // radial coordinate
    double Nz;  // axial coordinate (named Nz to avoid clashing with the
                // Gauss map)
};

/// Profile curve of the rotational family realized by f = a z + b, g = e^z.
/// The a-dependent terms here differ from a common printed variant
/// (a(1-e^{2u1})/2 and -a e^{u1}); that variant fails the defining relation
/// for a != 0, while this one agrees with the general representation to
/// machine precision.  Both coincide at u1 = 0 and for a = 0.
inline ProfilePoint profile(const RotationalParams& p, double u1) {
    const double e1 = std::exp(u1);
    const double e2 = e1 * e1;
    const double s = std::exp(p.a * u1 + p.b);
    ProfilePoint out;
    out.M = s * (0.5 * p.a * (1.0 / e1 - e1) + 2.0 * e1 / (1.0 + e2));
    out.Nz = s * ((1.0 - e2) / (1.0 + e2) - p.a);
    return out;
}

/// X_{a,b}(u1, u2) = (M cos u2, M sin u2, Nz); u2 is the rotation angle.
inline Vec3 rotational_surface(const RotationalParams& p, double u1, double u2) {
    const ProfilePoint pp = profile(p, u1);
    return {pp.M * std::cos(u2), pp.M * std::sin(u2), pp.Nz};
}

/// Jets of the generating pair f = a z + b, g = e^z that realizes the same
/// surface through the general representation.
inline PointJets rotational_jets(const RotationalParams& p, Complex z) {
    PointJets pj;
    pj.z = z;
    pj.fj = {p.a * z + p.b, p.a, 0.0};
    const Complex e = std::exp(z);
    pj.gj = {e, e, e};
    return pj;
}

struct EquivalenceReport {
    double max_deviation{};
    std::size_t points{};
};

/// Pointwise comparison of immersion(f = a z + b, g = e^z) against the
/// closed-form rotational parameterization on a rectangular grid.
inline EquivalenceReport equivalence_check(const RotationalParams& p,
                                           double u1min, double u1max,
                                           double u2min, double u2max,
                                           int nu) {
    EquivalenceReport rep;
    for (int i = 0; i < nu; ++i) {
        for (int j = 0; j < nu; ++j) {
            const double u1 = u1min + (u1max - u1min) * i / (nu - 1);
            const double u2 = u2min + (u2max - u2min) * j / (nu - 1);
            const Vec3 general = immersion(rotational_jets(p, Complex(u1, u2)));
            const Vec3 direct = rotational_surface(p, u1, u2);
            rep.max_deviation = std::fmax(rep.max_deviation, norm(general - direct));
            ++rep.points;
        }
    }
    return rep;
}

} // namespace ssforge
