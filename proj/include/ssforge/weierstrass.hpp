#pragma once

#include "complex_jet.hpp"
#include "vec3.hpp"

#include <functional>
#include <utility>

namespace ssforge {

/// Jets of the generating pair (f, g) at a parameter point z = u1 + i*u2.
/// Standing hypothesis: g' != 0 at the point.
struct PointJets {
    Complex z;
    Jet2 fj;  // f, f', f''
    Jet2 gj;  // g, g', g''
};

/// Scalars shared by every closed-form expression at a point.
struct GeomScalars {
    double T;    // 1 + |g|^2
    double h;    // support function value e^<1,f>
    double L;    // conformal metric factor 4|g'|^2 / T^2
    Complex xi;  // f'(g''/g' - 2 g' conj(g)/T) - f''
};

inline GeomScalars geom_scalars(const PointJets& p) {
    const double gp2 = abs2(p.gj.d1);
    if (gp2 == 0.0) throw SingularityError("g' = 0");
    GeomScalars s;
    s.T = 1.0 + abs2(p.gj.v);
    s.h = std::exp(p.fj.v.real());
    s.L = 4.0 * gp2 / (s.T * s.T);
    s.xi = p.fj.d1 * (p.gj.d2 / p.gj.d1 - 2.0 / s.T * p.gj.d1 * std::conj(p.gj.v)) - p.fj.d2;
    return s;
}

/// Symmetric matrix V with W = V^{-1} the Weingarten matrix.
struct VMatrix {
    double v11{}, v12{}, v22{};

    double tr() const { return v11 + v22; }
    double det() const { return v11 * v22 - v12 * v12; }
};

/// N = (2 Re g, 2 Im g, 2 - T) / T, the inverse stereographic image of g.
inline Vec3 gauss_map(Complex g) {
    const double T = 1.0 + abs2(g);
    return {2.0 * g.real() / T, 2.0 * g.imag() / T, (2.0 - T) / T};
}

/// Analytic partials (N,1, N,2) of the Gauss map.
inline std::pair<Vec3, Vec3> gauss_map_partials(const Jet2& gj) {
    const Complex g = gj.v;
    const double T = 1.0 + abs2(g);
    const double c = 2.0 / (T * T);
    const double p1 = pairing(g, gj.d1);                 // <g, g'>
    const double p2 = pairing(g, Complex(0, 1) * gj.d1); // <g, i g'>
    const Complex w1 = T * gj.d1 - 2.0 * g * p1;
    const Complex w2 = T * (Complex(0, 1) * gj.d1) - 2.0 * g * p2;
    return {Vec3{c * w1.real(), c * w1.imag(), -2.0 * c * p1},
            Vec3{c * w2.real(), c * w2.imag(), -2.0 * c * p2}};
}

/// Christoffel symbols of the diagonal metric L = (4|g'|^2/T^2) Id.
/// The diagonal structure forces g112 = g121 = g222, g212 = g111,
/// g211 = -g222 and g122 = -g111.
struct Christoffel {
    double g111, g211, g122, g222, g112, g212;
};

inline Christoffel christoffel(const Jet2& gj) {
    const double gp2 = abs2(gj.d1);
    if (gp2 == 0.0) throw SingularityError("g' = 0");
    const double T = 1.0 + abs2(gj.v);
    const Complex i(0, 1);
    const double a = (T * pairing(gj.d1, gj.d2) - 2.0 * gp2 * pairing(gj.v, gj.d1)) / (T * gp2);
    const double b = (T * pairing(gj.d1, i * gj.d2) - 2.0 * gp2 * pairing(gj.v, i * gj.d1)) / (T * gp2);
    return {a, -b, -a, b, b, a};
}

/// V from the closed-form entries in terms of f', f'', xi.
inline VMatrix compute_V_closed(const PointJets& p) {
    const GeomScalars s = geom_scalars(p);
    const Complex i(0, 1);
    const double q = s.h / s.L;  // T^2 h / (4 |g'|^2)
    const double A = pairing(Complex(1, 0), p.fj.d1);  // Re f'
    const double C = pairing(Complex(1, 0), i * p.fj.d1);
    const double B = s.xi.real();
    VMatrix V;
    V.v11 = q * (A * A - B) + s.h;
    V.v22 = q * (C * C + B) + s.h;
    V.v12 = q * (s.xi - 0.5 * p.fj.d1 * p.fj.d1).imag();
    return V;
}

/// Closed form of tr V; should agree with compute_V_closed(p).tr().
inline double trace_V_closed(const PointJets& p) {
    const GeomScalars s = geom_scalars(p);
    return s.h * abs2(p.fj.d1) / s.L + 2.0 * s.h;
}

/// V assembled from V_ij = (h_,ij - sum_k h_,k Gamma^k_ij + h L delta_ij)/L_jj,
/// with analytic partials of h = e^<1,f> and christoffel().  Independent route
/// from compute_V_closed.
inline VMatrix compute_V_direct(const PointJets& p) {
    const GeomScalars s = geom_scalars(p);
    const Christoffel G = christoffel(p.gj);
    const Complex i(0, 1);
    const double a = p.fj.d1.real();           // <1, f'>
    const double b = (i * p.fj.d1).real();     // <1, i f'>
    const double c = p.fj.d2.real();           // <1, f''>
    const double d = (i * p.fj.d2).real();     // <1, i f''>
    const double h = s.h;
    const double h1 = h * a, h2 = h * b;
    const double h11 = h * (a * a + c);
    const double h22 = h * (b * b - c);
    const double h12 = h * (a * b + d);
    VMatrix V;
    V.v11 = (h11 - h1 * G.g111 - h2 * G.g211) / s.L + h;
    V.v22 = (h22 - h1 * G.g122 - h2 * G.g222) / s.L + h;
    V.v12 = (h12 - h1 * G.g112 - h2 * G.g212) / s.L;
    return V;
}

/// The immersion X in closed form.  The tangential prefactor is 1/(2|g'|^2);
/// 1/(2|g'|) (selectable for negative-control runs) breaks the Gauss-map
/// consistency wherever |g'| != 1.
inline Vec3 immersion(const PointJets& p, bool linear_prefactor_debug = false) {
    const GeomScalars s = geom_scalars(p);
    const double gp2 = abs2(p.gj.d1);
    const double pref = linear_prefactor_debug ? s.h / (2.0 * std::sqrt(gp2))
                                               : s.h / (2.0 * gp2);
    const double w = pairing(p.gj.d1, p.gj.v * p.fj.d1);  // <g', g f'>
    const Complex tangential = s.T * p.gj.d1 * std::conj(p.fj.d1) - 2.0 * p.gj.v * w;
    const Vec3 N = gauss_map(p.gj.v);
    return Vec3{pref * tangential.real(), pref * tangential.imag(), pref * (-2.0 * w)} + s.h * N;
}

/// X as sum_j (h_,j / L_jj) N_,j + h N -- the support-function route, kept
/// separate from immersion() as a cross-check.
inline Vec3 support_representation(const PointJets& p) {
    const GeomScalars s = geom_scalars(p);
    const Complex i(0, 1);
    const double h1 = s.h * p.fj.d1.real();
    const double h2 = s.h * (i * p.fj.d1).real();
    const auto [N1, N2] = gauss_map_partials(p.gj);
    const Vec3 N = gauss_map(p.gj.v);
    return (h1 / s.L) * N1 + (h2 / s.L) * N2 + s.h * N;
}

/// K = 1/detV, H = -trV/(2 detV).
inline std::pair<double, double> curvatures(const VMatrix& V) {
    const double d = V.det();
    if (d == 0.0) throw SingularityError("detV = 0");
    return {-V.tr() / (2.0 * d), 1.0 / d};
}

struct FundForms {
    double E, F, G, eII, fII, gII, L;
};

/// Explicit closed-form coefficients of I and II.
inline FundForms fundamental_forms(const PointJets& p) {
    const GeomScalars s = geom_scalars(p);
    const Complex i(0, 1);
    const double q = s.h / s.L;                     // T^2 h / (4|g'|^2)
    const double A = p.fj.d1.real();
    const double C = (i * p.fj.d1).real();
    const double B = s.xi.real();
    const double D = (s.xi - 0.5 * p.fj.d1 * p.fj.d1).imag();
    const double h = s.h, h2 = h * h;
    const double u = A * A - B, v = C * C + B;
    FundForms ff;
    ff.E = q * h * (u * u + D * D) + 2.0 * h2 * u + h2 * s.L;
    ff.G = q * h * (v * v + D * D) + 2.0 * h2 * v + h2 * s.L;
    ff.F = (q * h * abs2(p.fj.d1) + 2.0 * h2) * D;
    ff.eII = h * u + h * s.L;
    ff.gII = h * v + h * s.L;
    ff.fII = h * D;
    ff.L = s.L;
    return ff;
}

/// The same coefficients via I = V L V^T, II = V L.  Second route.
inline FundForms fundamental_forms_from_V(const VMatrix& V, double L) {
    FundForms ff;
    ff.E = (V.v11 * V.v11 + V.v12 * V.v12) * L;
    ff.G = (V.v22 * V.v22 + V.v12 * V.v12) * L;
    ff.F = (V.v11 + V.v22) * V.v12 * L;
    ff.eII = V.v11 * L;
    ff.fII = V.v12 * L;
    ff.gII = V.v22 * L;
    ff.L = L;
    return ff;
}

/// Everything the pipeline knows about one surface point.
struct SurfaceEval {
    Vec3 X{}, N{};
    double E{}, F{}, G{}, eII{}, fII{}, gII{}, L{};
    double H{}, K{}, trV{}, detV{};
    double psi{}, lambda{};
    double ss_residual{}, midsphere_residual{};
};

/// Normalized defect of the defining relation 2 psi H + (lambda + psi^2) K = 0.
inline double ss_residual(double H, double K, double psi, double lambda) {
    const double a = 2.0 * psi * H;
    const double b = (lambda + psi * psi) * K;
    return std::fabs(a + b) / (1.0 + std::fabs(a) + std::fabs(b));
}

/// With r = H/K + psi/2: | |X + rN|^2 - r^2 | / (1 + lambda).  Vanishes iff
/// the shifted middle sphere passes through the origin.
inline double midsphere_residual(const Vec3& X, const Vec3& N, double H, double K,
                                 double psi, double lambda) {
    if (K == 0.0) throw SingularityError("K = 0 in midsphere_residual");
    const double r = H / K + 0.5 * psi;
    const Vec3 c = X + r * N;
    return std::fabs(norm2(c) - r * r) / (1.0 + lambda);
}

inline SurfaceEval evaluate(const PointJets& p, bool linear_prefactor_debug = false) {
    SurfaceEval s;
    const VMatrix V = compute_V_closed(p);
    s.trV = V.tr();
    s.detV = V.det();
    s.X = immersion(p, linear_prefactor_debug);
    s.N = gauss_map(p.gj.v);
    const FundForms ff = fundamental_forms(p);
    s.E = ff.E; s.F = ff.F; s.G = ff.G;
    s.eII = ff.eII; s.fII = ff.fII; s.gII = ff.gII;
    s.L = ff.L;
    auto [H, K] = curvatures(V);
    s.H = H; s.K = K;
    s.psi = dot(s.X, s.N);
    s.lambda = dot(s.X, s.X);
    s.ss_residual = ss_residual(s.H, s.K, s.psi, s.lambda);
    s.midsphere_residual = midsphere_residual(s.X, s.N, s.H, s.K, s.psi, s.lambda);
    return s;
}

/// Diagnostic for the printed detV closed form, which carries a suspect
/// leading factor.  Three candidates against the primary V11 V22 - V12^2:
///   printed:   (T^4 h^2 / 4|g'|^2)  * [ ... + |f'|^2/T^2 ]
///   refactored:(T^4 h^2 / 16|g'|^4) * [ ... + |f'|^2/T^2 ]
///   rederived: (T^4 h^2 / 16|g'|^4) * [ ... + 4|g'|^2 |f'|^2/T^2 ]
struct DetVDiagnostic {
    double primary;
    double printed;
    double refactored;
    double rederived;
};

inline DetVDiagnostic detv_diagnostic(const PointJets& p) {
    const GeomScalars s = geom_scalars(p);
    const double gp2 = abs2(p.gj.d1);
    const double T2 = s.T * s.T;
    const double h2 = s.h * s.h;
    const Complex f1 = p.fj.d1;
    const double D = (s.xi - 0.5 * f1 * f1).imag();
    const double bracket_common = (0.5 * f1 * f1).imag() * (0.5 * f1 * f1).imag()
                                - D * D
                                + s.xi.real() * (f1 * f1 - s.xi).real();
    DetVDiagnostic d;
    d.primary = compute_V_closed(p).det();
    d.printed = T2 * T2 * h2 / (4.0 * gp2) * (bracket_common + abs2(f1) / T2) + h2;
    d.refactored = T2 * T2 * h2 / (16.0 * gp2 * gp2) * (bracket_common + abs2(f1) / T2) + h2;
    d.rederived = T2 * T2 * h2 / (16.0 * gp2 * gp2)
                  * (bracket_common + 4.0 * gp2 * abs2(f1) / T2) + h2;
    return d;
}

/// FD residual of h * lap(h) - |grad h|^2 for a scalar field on the plane,
/// normalized by max(1, h^2) so the sphere-family fields stay O(1).
inline double harmonicity_residual(const std::function<double(double, double)>& h,
                                   double u1, double u2, double step = 1e-4) {
    const double c = h(u1, u2);
    const double xp = h(u1 + step, u2), xm = h(u1 - step, u2);
    const double yp = h(u1, u2 + step), ym = h(u1, u2 - step);
    const double lap = (xp + xm + yp + ym - 4.0 * c) / (step * step);
    const double gx = (xp - xm) / (2.0 * step);
    const double gy = (yp - ym) / (2.0 * step);
    const double r = c * lap - gx * gx - gy * gy;
    return std::fabs(r) / std::fmax(1.0, c * c);
}

} // namespace ssforge
