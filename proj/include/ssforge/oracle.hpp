#pragma once

#include "vec3.hpp"

#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace ssforge {

/// Parameterized surface as a black box; the oracle only ever sees X values.
using SurfaceFn = std::function<Vec3(double, double)>;

struct FDConfig {
    double step = 1e-4;       // central-difference spacing, must be in (0, 1e-2]
    bool richardson = false;  // one level of step-halving extrapolation
};

struct OracleEval {
    double E{}, F{}, G{}, eII{}, fII{}, gII{};
    Vec3 N{};
    double H{}, K{};
    double psi{}, lambda{};
};

class RegularityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

struct SurfaceDerivs {
    Vec3 X, Xu, Xv, Xuu, Xuv, Xvv;
};

inline SurfaceDerivs fd_derivs(const SurfaceFn& S, double u, double v, double s) {
    SurfaceDerivs d;
    d.X = S(u, v);
    const Vec3 pu = S(u + s, v), mu = S(u - s, v);
    const Vec3 pv = S(u, v + s), mv = S(u, v - s);
    d.Xu = (pu - mu) / (2.0 * s);
    d.Xv = (pv - mv) / (2.0 * s);
    d.Xuu = (pu + mu - 2.0 * d.X) / (s * s);
    d.Xvv = (pv + mv - 2.0 * d.X) / (s * s);
    const Vec3 pp = S(u + s, v + s), pm = S(u + s, v - s);
    const Vec3 mp = S(u - s, v + s), mm = S(u - s, v - s);
    d.Xuv = (pp - pm - mp + mm) / (4.0 * s * s);
    return d;
}

} // namespace detail

/// Recover fundamental forms, normal, curvatures, psi, lambda from X values
/// alone.  The normal sign is fixed to X_u x X_v.
inline OracleEval oracle_eval(const SurfaceFn& S, double u, double v,
                              const FDConfig& cfg = {}) {
    if (!(cfg.step > 0.0) || cfg.step > 1e-2)
        throw std::invalid_argument("FDConfig.step must be in (0, 1e-2]");
    detail::SurfaceDerivs d = detail::fd_derivs(S, u, v, cfg.step);
    if (cfg.richardson) {
        // Both stencils are second order; (4 D(s/2) - D(s)) / 3 removes the
        // leading truncation term.
        const detail::SurfaceDerivs dh = detail::fd_derivs(S, u, v, 0.5 * cfg.step);
        auto extrap = [](const Vec3& coarse, const Vec3& fine) {
            return (4.0 * fine - coarse) / 3.0;
        };
        d.Xu = extrap(d.Xu, dh.Xu);
        d.Xv = extrap(d.Xv, dh.Xv);
        d.Xuu = extrap(d.Xuu, dh.Xuu);
        d.Xuv = extrap(d.Xuv, dh.Xuv);
        d.Xvv = extrap(d.Xvv, dh.Xvv);
    }

    OracleEval o;
    o.E = dot(d.Xu, d.Xu);
    o.F = dot(d.Xu, d.Xv);
    o.G = dot(d.Xv, d.Xv);
    const double det1 = o.E * o.G - o.F * o.F;
    if (!(det1 > 0.0))
        throw RegularityError("degenerate first fundamental form");
    o.N = normalized(cross(d.Xu, d.Xv));
    o.eII = dot(d.Xuu, o.N);
    o.fII = dot(d.Xuv, o.N);
    o.gII = dot(d.Xvv, o.N);
    o.H = (o.eII * o.G - 2.0 * o.fII * o.F + o.gII * o.E) / (2.0 * det1);
    o.K = (o.eII * o.gII - o.fII * o.fII) / det1;
    o.psi = dot(d.X, o.N);
    o.lambda = dot(d.X, d.X);
    return o;
}

struct WeingartenFitReport {
    double max_residual{};
    double mean_residual{};
    std::size_t count{};
    bool pass{};
    bool degenerate{};  // all samples identical
};

/// Normalized residual of 2 psi H + (lambda + psi^2) K over a sample set.
inline WeingartenFitReport weingarten_fit(std::span<const OracleEval> samples,
                                          double threshold) {
    if (samples.size() < 3)
        throw std::invalid_argument("weingarten_fit needs at least 3 samples");
    WeingartenFitReport rep;
    rep.count = samples.size();
    double sum = 0.0;
    rep.degenerate = true;
    for (const OracleEval& s : samples) {
        const double a = 2.0 * s.psi * s.H;
        const double b = (s.lambda + s.psi * s.psi) * s.K;
        const double r = std::fabs(a + b) / (1.0 + std::fabs(a) + std::fabs(b));
        sum += r;
        rep.max_residual = std::fmax(rep.max_residual, r);
        if (s.H != samples[0].H || s.K != samples[0].K || s.psi != samples[0].psi ||
            s.lambda != samples[0].lambda)
            rep.degenerate = false;
    }
    rep.mean_residual = sum / static_cast<double>(samples.size());
    rep.pass = rep.max_residual <= threshold;
    return rep;
}

} // namespace ssforge
