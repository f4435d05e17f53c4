#pragma once

#include "weierstrass.hpp"

#include <cstdlib>
#include <functional>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

namespace ssforge {

/// Producer of (f, g) jets at a parameter point; how the jets are obtained
/// (parsed expressions, rotational closed form) is the caller's business.
using JetSource = std::function<PointJets(Complex)>;

enum class DomainKind { Rectangle, Annulus };

struct DomainSpec {
    DomainKind kind = DomainKind::Rectangle;
    // Rectangle bounds (u1, u2); for Annulus these are (radius, angle).
    double p1min = -1.0, p1max = 1.0;
    double p2min = -1.0, p2max = 1.0;
    int nu = 64;  // grid resolution per axis, >= 2
    double mask_gprime = 1e-8;
    double mask_detv = 1e-10;

    /// Full-turn second axes are sampled half-open and meshed closed.
    bool periodic_u2() const {
        return std::fabs((p2max - p2min) - 2.0 * std::numbers::pi) < 1e-9;
    }

    double coord1(int i) const {
        return p1min + (p1max - p1min) * i / (nu - 1);
    }
    double coord2(int j) const {
        if (periodic_u2()) return p2min + (p2max - p2min) * j / nu;
        return p2min + (p2max - p2min) * j / (nu - 1);
    }

    Complex to_z(double c1, double c2) const {
        if (kind == DomainKind::Annulus) return std::polar(c1, c2);
        return {c1, c2};
    }

    bool valid(std::string* why = nullptr) const {
        auto fail = [&](const char* msg) {
            if (why) *why = msg;
            return false;
        };
        if (nu < 2) return fail("grid resolution must be >= 2 per axis");
        if (!(mask_gprime > 0.0) || !(mask_detv > 0.0))
            return fail("mask thresholds must be positive");
        if (kind == DomainKind::Annulus) {
            if (!(p1min > 0.0)) return fail("annulus inner radius must be positive");
            if (!(p1max > p1min)) return fail("annulus outer radius must exceed inner");
        } else {
            if (!(p1max > p1min) || !(p2max > p2min))
                return fail("rectangle bounds must be increasing");
        }
        return true;
    }
};

/// Grid point states after evaluation.
enum class PointStatus : unsigned char {
    Regular = 0,
    MaskedGPrime = 1,
    MaskedDetV = 2,
    MaskedError = 3,
};

struct SurfaceGrid {
    DomainSpec domain;
    std::vector<Complex> z;          // row-major, i (axis 1) outer, j inner
    std::vector<SurfaceEval> evals;  // valid where status == Regular
    std::vector<PointStatus> status;

    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(i) * domain.nu + j;
    }
    bool regular(int i, int j) const {
        return status[index(i, j)] == PointStatus::Regular;
    }
    std::size_t masked_count() const {
        std::size_t n = 0;
        for (PointStatus s : status)
            if (s != PointStatus::Regular) ++n;
        return n;
    }
    std::size_t regular_count() const { return z.size() - masked_count(); }
};

inline unsigned worker_count() {
    unsigned n = std::thread::hardware_concurrency();
    if (n == 0) n = 1;
    if (const char* env = std::getenv("SSFORGE_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap > 0 && static_cast<unsigned>(cap) < n) n = static_cast<unsigned>(cap);
    }
    return n;
}

/// Evaluate the full pipeline over the domain grid.  Rows are partitioned
/// across workers; results land in preallocated slots, so the outcome does
/// not depend on the worker count.
inline SurfaceGrid evaluate_grid(const JetSource& source, const DomainSpec& dom,
                                 bool linear_prefactor_debug = false) {
    SurfaceGrid grid;
    grid.domain = dom;
    const std::size_t total = static_cast<std::size_t>(dom.nu) * dom.nu;
    grid.z.resize(total);
    grid.evals.resize(total);
    grid.status.assign(total, PointStatus::Regular);
    for (int i = 0; i < dom.nu; ++i)
        for (int j = 0; j < dom.nu; ++j)
            grid.z[grid.index(i, j)] = dom.to_z(dom.coord1(i), dom.coord2(j));

    auto eval_row = [&](int i) {
        for (int j = 0; j < dom.nu; ++j) {
            const std::size_t k = grid.index(i, j);
            try {
                const PointJets p = source(grid.z[k]);
                if (std::sqrt(abs2(p.gj.d1)) < dom.mask_gprime) {
                    grid.status[k] = PointStatus::MaskedGPrime;
                    continue;
                }
                const VMatrix V = compute_V_closed(p);
                if (std::fabs(V.det()) < dom.mask_detv) {
                    grid.status[k] = PointStatus::MaskedDetV;
                    continue;
                }
                grid.evals[k] = evaluate(p, linear_prefactor_debug);
            } catch (const SingularityError&) {
                grid.status[k] = PointStatus::MaskedError;
            }
        }
    };

    const unsigned workers = worker_count();
    if (workers <= 1 || dom.nu < 8) {
        for (int i = 0; i < dom.nu; ++i) eval_row(i);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (int i = static_cast<int>(w); i < dom.nu; i += static_cast<int>(workers))
                    eval_row(i);
            });
        }
        for (std::thread& t : pool) t.join();
    }
    return grid;
}

} // namespace ssforge
