#pragma once

#include "verify.hpp"

#include <numbers>
#include <optional>
#include <vector>

namespace ssforge {

/// Canned parameter sets matching the example surfaces of the source family.
/// The domains are artifact choices: rectangles where g' never vanishes,
/// annuli keeping clear of the g' zero at the origin.
struct Preset {
    std::string name;
    VerifyTarget target;
    DomainSpec domain;
};

inline std::vector<Preset> presets() {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    std::vector<Preset> out;

    DomainSpec rect;
    rect.kind = DomainKind::Rectangle;
    rect.p1min = -1.0; rect.p1max = 1.0;
    rect.p2min = -1.0; rect.p2max = 1.0;

    DomainSpec annulus;
    annulus.kind = DomainKind::Annulus;
    annulus.p1min = 0.4; annulus.p1max = 1.5;
    annulus.p2min = 0.0; annulus.p2max = two_pi;

    DomainSpec rot;
    rot.kind = DomainKind::Rectangle;
    rot.p1min = -1.5; rot.p1max = 1.5;
    rot.p2min = 0.0; rot.p2max = two_pi;

    out.push_back({"fig1", VerifyTarget::holomorphic("z", "z"), rect});
    out.push_back({"fig2", VerifyTarget::holomorphic("z^2", "z"), rect});
    out.push_back({"fig3", VerifyTarget::holomorphic("z", "z^3"), annulus});
    out.push_back({"fig4", VerifyTarget::holomorphic("z", "z^4"), annulus});
    out.push_back({"fig5", VerifyTarget::rotational(1.0, 0.0), rot});
    out.push_back({"fig6", VerifyTarget::rotational(0.0, 0.0), rot});
    out.push_back({"fig7", VerifyTarget::rotational(-1.0, 1.0), rot});
    return out;
}

inline std::optional<Preset> find_preset(const std::string& name) {
    for (Preset& p : presets())
        if (p.name == name) return p;
    return std::nullopt;
}

} // namespace ssforge
