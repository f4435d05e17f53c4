#include <ssforge/oracle.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

using namespace ssforge;

namespace {

SurfaceFn sphere_chart(double radius, Vec3 center = {}) {
    return [=](double u, double v) {
        return center + radius * Vec3{std::sin(u) * std::cos(v),
                                      std::sin(u) * std::sin(v), std::cos(u)};
    };
}

} // namespace

TEST_CASE("oracle recovers sphere curvatures") {
    const SurfaceFn S = sphere_chart(1.0);
    FDConfig cfg;
    cfg.richardson = true;
    const OracleEval o = oracle_eval(S, std::numbers::pi / 3, 0.7, cfg);
    CHECK(o.K == Catch::Approx(1.0).margin(1e-6));
    CHECK(std::fabs(o.H) == Catch::Approx(1.0).margin(1e-6));
    CHECK(std::fabs(o.psi) == Catch::Approx(1.0).margin(1e-8));
    CHECK(o.lambda == Catch::Approx(1.0).margin(1e-10));
    // mean and Gauss curvature are consistent: H^2 >= K with equality here
    CHECK(o.H * o.H == Catch::Approx(o.K).margin(1e-6));
}

TEST_CASE("oracle on a flat plane") {
    const SurfaceFn S = [](double u, double v) { return Vec3{u, v, 0.0}; };
    const OracleEval o = oracle_eval(S, 0.3, 0.4);
    CHECK(o.E == Catch::Approx(1.0));
    CHECK(o.F == Catch::Approx(0.0).margin(1e-12));
    CHECK(o.G == Catch::Approx(1.0));
    CHECK(std::fabs(o.H) <= 1e-8);
    CHECK(std::fabs(o.K) <= 1e-8);
    CHECK(std::fabs(o.psi) <= 1e-8);
    CHECK(o.lambda == Catch::Approx(0.25));
    CHECK(norm(o.N - Vec3{0, 0, 1}) <= 1e-10);
}

TEST_CASE("oracle on a cylinder of radius 2") {
    const SurfaceFn S = [](double u, double v) {
        return Vec3{2.0 * std::cos(u), 2.0 * std::sin(u), v};
    };
    FDConfig cfg;
    cfg.richardson = true;
    const OracleEval o = oracle_eval(S, 0.9, -0.2, cfg);
    CHECK(std::fabs(o.K) <= 1e-8);
    CHECK(std::fabs(o.H) == Catch::Approx(0.25).margin(1e-6));
    CHECK(std::fabs(o.psi) == Catch::Approx(2.0).margin(1e-8));
}

TEST_CASE("degenerate charts raise a regularity error") {
    const SurfaceFn S = [](double u, double v) { return Vec3{u + v, u + v, 0.0}; };
    CHECK_THROWS_AS(oracle_eval(S, 0.0, 0.0), RegularityError);
}

TEST_CASE("step validation") {
    const SurfaceFn S = sphere_chart(1.0);
    FDConfig cfg;
    cfg.step = 0.0;
    CHECK_THROWS_AS(oracle_eval(S, 1.0, 1.0, cfg), std::invalid_argument);
    cfg.step = 2e-2;
    CHECK_THROWS_AS(oracle_eval(S, 1.0, 1.0, cfg), std::invalid_argument);
    cfg.step = -1e-3;
    CHECK_THROWS_AS(oracle_eval(S, 1.0, 1.0, cfg), std::invalid_argument);
}

TEST_CASE("richardson extrapolation sharpens curvature estimates") {
    // ellipsoid chart with no closed-form shortcut in the oracle
    const SurfaceFn S = [](double u, double v) {
        return Vec3{std::sin(u) * std::cos(v), 1.3 * std::sin(u) * std::sin(v),
                    0.8 * std::cos(u)};
    };
    const double u = 1.0, v = 0.7;
    FDConfig fine;
    fine.step = 2e-4;
    fine.richardson = true;
    const double K_ref = oracle_eval(S, u, v, fine).K;

    FDConfig c1;
    c1.step = 8e-3;
    FDConfig c2;
    c2.step = 4e-3;
    const double e1 = std::fabs(oracle_eval(S, u, v, c1).K - K_ref);
    const double e2 = std::fabs(oracle_eval(S, u, v, c2).K - K_ref);
    // plain central differences are second order: halving the step should
    // shrink the error by about 4
    CHECK(e1 / e2 > 3.0);
    CHECK(e1 / e2 < 5.0);

    FDConfig rich = c1;
    rich.richardson = true;
    const double er = std::fabs(oracle_eval(S, u, v, rich).K - K_ref);
    CHECK(er < e2 / 10.0);
}

TEST_CASE("weingarten fit over oracle samples") {
    // sphere of radius 2 about the origin satisfies the defining relation
    const SurfaceFn S = sphere_chart(2.0);
    FDConfig cfg;
    cfg.richardson = true;
    std::vector<OracleEval> samples;
    for (double u : {0.5, 0.9, 1.3, 1.7, 2.1})
        for (double v : {0.2, 1.0, 2.5})
            samples.push_back(oracle_eval(S, u, v, cfg));
    const WeingartenFitReport rep = weingarten_fit(samples, 1e-4);
    CHECK(rep.pass);
    CHECK_FALSE(rep.degenerate);
    CHECK(rep.count == samples.size());
    CHECK(rep.mean_residual <= rep.max_residual);
}

TEST_CASE("weingarten fit rejects an off-center sphere") {
    const SurfaceFn S = sphere_chart(1.0, Vec3{0, 0, 3});
    FDConfig cfg;
    cfg.richardson = true;
    std::vector<OracleEval> samples;
    for (double u : {0.5, 0.9, 1.3, 1.7})
        for (double v : {0.2, 1.0, 2.5})
            samples.push_back(oracle_eval(S, u, v, cfg));
    const WeingartenFitReport rep = weingarten_fit(samples, 1e-4);
    CHECK_FALSE(rep.pass);
    CHECK(rep.max_residual > 0.1);
}

TEST_CASE("weingarten fit edge cases") {
    const SurfaceFn S = sphere_chart(2.0);
    const OracleEval one = oracle_eval(S, 1.0, 1.0);
    const std::vector<OracleEval> identical(3, one);
    const WeingartenFitReport rep = weingarten_fit(identical, 1e-4);
    CHECK(rep.degenerate);

    const std::vector<OracleEval> two(2, one);
    CHECK_THROWS_AS(weingarten_fit(two, 1e-4), std::invalid_argument);
}
