#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <numbers>

#include "scalarmc/forward_ad.hpp"
#include "scalarmc/forward_bvp.hpp"

using namespace scalarmc;

namespace {

AdProblemSpec heat_spec(double kappa, double t, Point2 x, std::int64_t n_particles,
                        double dt) {
    AdProblemSpec spec;
    spec.diffusion = DiffusionModel::isotropic(kappa);
    spec.initial_condition = ScalarField::cosine_mode(1, 0, 1.0);
    spec.observations = {{t, x}};
    spec.n_particles = n_particles;
    spec.dt = dt;
    return spec;
}

bool bits_equal(const ParticleEstimate& a, const ParticleEstimate& b) {
    return std::memcmp(&a.mean, &b.mean, sizeof(double)) == 0 &&
           std::memcmp(&a.std_error, &b.std_error, sizeof(double)) == 0 &&
           a.n_particles == b.n_particles && a.n_failed == b.n_failed;
}

}  // namespace

TEST_CASE("observe_ad: zero-diffusion limit is exact with zero variance") {
    AdProblemSpec spec;
    spec.diffusion = DiffusionModel::isotropic(0.0);
    spec.initial_condition = ScalarField::cosine_mode(1, 0, 1.0);
    // 2^k particles so the mean of identical values is bitwise exact.
    spec.n_particles = 4096;
    spec.observations = {{0.5, {0.0, 0.25}}, {1.0, {0.125, 0.5}}};
    const auto est = observe_ad(spec, 1);
    REQUIRE(est.size() == 2);
    for (std::size_t j = 0; j < 2; ++j) {
        CHECK(est[j].mean == spec.initial_condition(spec.observations[j].x));
        CHECK(est[j].std_error == 0.0);
    }
}

TEST_CASE("observe_ad: torus heat equation") {
    // v = 0, theta_0 = cos(2 pi x1): theta(t, x) = exp(-4 pi^2 kappa t) cos(2 pi x1).
    const double kappa = 0.01, t = 0.5;
    const double target = std::exp(-4.0 * std::numbers::pi * std::numbers::pi * kappa * t);
    const auto spec = heat_spec(kappa, t, {0.0, 0.0}, 20000, 1e-3);
    const auto est = observe_ad(spec, 7)[0];
    CHECK(std::abs(est.mean - target) <= 3.0 * est.std_error + 0.01);
    CHECK(est.std_error > 0.0);
}

TEST_CASE("observe_ad_single: slot equivalence, range check, determinism") {
    auto spec = heat_spec(0.02, 0.25, {0.0, 0.0}, 2000, 2e-3);
    spec.observations.push_back({0.5, {0.25, 0.75}});
    const auto all = observe_ad(spec, 5);
    for (std::size_t j = 0; j < spec.observations.size(); ++j) {
        const auto single = observe_ad_single(spec, j, 5);
        CHECK(bits_equal(all[j], single));
    }
    CHECK_THROWS(observe_ad_single(spec, 2, 5));
    CHECK(bits_equal(observe_ad_single(spec, 0, 5), observe_ad_single(spec, 0, 5)));
}

TEST_CASE("observe_ad: estimates are unchanged when later observations are dropped") {
    auto spec = heat_spec(0.02, 0.25, {0.0, 0.0}, 1000, 2e-3);
    spec.observations.push_back({0.4, {0.25, 0.75}});
    spec.observations.push_back({0.6, {0.5, 0.5}});
    const auto full = observe_ad(spec, 11);
    auto truncated = spec;
    truncated.observations.pop_back();
    const auto partial = observe_ad(truncated, 11);
    REQUIRE(partial.size() == 2);
    CHECK(bits_equal(full[0], partial[0]));
    CHECK(bits_equal(full[1], partial[1]));
}

TEST_CASE("observe_ad: linearity in theta_0 with matched seeds") {
    auto base = heat_spec(0.03, 0.2, {0.3, 0.6}, 3000, 1e-3);
    base.initial_condition = ScalarField::cosine_mode(1, 1, 1.0, 0.4);
    auto scaled = base;
    // a g + b with a = -2.5, b = 1.25 (constant term via a zero-frequency cosine).
    scaled.initial_condition = ScalarField::cosine_series(
        {{-2.5, {2 * std::numbers::pi, 2 * std::numbers::pi}, 0.4}, {1.25, {0.0, 0.0}, 0.0}});
    const auto g = observe_ad(base, 21)[0];
    const auto h = observe_ad(scaled, 21)[0];
    CHECK(h.mean == doctest::Approx(-2.5 * g.mean + 1.25).epsilon(1e-12));
}

TEST_CASE("observe_ad: sample mean respects the range of theta_0") {
    auto spec = heat_spec(0.05, 0.3, {0.4, 0.4}, 512, 5e-3);
    const auto est = observe_ad(spec, 3)[0];
    CHECK(est.mean >= -1.0);
    CHECK(est.mean <= 1.0);
}

TEST_CASE("observe_ad: validation errors") {
    AdProblemSpec spec;
    CHECK_THROWS(observe_ad(spec, 0));  // no observations
    spec.observations = {{0.0, {0.5, 0.5}}};
    CHECK_THROWS(observe_ad(spec, 0));  // t = 0
    spec.observations = {{0.5, {1.5, 0.5}}};
    CHECK_THROWS(observe_ad(spec, 0));  // outside [0,1)^2
}

TEST_CASE("observe_bvp: constant boundary data with no forcing is exact") {
    BvpProblemSpec spec;
    spec.diffusion = DiffusionModel::isotropic(0.2);
    spec.boundary_data = ScalarField::constant(3.5);
    spec.observations = {{0.5, 0.5}, {0.25, 0.7}};
    spec.n_particles = 1024;
    spec.dt = 1e-3;
    const auto est = observe_bvp(spec, 9);
    for (const auto& e : est) {
        CHECK(e.mean == 3.5);
        CHECK(e.std_error == 0.0);
        CHECK(e.aux_mean > 0.0);  // mean exit time
        CHECK(e.n_failed == 0);
    }
}

TEST_CASE("observe_bvp: manufactured solution theta = x + y") {
    // v = (1,1), f = -2, theta_bc = x + y: -v . grad theta + kappa Lap theta = -2
    // holds for any kappa, so the exact value at (0.5, 0.5) is 1.
    BvpProblemSpec spec;
    spec.velocity = VelocityField::constant({1.0, 1.0});
    spec.diffusion = DiffusionModel::isotropic(0.25);
    spec.forcing = ScalarField::constant(-2.0);
    spec.boundary_data = ScalarField::affine(0.0, {1.0, 1.0});
    spec.observations = {{0.5, 0.5}};
    spec.n_particles = 20000;
    spec.dt = 2e-4;
    const auto est = observe_bvp(spec, 13)[0];
    CHECK(std::abs(est.mean - 1.0) <= 3.0 * est.std_error + 0.01);
}

TEST_CASE("observe_bvp: linearity in (f, theta_bc) with matched seeds") {
    BvpProblemSpec spec;
    spec.velocity = VelocityField::constant({0.5, -0.25});
    spec.diffusion = DiffusionModel::isotropic(0.15);
    spec.forcing = ScalarField::gaussian_bumps({{1.0, {0.4, 0.4}}}, 4.0);
    spec.boundary_data = ScalarField::cosine_series(
        {{0.5, {std::numbers::pi / 2, 0.0}, 0.0}, {0.5, {0.0, std::numbers::pi / 2}, 0.0}});
    spec.observations = {{0.5, 0.5}, {0.3, 0.8}};
    spec.n_particles = 2000;
    spec.dt = 5e-4;

    auto scaled = spec;
    const double a = -3.0;
    scaled.forcing = spec.forcing.with_bump_amplitudes({a * 1.0});
    scaled.boundary_data = ScalarField::cosine_series(
        {{a * 0.5, {std::numbers::pi / 2, 0.0}, 0.0}, {a * 0.5, {0.0, std::numbers::pi / 2}, 0.0}});

    const auto base = observe_bvp(spec, 17);
    const auto mult = observe_bvp(scaled, 17);
    for (std::size_t j = 0; j < base.size(); ++j)
        CHECK(mult[j].mean == doctest::Approx(a * base[j].mean).epsilon(1e-12));
}

TEST_CASE("observe_bvp: near-boundary observations converge to the boundary data") {
    BvpProblemSpec spec;
    spec.diffusion = DiffusionModel::isotropic(0.2);
    spec.boundary_data = ScalarField::cosine_series(
        {{0.5, {std::numbers::pi / 2, 0.0}, 0.0}, {0.5, {0.0, std::numbers::pi / 2}, 0.0}});
    spec.observations = {{1.0 - 1e-3, 0.5}};
    spec.n_particles = 20000;
    spec.dt = 1e-5;
    const auto est = observe_bvp(spec, 23)[0];
    const double bc = spec.boundary_data({1.0, 0.5});
    CHECK(std::abs(est.mean - bc) <= 3.0 * est.std_error + 0.02);
}

TEST_CASE("observe_bvp: exit certainty at positive diffusion") {
    BvpProblemSpec spec;
    spec.velocity = VelocityField::constant({1.0, 1.0});
    spec.diffusion = DiffusionModel::isotropic(0.282);
    spec.boundary_data = ScalarField::constant(1.0);
    spec.observations = {{0.5, 0.5}};
    spec.n_particles = 50000;
    const auto est = observe_bvp(spec, 31)[0];
    CHECK(double(est.n_failed) / double(est.n_particles) < 1e-6);
}

TEST_CASE("observe_bvp: validation errors") {
    BvpProblemSpec spec;
    spec.domain = Domain::unit_torus();
    spec.observations = {{0.5, 0.5}};
    CHECK_THROWS(observe_bvp(spec, 0));  // unbounded domain
    spec.domain = Domain::box({0, 0}, {1, 1});
    spec.observations = {{1.5, 0.5}};
    CHECK_THROWS(observe_bvp(spec, 0));  // exterior observation
}

TEST_CASE("bvp default dt stays within its clip range") {
    BvpProblemSpec spec;
    spec.velocity = VelocityField::constant({1.0, 1.0});
    spec.diffusion = DiffusionModel::isotropic(0.282);
    spec.boundary_data = ScalarField::constant(0.0);
    spec.observations = {{0.5, 0.5}};
    const double dt = spec.resolved_dt();
    CHECK(dt >= 1e-6);
    CHECK(dt <= 1e-2);
}
