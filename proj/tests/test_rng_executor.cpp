#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <thread>
#include <vector>

#include "scalarmc/executor.hpp"
#include "scalarmc/rng.hpp"

using namespace scalarmc;

TEST_CASE("philox: block function is deterministic and key-sensitive") {
    const auto a = detail::philox4x32({1, 2, 3, 4}, {5, 6});
    const auto b = detail::philox4x32({1, 2, 3, 4}, {5, 6});
    CHECK(a == b);
    CHECK(a != detail::philox4x32({1, 2, 3, 4}, {5, 7}));
    CHECK(a != detail::philox4x32({2, 2, 3, 4}, {5, 6}));
}

TEST_CASE("streams: same key reproduces, different keys decorrelate") {
    NormalStream a(StreamKey{11, 22, 33});
    NormalStream b(StreamKey{11, 22, 33});
    for (int i = 0; i < 100; ++i) CHECK(a.normal() == b.normal());

    NormalStream c(StreamKey{11, 22, 34});
    NormalStream d(StreamKey{12, 22, 33});
    bool all_equal_c = true, all_equal_d = true;
    NormalStream a2(StreamKey{11, 22, 33});
    for (int i = 0; i < 100; ++i) {
        const double va = a2.normal();
        all_equal_c = all_equal_c && (va == c.normal());
        all_equal_d = all_equal_d && (va == d.normal());
    }
    CHECK(!all_equal_c);
    CHECK(!all_equal_d);
}

TEST_CASE("streams: normal moments and uniform range") {
    NormalStream rng(StreamKey{314, 0, 0});
    const int n = 200000;
    double s = 0, q = 0, cube = 0;
    for (int i = 0; i < n; ++i) {
        const double z = rng.normal();
        s += z;
        q += z * z;
        cube += z * z * z;
    }
    CHECK(std::abs(s / n) < 3.0 / std::sqrt(double(n)));
    CHECK(q / n == doctest::Approx(1.0).epsilon(0.02));
    CHECK(std::abs(cube / n) < 0.05);

    NormalStream u(StreamKey{314, 1, 0});
    double us = 0;
    for (int i = 0; i < n; ++i) {
        const double x = u.uniform();
        CHECK(x > 0.0);
        CHECK(x < 1.0);
        us += x;
    }
    CHECK(us / n == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("streams: index range guard") {
    CHECK_THROWS(NormalStream(StreamKey{0, 1ull << 32, 0}));
    CHECK_THROWS(NormalStream(StreamKey{0, 0, 1ull << 32}));
    CHECK_NOTHROW(NormalStream(StreamKey{~0ull, 0xFFFFFFFFull, 0xFFFFFFFFull}));
}

TEST_CASE("pairwise_sum: matches plain summation and is exact for powers of two") {
    std::vector<double> v;
    double plain = 0.0;
    NormalStream rng(StreamKey{1, 0, 0});
    for (int i = 0; i < 1000; ++i) {
        v.push_back(rng.normal());
        plain += v.back();
    }
    CHECK(pairwise_sum(v) == doctest::Approx(plain).epsilon(1e-12));
    CHECK(pairwise_sum({}) == 0.0);

    // 2^k copies of any value sum exactly.
    std::vector<double> rep(4096, 0.8207058237);
    CHECK(pairwise_sum(rep) == 4096.0 * 0.8207058237);
}

TEST_CASE("map_reduce: constant work gives exact mean and zero SE") {
    auto work = [](const StreamKey&) { return ParticleSample{2.0, 0.0, false}; };
    const auto est = map_reduce(work, 3, 1000, 7, 1);
    REQUIRE(est.size() == 3);
    for (const auto& e : est) {
        CHECK(e.mean == 2.0);
        CHECK(e.std_error == 0.0);
        CHECK(e.n_particles == 1000);
        CHECK(e.n_failed == 0);
    }
}

TEST_CASE("map_reduce: sign work has Bernoulli moments") {
    auto work = [](const StreamKey& key) {
        NormalStream rng(key);
        return ParticleSample{rng.normal() >= 0.0 ? 1.0 : -1.0, 0.0, false};
    };
    const int n = 100000;
    const auto est = map_reduce(work, 1, n, 99, 1);
    CHECK(std::abs(est[0].mean) <= 3.0 * est[0].std_error);
    CHECK(est[0].std_error == doctest::Approx(1.0 / std::sqrt(double(n))).epsilon(0.05));
}

TEST_CASE("map_reduce: bit-identical across worker counts") {
    auto work = [](const StreamKey& key) {
        NormalStream rng(key);
        double acc = 0.0;
        for (int s = 0; s < 20; ++s) acc += rng.normal();
        return ParticleSample{acc, std::abs(acc), false};
    };
    const auto one = map_reduce(work, 4, 5000, 123, 1);
    const auto four = map_reduce(work, 4, 5000, 123, 4);
    const auto many = map_reduce(work, 4, 5000, 123, 16);
    for (std::size_t j = 0; j < one.size(); ++j) {
        CHECK(std::memcmp(&one[j].mean, &four[j].mean, sizeof(double)) == 0);
        CHECK(std::memcmp(&one[j].mean, &many[j].mean, sizeof(double)) == 0);
        CHECK(std::memcmp(&one[j].std_error, &four[j].std_error, sizeof(double)) == 0);
        CHECK(std::memcmp(&one[j].aux_mean, &many[j].aux_mean, sizeof(double)) == 0);
    }
}

TEST_CASE("map_reduce: standard error follows the 1/sqrt(N) law") {
    auto work = [](const StreamKey& key) {
        NormalStream rng(key);
        return ParticleSample{rng.normal(), 0.0, false};
    };
    const auto small = map_reduce(work, 1, 10000, 5, 1);
    const auto large = map_reduce(work, 1, 40000, 5, 1);
    CHECK(large[0].std_error == doctest::Approx(0.5 * small[0].std_error).epsilon(0.15));
}

TEST_CASE("map_reduce: failures excluded; all-failed observation throws") {
    auto work = [](const StreamKey& key) {
        // Particles with even index fail on observation 1; all fail on observation 2.
        if (key.obs_index == 2) return ParticleSample{0.0, 0.0, true};
        if (key.obs_index == 1 && key.particle_index % 2 == 0)
            return ParticleSample{100.0, 0.0, true};
        return ParticleSample{1.5, 0.0, false};
    };
    const auto est = map_reduce(work, 2, 100, 0, 2);
    CHECK(est[0].n_failed == 0);
    CHECK(est[0].mean == 1.5);
    CHECK(est[1].n_failed == 50);
    CHECK(est[1].mean == 1.5);  // failed values never enter the mean
    CHECK_THROWS(map_reduce(work, 3, 100, 0, 2));
}

TEST_CASE("map_reduce: argument validation") {
    auto work = [](const StreamKey&) { return ParticleSample{}; };
    CHECK_THROWS(map_reduce(work, 0, 10, 0, 1));
    CHECK_THROWS(map_reduce(work, 1, 1, 0, 1));
}

TEST_CASE("map_reduce: work exceptions surface as errors") {
    auto work = [](const StreamKey& key) -> ParticleSample {
        if (key.particle_index == 37) throw std::runtime_error("boom");
        return ParticleSample{1.0, 0.0, false};
    };
    CHECK_THROWS(map_reduce(work, 1, 100, 0, 2));
}

TEST_CASE("resolve_workers") {
    CHECK(resolve_workers(3) == 3);
    CHECK(resolve_workers(0) >= 1);
    CHECK(resolve_workers(-5) >= 1);
}
