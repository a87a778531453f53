#include <doctest.h>

#include <saltns/brownian.hpp>

#include <set>

using namespace saltns;

TEST_CASE("increments are pure functions of (seed, sample, step, index)") {
    BrownianPath a(123, 7, 0.01, 4);
    BrownianPath b(123, 7, 0.01, 4);
    for (std::uint64_t step = 0; step < 50; ++step)
        for (int i = 0; i < 4; ++i) CHECK(a.increment(step, i) == b.increment(step, i));
    // evaluation order does not matter
    const double late = a.increment(49, 3);
    const double early = a.increment(0, 0);
    CHECK(late == b.increment(49, 3));
    CHECK(early == b.increment(0, 0));
}

TEST_CASE("distinct coordinates give distinct draws") {
    BrownianPath p(9, 0, 0.01, 8);
    std::set<double> seen;
    for (std::uint64_t step = 0; step < 40; ++step)
        for (int i = 0; i < 8; ++i) seen.insert(p.increment(step, i));
    CHECK(seen.size() == 40 * 8);
    // and distinct seeds / samples decouple
    BrownianPath q(10, 0, 0.01, 8);
    BrownianPath r(9, 1, 0.01, 8);
    CHECK(p.increment(0, 0) != q.increment(0, 0));
    CHECK(p.increment(0, 0) != r.increment(0, 0));
}

TEST_CASE("increment moments match N(0, dt)") {
    const double dt = 0.02;
    BrownianPath p(2024, 0, dt, 1);
    const int N = 200000;
    double sum = 0.0, sum2 = 0.0, sum4 = 0.0;
    for (int s = 0; s < N; ++s) {
        const double z = p.increment(static_cast<std::uint64_t>(s), 0);
        sum += z;
        sum2 += z * z;
        sum4 += z * z * z * z;
    }
    const double mean = sum / N;
    const double var = sum2 / N;
    const double kurt = (sum4 / N) / (var * var);
    CHECK(std::abs(mean) <= 4.0 * std::sqrt(dt / N));
    CHECK(var == doctest::Approx(dt).epsilon(0.02));
    CHECK(kurt == doctest::Approx(3.0).epsilon(0.05));
}

TEST_CASE("increments across indices are uncorrelated") {
    const double dt = 1.0;
    BrownianPath p(77, 3, dt, 2);
    const int N = 100000;
    double cross = 0.0, lag = 0.0;
    double prev = p.increment(0, 0);
    for (int s = 0; s < N; ++s) {
        const double z0 = p.increment(static_cast<std::uint64_t>(s), 0);
        const double z1 = p.increment(static_cast<std::uint64_t>(s), 1);
        cross += z0 * z1;
        if (s > 0) lag += z0 * prev;
        prev = z0;
    }
    CHECK(std::abs(cross / N) <= 4.0 / std::sqrt(static_cast<double>(N)));
    CHECK(std::abs(lag / N) <= 4.0 / std::sqrt(static_cast<double>(N)));
}

TEST_CASE("sample_increments returns one increment per noise index") {
    BrownianPath p(5, 2, 0.1, 3);
    auto v = p.sample_increments(17);
    REQUIRE(v.size() == 3);
    for (int i = 0; i < 3; ++i) CHECK(v[static_cast<std::size_t>(i)] == p.increment(17, i));
}

TEST_CASE("counter rng is deterministic and roughly standard normal") {
    CounterRng a(1, 2), b(1, 2);
    for (int i = 0; i < 100; ++i) CHECK(a.normal() == b.normal());
    CounterRng c(1, 3);
    double sum = 0.0, sum2 = 0.0;
    const int N = 100000;
    for (int i = 0; i < N; ++i) {
        const double z = c.normal();
        sum += z;
        sum2 += z * z;
    }
    CHECK(std::abs(sum / N) <= 4.0 / std::sqrt(static_cast<double>(N)));
    CHECK(sum2 / N == doctest::Approx(1.0).epsilon(0.02));
}
