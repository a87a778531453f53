#include <doctest.h>

#include <saltns/noise_model.hpp>

#include <cstdio>
#include <fstream>

#include "test_helpers.hpp"

using namespace saltns;

TEST_CASE("shear family: divergence-free, weighted, known sup norms") {
    auto ms = ModeSet::make(2, 16);
    auto nm = build_xi_family(XiKind::ShearModes, 6, 1.0, ms, 1.0);
    REQUIRE(nm.truncation() == 6);
    for (int i = 0; i < 6; ++i) {
        CHECK(divergence_defect(nm.xi(i)) <= 1e-12);
        CHECK(nm.weight(i) == doctest::Approx(std::pow(2.0, -i)));
    }
    // xi_0 = (sin x2, 0): all derivatives up to order 3 have sup 1, and the
    // family weight scales the estimate linearly
    CHECK(nm.w3inf_norm(0) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(nm.w3inf_norm(1) == doctest::Approx(0.5).epsilon(1e-10));
    // second harmonic appears after the 4-pattern cycle: sup of the third
    // derivative of sin(2x) is 8, weighted by 2^-4
    CHECK(nm.w3inf_norm(4) == doctest::Approx(8.0 / 16.0).epsilon(1e-10));
    const double expect =
        1.0 + 0.25 + 1.0 / 16 + 1.0 / 64 + 0.25 + 1.0 / 16;  // sum of squares
    CHECK(nm.w3inf_sum_squares() == doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("random family: deterministic in seed, unit L2 before weighting") {
    auto ms = ModeSet::make(2, 12);
    auto a = build_xi_family(XiKind::RandomSmooth, 3, 0.5, ms, 2.0, 99);
    auto b = build_xi_family(XiKind::RandomSmooth, 3, 0.5, ms, 2.0, 99);
    auto c = build_xi_family(XiKind::RandomSmooth, 3, 0.5, ms, 2.0, 100);
    for (int i = 0; i < 3; ++i) {
        CHECK(a.xi(i) == b.xi(i));
        CHECK(divergence_defect(a.xi(i)) <= 1e-12);
        // amplitude * 2^{-decay i} scaling of a unit-L2 base
        CHECK(sobolev_norm(a.xi(i), 0.0) ==
              doctest::Approx(2.0 * std::pow(2.0, -0.5 * i)).epsilon(1e-10));
    }
    CHECK_FALSE(a.xi(0) == c.xi(0));
}

TEST_CASE("cached grids agree with direct transforms") {
    auto ms = ModeSet::make(2, 10);
    auto nm = build_xi_family(XiKind::RandomSmooth, 2, 1.0, ms, 1.0, 7);
    for (int i = 0; i < 2; ++i) {
        const auto direct = to_grid(nm.xi(i));
        const auto& cached = nm.grids(i).value;
        REQUIRE(cached.res == direct.res);
        for (int m = 0; m < 3; ++m)
            for (std::size_t p = 0; p < direct.comp[0].size(); ++p)
                CHECK(cached.comp[static_cast<std::size_t>(m)][p] ==
                      direct.comp[static_cast<std::size_t>(m)][p]);
    }
}

TEST_CASE("W3inf estimator: analytic values on trigonometric fields") {
    auto ms = ModeSet::make(2, 16);
    SpectralField f(ms);
    // f = (sin 2x2, 0): max over |alpha|<=3 of sup|D^alpha| is 2^3 = 8
    f.set_mode(WaveVector{{0, 2, 0}}, Coeff{Complex(0, -0.5), Complex{}, Complex{}});
    CHECK(NoiseModel::estimate_w3inf(f) == doctest::Approx(8.0).epsilon(1e-9));
    // zero field
    CHECK(NoiseModel::estimate_w3inf(SpectralField(ms)) == 0.0);
}

TEST_CASE("constructor rejects non-divergence-free fields") {
    auto ms = ModeSet::make(2, 8);
    SpectralField bad(ms);
    bad.set_mode(WaveVector{{1, 0, 0}}, Coeff{Complex(1, 0), Complex{}, Complex{}});
    CHECK_THROWS_AS(NoiseModel(ms, {bad}, {1.0}), std::invalid_argument);
}

TEST_CASE("file loader round trip and error anchoring") {
    auto ms = ModeSet::make(2, 12);
    const std::string path = "xi_family_test.txt";
    {
        std::ofstream out(path);
        out << "# two-field family\n"
            << "xi 1.0\n"
            << "0 1 0   0 -0.5   0 0   0 0\n"
            << "end\n"
            << "xi 0.5\n"
            << "1 0 0   0 0   0.5 0   0 0\n"
            << "end\n";
    }
    auto nm = noise_model_from_file(path, ms);
    REQUIRE(nm.truncation() == 2);
    CHECK(nm.weight(0) == 1.0);
    CHECK(nm.weight(1) == 0.5);
    const int j = ms->index_of(WaveVector{{0, 1, 0}});
    CHECK(nm.xi(0).coeff(j)[0] == Complex(0, -0.5));

    {
        std::ofstream out(path);
        out << "xi 1.0\n0 1 0 bad line\n";
    }
    CHECK_THROWS_WITH_AS(noise_model_from_file(path, ms),
                         doctest::Contains((path + ":2").c_str()), std::runtime_error);
    {
        std::ofstream out(path);
        out << "0 1 0 0 -0.5 0 0 0 0\n";
    }
    CHECK_THROWS_WITH_AS(noise_model_from_file(path, ms),
                         doctest::Contains("outside 'xi' record"), std::runtime_error);
    std::remove(path.c_str());
}

TEST_CASE("family outgrowing the basis is rejected with guidance") {
    auto tiny = ModeSet::make(2, 2);  // holds only harmonics |k|^2 = 1
    CHECK_THROWS_WITH_AS(build_xi_family(XiKind::ShearModes, 9, 1.0, tiny),
                         doctest::Contains("increase ambient modes"), std::invalid_argument);
}
