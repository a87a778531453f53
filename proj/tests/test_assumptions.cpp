#include <doctest.h>

#include <saltns/assumptions.hpp>

#include <algorithm>
#include <sstream>

#include "test_helpers.hpp"

using namespace saltns;
using testing::random_field;

namespace {

const AssumptionReport& find_report(const std::vector<AssumptionReport>& reports, AssumptionId id) {
    for (const auto& r : reports)
        if (r.id == id) return r;
    throw std::runtime_error("report not found");
}

}  // namespace

TEST_CASE("weight functions: value at zero and H-augmented variant") {
    auto ms = ModeSet::make(2, 8);
    const SobolevLadder lad = SobolevLadder::velocity();
    const KWeights kw;
    SpectralField zero(ms);
    CHECK(K_one(zero, lad, kw) == 1.0);
    CHECK(K_pair(zero, zero, lad, kw) == 1.0);
    CHECK(Kt2_one(zero, lad, kw) == 1.0);
    auto f = random_field(ms, 1, 0);
    CHECK(Kt2_one(f, lad, kw) ==
          doctest::Approx(K_one(f, lad, kw) + sobolev_norm2(f, lad.m_H)).epsilon(1e-14));
    CHECK(K_one(f, lad, kw) == doctest::Approx(1.0 + std::pow(sobolev_norm(f, lad.m_U), 4.0)));
}

TEST_CASE("pure diffusion: drift pairing collapses to the next rung up") {
    // with noise and advection off, the drift is -A phi, so
    // 2 <P_n A phi, phi>_H = -2 ||phi||^2_V on the retained span
    auto ms = ModeSet::make(3, 16);
    auto nm = NoiseModel::empty(ms);
    auto bundle = OperatorBundle::velocity(nm);
    bundle.include_advection = false;
    const SobolevLadder lad = bundle.ladder;
    auto phi = random_field(ms, 2, 0, true, 1.0);
    const double lhs = 2.0 * sobolev_inner(bundle.drift(phi), phi, lad.m_H);
    CHECK(lhs == doctest::Approx(-2.0 * sobolev_norm2(phi, lad.m_V)).epsilon(1e-12));
    const double lhsU = 2.0 * sobolev_inner(bundle.drift(phi), phi, lad.m_U);
    CHECK(lhsU == doctest::Approx(-2.0 * sobolev_norm2(phi, lad.m_H)).epsilon(1e-12));
}

TEST_CASE("pure diffusion closed forms: growth below 1, dissipation rate exactly 2") {
    auto ms = ModeSet::make(3, 16);
    auto nm = NoiseModel::empty(ms);
    auto bundle = OperatorBundle::velocity(nm);
    bundle.include_advection = false;
    const KWeights kw;
    const int n = 12, samples = 60;

    auto growth = check_growth(bundle, n, samples, kw);
    CHECK_FALSE(growth.has_kappa());
    CHECK(growth.c > 0.0);
    CHECK(growth.c <= 1.0 + 1e-9);
    CHECK(growth.worst_violation <= 1e-9);

    // the coercivity family balances at kappa = 2 with c collapsing to 0
    for (const auto& rep : {check_coercivity(bundle, n, samples, kw),
                            check_monotonicity(bundle, n, samples, kw),
                            find_report(check_remaining(bundle, n, samples, kw), AssumptionId::CoercivityU)}) {
        REQUIRE(rep.has_kappa());
        CHECK(rep.kappa == 2.0);
        CHECK(std::abs(rep.c) <= 1e-9);
        CHECK(rep.worst_violation <= 1e-9);
        CHECK(rep.samples == samples);
        CHECK(rep.n == n);
        CHECK(rep.witness >= 0);
        CHECK(rep.witness < samples);
    }
}

TEST_CASE("zero operator: all constants vanish") {
    auto ms = ModeSet::make(2, 8);
    auto nm = NoiseModel::empty(ms);
    auto bundle = OperatorBundle::vorticity(nm, 0.0);
    bundle.include_advection = false;
    const KWeights kw;
    for (const auto& rep : check_all(bundle, 6, 30, kw)) {
        CHECK(rep.c == 0.0);
        CHECK(rep.worst_violation <= 0.0);
        if (rep.has_kappa()) CHECK(rep.kappa == 0.0);
    }
}

TEST_CASE("report sets: count and kappa pattern per ladder") {
    auto ms2 = ModeSet::make(2, 10);
    auto nm2 = build_xi_family(XiKind::ShearModes, 2, 1.0, ms2);
    auto reports2 = check_all(OperatorBundle::vorticity(nm2), 6, 12, KWeights{});
    CHECK(reports2.size() == 11);  // three-rung ladder skips the X-norm forms

    auto ms3 = ModeSet::make(3, 10);
    auto nm3 = build_xi_family(XiKind::ShearModes, 2, 1.0, ms3);
    auto reports3 = check_all(OperatorBundle::velocity(nm3), 6, 12, KWeights{});
    CHECK(reports3.size() == 15);
    for (const auto& r : reports3) {
        const bool expect_kappa = r.id == AssumptionId::CoercivityH ||
                                  r.id == AssumptionId::MonotonicityU ||
                                  r.id == AssumptionId::CoercivityU;
        CHECK(r.has_kappa() == expect_kappa);
        if (r.has_kappa()) {
            CHECK(r.kappa >= 0.0);
            CHECK(r.kappa <= 4.0);
        }
        // the reported constant is the max ratio, so no sample violates it
        CHECK(r.worst_violation <= 1e-9);
    }
}

TEST_CASE("estimates are deterministic in the seed") {
    auto ms = ModeSet::make(2, 10);
    auto nm = build_xi_family(XiKind::ShearModes, 3, 1.0, ms);
    auto bundle = OperatorBundle::vorticity(nm);
    auto a = check_all(bundle, 8, 15, KWeights{}, 77);
    auto b = check_all(bundle, 8, 15, KWeights{}, 77);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].id == b[i].id);
        CHECK(a[i].c == b[i].c);
        CHECK((std::isnan(a[i].kappa) ? std::isnan(b[i].kappa) : a[i].kappa == b[i].kappa));
        CHECK(a[i].worst_violation == b[i].worst_violation);
        CHECK(a[i].witness == b[i].witness);
    }
    // a different seed draws different states and moves the constants
    auto c = check_all(bundle, 8, 15, KWeights{}, 78);
    bool any_diff = false;
    for (std::size_t i = 0; i < a.size(); ++i) any_diff = any_diff || a[i].c != c[i].c;
    CHECK(any_diff);
}

TEST_CASE("assumption CSV: header, row shape, empty kappa field") {
    auto ms = ModeSet::make(2, 8);
    auto nm = NoiseModel::empty(ms);
    auto bundle = OperatorBundle::vorticity(nm);
    bundle.include_advection = false;
    auto reports = check_all(bundle, 6, 10, KWeights{});
    std::ostringstream os;
    write_assumption_csv(os, reports);
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "assumption_id,n,samples,c,kappa,worst_violation");
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        CHECK(std::count(line.begin(), line.end(), ',') == 5);
        const auto& rep = reports.at(rows);
        CHECK(line.rfind(std::string(to_string(rep.id)) + ",", 0) == 0);
        // kappa column is empty when the inequality carries no kappa term
        std::size_t pos = 0;
        for (int c2 = 0; c2 < 4; ++c2) pos = line.find(',', pos) + 1;
        const bool empty_kappa = line[pos] == ',';
        CHECK(empty_kappa == !rep.has_kappa());
        ++rows;
    }
    CHECK(rows == reports.size());
}

TEST_CASE("sample count is validated") {
    auto ms = ModeSet::make(2, 8);
    auto nm = NoiseModel::empty(ms);
    auto bundle = OperatorBundle::vorticity(nm);
    CHECK_THROWS_AS(check_growth(bundle, 4, 0, KWeights{}), std::invalid_argument);
    CHECK_THROWS_AS(check_coercivity(bundle, 4, 0, KWeights{}), std::invalid_argument);
    CHECK_THROWS_AS(check_monotonicity(bundle, 4, -1, KWeights{}), std::invalid_argument);
    CHECK_THROWS_AS(check_remaining(bundle, 4, 0, KWeights{}), std::invalid_argument);
}
