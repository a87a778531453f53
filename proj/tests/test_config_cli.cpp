#include <doctest.h>

#include <saltns/config.hpp>

#include <sstream>

using namespace saltns;

namespace {

ConfigFile parse(const std::string& text, const std::string& path = "test.ini") {
    std::istringstream in(text);
    return ConfigFile::parse_stream(in, path);
}

std::shared_ptr<ParsedConfig> parse_full(const std::string& text) {
    return parse_config(parse(text));
}

}  // namespace

TEST_CASE("minimal config materializes defaults") {
    auto pc = parse_full("[model]\ndim = 2\n");
    CHECK(pc->basis->dim() == 2);
    CHECK(pc->basis->count() == 16);
    CHECK(pc->bundle.form == EquationForm::Velocity);
    CHECK(pc->bundle.viscosity == 1.0);
    CHECK(pc->noise->truncation() == 2);
    CHECK(pc->bundle.noise == pc->noise.get());
    CHECK(pc->cfg.cutoff_n == 16);
    CHECK(pc->cfg.M == 2.0);
    CHECK(pc->cfg.scheme == Scheme::EulerMaruyamaIto);
    CHECK(pc->study.auto_radius);
    CHECK(pc->cfg.R > 0.0);
    CHECK(pc->study.bundle == &pc->bundle);
    CHECK(pc->study.n_values == std::vector<int>{4, 8, 16});
    CHECK(pc->assumption_n == 8);
    CHECK(supported_on_first(pc->initial, pc->cfg.cutoff_n));
    CHECK(divergence_defect(pc->initial) <= 1e-10);
}

TEST_CASE("full config round trip") {
    auto pc = parse_full(
        "[model]\n"
        "dim = 2\n"
        "modes = 12\n"
        "form = vorticity\n"
        "noise_kind = shear\n"
        "noise_count = 3\n"
        "noise_decay = 0.5\n"
        "noise_amplitude = 2.0\n"
        "viscosity = 0.1\n"
        "include_advection = false\n"
        "[galerkin]\n"
        "cutoff_n = 8\n"
        "M = 3.5\n"
        "horizon_t = 0.25\n"
        "dt = 0.005\n"
        "R = 40.0\n"
        "scheme = heun_stratonovich\n"
        "[initial]\n"
        "kind = single_mode\n"
        "amplitude = 0.7\n"
        "[study]\n"
        "kind = cauchy_decay\n"
        "n_values = 4 6 8\n"
        "samples = 9\n"
        "seed = 42\n"
        "S_values = 0.01 0.02\n"
        "deltas = 0.1 0.01\n"
        "[assumptions]\n"
        "n = 6\n"
        "samples = 20\n"
        "p = 2\n"
        "q = 6\n");
    CHECK(pc->bundle.form == EquationForm::Vorticity);
    CHECK(pc->bundle.viscosity == 0.1);
    CHECK_FALSE(pc->bundle.include_advection);
    CHECK(pc->noise->truncation() == 3);
    CHECK(pc->cfg.cutoff_n == 8);
    CHECK(pc->cfg.M == 3.5);
    CHECK(pc->cfg.horizon_t == 0.25);
    CHECK(pc->cfg.dt == 0.005);
    CHECK(pc->cfg.R == 40.0);
    CHECK_FALSE(pc->study.auto_radius);  // explicit R disables auto sizing
    CHECK(pc->cfg.scheme == Scheme::HeunStratonovich);
    CHECK(pc->study.study == StudyKind::CauchyDecay);
    CHECK(pc->study.n_values == std::vector<int>{4, 6, 8});
    CHECK(pc->study.sample_count == 9);
    CHECK(pc->study.seed == 42);
    CHECK(pc->study.S_values == std::vector<double>{0.01, 0.02});
    CHECK(pc->study.deltas == std::vector<double>{0.1, 0.01});
    CHECK(pc->assumption_n == 6);
    CHECK(pc->assumption_samples == 20);
    CHECK(pc->weights.p == 2.0);
    CHECK(pc->weights.q == 6.0);
    // single-mode scalar initial with the requested amplitude
    CHECK(pc->initial.coeff(0)[2] == Complex(0.7, 0.0));
}

TEST_CASE("syntax errors cite file and line") {
    CHECK_THROWS_WITH_AS(parse("[model]\ndim 2\n"), doctest::Contains("test.ini:2"), ConfigError);
    CHECK_THROWS_WITH_AS(parse("dim = 2\n"), doctest::Contains("outside any section"), ConfigError);
    CHECK_THROWS_WITH_AS(parse("[model\ndim = 2\n"), doctest::Contains("unterminated section"),
                         ConfigError);
    CHECK_THROWS_WITH_AS(parse("[]\n"), doctest::Contains("empty section name"), ConfigError);
    CHECK_THROWS_WITH_AS(parse("[model]\ndim = 2\ndim = 3\n"),
                         doctest::Contains("test.ini:3: duplicate key 'dim'"), ConfigError);
    CHECK_THROWS_WITH_AS(parse("[model]\n= 2\n"), doctest::Contains("empty key"), ConfigError);
}

TEST_CASE("semantic errors cite the offending key's line") {
    CHECK_THROWS_WITH_AS(parse_full("[model]\ndim = 2\n[galerkin]\nM = 0.5\n"),
                         doctest::Contains("test.ini:4: key 'M' must exceed 1"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_full("[model]\ndim = 2\n[galerkin]\ndt = 0\n"),
                         doctest::Contains("key 'dt' must be > 0"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_full("[model]\ndim = 4\n"), doctest::Contains("'dim' must be 2 or 3"),
                         ConfigError);
    CHECK_THROWS_WITH_AS(parse_full("[model]\ndim = 2\nform = spin\n"),
                         doctest::Contains("velocity|vorticity"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_full("[model]\ndim = 2\nnoise_kind = magic\n"),
                         doctest::Contains("shear|random|file|none"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_full("[model]\ndim = 2\nnoise_kind = file\n"),
                         doctest::Contains("'noise_file' required"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_full("[model]\ndim = 2\nviscosity = 0\n"),
                         doctest::Contains("'viscosity' must be > 0"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_full("[model]\ndim = 2\nmodes = 8\n[galerkin]\ncutoff_n = 9\n"),
                         doctest::Contains("'cutoff_n' must lie in [1, modes]"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_full("[model]\ndim = 2\n[galerkin]\nscheme = rk4\n"),
                         doctest::Contains("euler_maruyama_ito|heun_stratonovich"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_full("[model]\ndim = 2\n[initial]\nkind = spiky\n"),
                         doctest::Contains("zero|slow_decay|single_mode|smooth"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_full("[model]\ndim = 2\n[study]\nkind = nope\n"),
                         doctest::Contains("names no study"), ConfigError);
}

TEST_CASE("unknown keys are rejected, not ignored") {
    CHECK_THROWS_WITH_AS(parse_full("[model]\ndim = 2\ndimension = 2\n"),
                         doctest::Contains("test.ini:3: unknown key 'model.dimension'"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_full("[model]\ndim = 2\n[extra]\nfoo = 1\n"),
                         doctest::Contains("unknown key 'extra.foo'"), ConfigError);
}

TEST_CASE("typed getters: validation and trailing-garbage rejection") {
    auto cf = parse(
        "[a]\n"
        "x = 1.5\n"
        "n = 7\n"
        "flag = yes\n"
        "list = 1 2 3\n"
        "dlist = 0.5 1.5\n"
        "bad = 1.5x\n"
        "fbad = maybe\n"
        "frac_list = 1 2.5\n");
    CHECK(cf.get_double("a", "x", 0.0) == 1.5);
    CHECK(cf.get_int("a", "n", 0) == 7);
    CHECK(cf.get_bool("a", "flag", false));
    CHECK(cf.get_ints("a", "list", {}) == std::vector<int>{1, 2, 3});
    CHECK(cf.get_doubles("a", "dlist", {}) == std::vector<double>{0.5, 1.5});
    CHECK(cf.get_double("a", "missing", 9.5) == 9.5);
    CHECK(cf.get_ints("a", "missing", {4}) == std::vector<int>{4});
    CHECK_THROWS_WITH_AS(cf.get_double("a", "bad", 0.0), doctest::Contains("expects a number"),
                         ConfigError);
    CHECK_THROWS_WITH_AS(cf.get_int("a", "x", 0), doctest::Contains("expects an integer"), ConfigError);
    CHECK_THROWS_WITH_AS(cf.get_bool("a", "fbad", false), doctest::Contains("expects a boolean"),
                         ConfigError);
    CHECK_THROWS_WITH_AS(cf.get_ints("a", "frac_list", {}), doctest::Contains("expects integers"),
                         ConfigError);
}

TEST_CASE("comments and whitespace are tolerated") {
    auto pc = parse_full(
        "# leading comment\n"
        "  [model]   \n"
        "  dim = 2   # trailing comment\n"
        "\n"
        "modes = 10\n");
    CHECK(pc->basis->count() == 10);
}

TEST_CASE("initial kinds: zero and slow decay") {
    auto z = parse_full("[model]\ndim = 2\n[initial]\nkind = zero\n");
    CHECK(sobolev_norm(z->initial, 0.0) == 0.0);
    auto s = parse_full("[model]\ndim = 2\nform = vorticity\n[initial]\nkind = slow_decay\n");
    CHECK(sobolev_norm(s->initial, s->cfg.ladder.m_U) > 0.0);
    // every mode is populated: the tail never vanishes below the top
    for (int j = 0; j < s->basis->count(); ++j)
        CHECK(std::abs(s->initial.coeff(j)[2]) > 0.0);
}

TEST_CASE("auto radius recomputes R from the initial data") {
    auto pc = parse_full("[model]\ndim = 2\nform = vorticity\n");
    REQUIRE(pc->study.auto_radius);
    const double expect =
        auto_R(pc->cfg, sobolev_norm2(pc->initial, pc->cfg.ladder.m_H), pc->basis);
    CHECK(pc->cfg.R == expect);
}
