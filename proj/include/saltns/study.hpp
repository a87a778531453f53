#pragma once

#include <atomic>
#include <thread>

#include "assumptions.hpp"

namespace saltns {

enum class StudyKind {
    UniformBound,
    CauchyDecay,
    SmallTimeHitting,
    PathwiseUniqueness,
    RoughDataConvergence,
    BlowupWatch,
    GronwallWitness,  // alias: the uniqueness delta sweep viewed as a
                      // stochastic-Gronwall stability witness
};

inline const char* to_string(StudyKind k) {
    switch (k) {
        case StudyKind::UniformBound: return "uniform_bound";
        case StudyKind::CauchyDecay: return "cauchy_decay";
        case StudyKind::SmallTimeHitting: return "small_time_hitting";
        case StudyKind::PathwiseUniqueness: return "pathwise_uniqueness";
        case StudyKind::RoughDataConvergence: return "rough_data_convergence";
        case StudyKind::BlowupWatch: return "blowup_watch";
        default: return "gronwall_witness";
    }
}

struct StudySpec {
    StudyKind study = StudyKind::UniformBound;
    GalerkinConfig cfg;
    const OperatorBundle* bundle = nullptr;
    SpectralField initial;
    std::vector<int> n_values;
    int sample_count = 1;
    std::uint64_t seed = 0;
    int threads = 1;
    bool auto_radius = true;  // recompute R per cutoff level via auto_R
    std::vector<double> S_values{0.01, 0.04, 0.16};
    std::vector<double> deltas{1e-2, 1e-3, 1e-4};

    void validate() const {
        cfg.validate();
        if (bundle == nullptr) throw std::invalid_argument("StudySpec: bundle missing");
        if (sample_count < 1) throw std::invalid_argument("StudySpec: sample_count must be >= 1");
        if (threads < 1) throw std::invalid_argument("StudySpec: threads must be >= 1");
        for (std::size_t i = 1; i < n_values.size(); ++i)
            if (n_values[i] <= n_values[i - 1])
                throw std::invalid_argument("StudySpec: n_values must be strictly increasing");
    }
};

struct StudyRow {
    std::string statistic;
    double parameter = 0.0;
    double mean = 0.0;
    double std_error = 0.0;
    int count = 0;
};

struct StudyResult {
    std::string study_name;
    std::uint64_t seed = 0;
    std::vector<StudyRow> rows;
    std::vector<std::string> metadata;  // key=value lines echoing the spec

    const StudyRow* find(const std::string& stat, double parameter) const {
        for (const auto& r : rows)
            if (r.statistic == stat && r.parameter == parameter) return &r;
        return nullptr;
    }
};

namespace detail {

// Deterministic sample parallelism: each sample writes its own slot, the
// reduction below is sequential, so output is independent of thread count.
template <typename F>
std::vector<std::vector<double>> per_sample(int count, int threads, F&& fn) {
    std::vector<std::vector<double>> slots(static_cast<std::size_t>(count));
    if (threads <= 1) {
        for (int s = 0; s < count; ++s) slots[static_cast<std::size_t>(s)] = fn(s);
        return slots;
    }
    std::atomic<int> next{0};
    auto worker = [&]() {
        for (;;) {
            const int s = next.fetch_add(1);
            if (s >= count) return;
            slots[static_cast<std::size_t>(s)] = fn(s);
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    return slots;
}

// mean and standard error over the finite entries of column `col`
inline StudyRow column_stat(const std::string& name, double param,
                            const std::vector<std::vector<double>>& slots, std::size_t col) {
    StudyRow row{name, param, 0.0, 0.0, 0};
    double sum = 0.0, sum2 = 0.0;
    for (const auto& s : slots) {
        const double v = s[col];
        if (!std::isfinite(v)) continue;
        sum += v;
        sum2 += v * v;
        ++row.count;
    }
    if (row.count > 0) row.mean = sum / row.count;
    if (row.count > 1) {
        const double var = std::max(0.0, (sum2 - sum * sum / row.count) / (row.count - 1));
        row.std_error = std::sqrt(var / row.count);
    }
    return row;
}

// UH functional of the pathwise difference up to `stop`:
// sup ||a-b||^2_U + left-Riemann integral of ||a-b||^2_H
inline double uh_diff_functional(const TrajectoryRecord& a, const TrajectoryRecord& b, double stop,
                                 const SobolevLadder& lad) {
    double sup = 0.0, integral = 0.0;
    const std::size_t K = std::min(a.times.size(), b.times.size());
    for (std::size_t k = 0; k < K && a.times[k] <= stop + 1e-12; ++k) {
        const SpectralField d = a.states[k] - b.states[k];
        sup = std::max(sup, sobolev_norm2(d, lad.m_U));
        if (k + 1 < K && a.times[k + 1] <= stop + 1e-12)
            integral += sobolev_norm2(d, lad.m_H) * (a.times[k + 1] - a.times[k]);
    }
    return sup + integral;
}

// HV functional sup ||.||^2_H + int ||.||^2_V of one record up to `stop`
inline double hv_functional(const TrajectoryRecord& rec, double stop) {
    double sup = 0.0, integral = 0.0;
    for (std::size_t k = 0; k < rec.times.size() && rec.times[k] <= stop + 1e-12; ++k) {
        sup = std::max(sup, rec.norm_H2[k]);
        if (k + 1 < rec.times.size() && rec.times[k + 1] <= stop + 1e-12)
            integral += rec.norm_V2[k] * (rec.times[k + 1] - rec.times[k]);
    }
    return sup + integral;
}

// UH functional of a single record up to `stop`, from its stored norms
inline double uh_functional(const TrajectoryRecord& rec, double stop) {
    double sup = 0.0, integral = 0.0;
    for (std::size_t k = 0; k < rec.times.size() && rec.times[k] <= stop + 1e-12; ++k) {
        sup = std::max(sup, rec.norm_U2[k]);
        if (k + 1 < rec.times.size() && rec.times[k + 1] <= stop + 1e-12)
            integral += rec.norm_H2[k] * (rec.times[k + 1] - rec.times[k]);
    }
    return sup + integral;
}

inline GalerkinConfig level_config(const StudySpec& spec, int n, double initial_H2) {
    GalerkinConfig cfg = spec.cfg;
    cfg.cutoff_n = n;
    if (spec.auto_radius) cfg.R = auto_R(cfg, initial_H2, spec.bundle->noise->basis());
    return cfg;
}

// least squares fit y = a + b x
inline std::pair<double, double> fit_affine(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) return {sy / n, 0.0};
    const double b = (n * sxy - sx * sy) / denom;
    const double a = (sy - b * sx) / n;
    return {a, b};
}

inline void echo_spec(StudyResult& res, const StudySpec& spec) {
    res.study_name = to_string(spec.study);
    res.seed = spec.seed;
    auto add = [&](const std::string& k, const std::string& v) { res.metadata.push_back(k + "=" + v); };
    add("study", to_string(spec.study));
    add("seed", std::to_string(spec.seed));
    add("samples", std::to_string(spec.sample_count));
    add("threads", std::to_string(spec.threads));
    add("cutoff_n", std::to_string(spec.cfg.cutoff_n));
    add("dt", csv_number(spec.cfg.dt));
    add("horizon_t", csv_number(spec.cfg.horizon_t));
    add("M", csv_number(spec.cfg.M));
    add("R", csv_number(spec.cfg.R));
    add("auto_radius", spec.auto_radius ? "1" : "0");
    add("scheme", spec.cfg.scheme == Scheme::EulerMaruyamaIto ? "euler_maruyama_ito" : "heun_stratonovich");
    add("form", spec.bundle->form == EquationForm::Velocity ? "velocity" : "vorticity");
    add("noise_count", std::to_string(spec.bundle->noise->truncation()));
    std::string nv;
    for (int n : spec.n_values) nv += (nv.empty() ? "" : " ") + std::to_string(n);
    add("n_values", nv);
    add("version", "1");
}

}  // namespace detail

// --- studies ---------------------------------------------------------------

// E ||Psi^n||^2_{HV,tau} per cutoff and its ratio to (||Psi_0^n||^2_H + 1).
inline StudyResult uniform_bound_study(const StudySpec& spec) {
    spec.validate();
    if (spec.n_values.empty()) throw std::invalid_argument("uniform_bound_study: n_values empty");
    StudyResult res;
    detail::echo_spec(res, spec);
    for (int n : spec.n_values) {
        const SpectralField init = project(spec.initial, n);
        const GalerkinConfig cfg = detail::level_config(spec, n, sobolev_norm2(spec.initial, spec.cfg.ladder.m_H));
        auto slots = detail::per_sample(spec.sample_count, spec.threads, [&](int s) -> std::vector<double> {
            BrownianPath path(spec.seed, static_cast<std::uint64_t>(s), cfg.dt,
                              spec.bundle->noise->truncation());
            const TrajectoryRecord rec = run(init, cfg, *spec.bundle, path);
            const bool bad = rec.cause == StopCause::NonFinite;
            const double hv = bad ? std::numeric_limits<double>::quiet_NaN()
                                  : detail::hv_functional(rec, rec.tau);
            return {hv, bad ? 1.0 : 0.0};
        });
        auto row = detail::column_stat("hv_expectation", n, slots, 0);
        res.rows.push_back(row);
        const double denom = sobolev_norm2(init, spec.cfg.ladder.m_H) + 1.0;
        res.rows.push_back({"hv_ratio", static_cast<double>(n), row.mean / denom, row.std_error / denom,
                            row.count});
        res.rows.push_back(detail::column_stat("nonfinite_fraction", n, slots, 1));
    }
    return res;
}

// E ||Psi^n - Psi^m||^2_{UH, tau_m ^ tau_n} for consecutive cutoff pairs
// driven by coupled noise, with the spectral-gap predictor
// lambda_m^{-1/2} + ||(I-P_m) Psi_0||^2_U per pair.
inline StudyResult cauchy_decay_study(const StudySpec& spec) {
    spec.validate();
    if (spec.n_values.size() < 3) throw std::invalid_argument("cauchy_decay_study: need >= 3 cutoffs");
    StudyResult res;
    detail::echo_spec(res, spec);
    const auto& basis = spec.bundle->noise->basis();
    const double initH2 = sobolev_norm2(spec.initial, spec.cfg.ladder.m_H);
    const std::size_t pairs = spec.n_values.size() - 1;
    auto slots = detail::per_sample(spec.sample_count, spec.threads, [&](int s) -> std::vector<double> {
        std::vector<TrajectoryRecord> recs;
        for (int n : spec.n_values) {
            const GalerkinConfig cfg = detail::level_config(spec, n, initH2);
            BrownianPath path(spec.seed, static_cast<std::uint64_t>(s), cfg.dt,
                              spec.bundle->noise->truncation());
            recs.push_back(run(project(spec.initial, n), cfg, *spec.bundle, path));
        }
        std::vector<double> out;
        for (std::size_t i = 0; i + 1 < recs.size(); ++i) {
            if (recs[i].cause == StopCause::NonFinite || recs[i + 1].cause == StopCause::NonFinite) {
                out.push_back(std::numeric_limits<double>::quiet_NaN());
                continue;
            }
            const double stop = std::min(recs[i].tau, recs[i + 1].tau);
            out.push_back(detail::uh_diff_functional(recs[i], recs[i + 1], stop, spec.cfg.ladder));
        }
        return out;
    });
    std::vector<double> logx, logy;
    for (std::size_t i = 0; i < pairs; ++i) {
        const int m = spec.n_values[i];
        auto row = detail::column_stat("uh_gap", m, slots, i);
        res.rows.push_back(row);
        const double tail =
            sobolev_norm2(spec.initial - project(spec.initial, m), spec.cfg.ladder.m_U);
        const double predictor = 1.0 / std::sqrt(basis->eigenvalue(std::min(m, basis->count()) - 1)) + tail;
        res.rows.push_back({"predictor", static_cast<double>(m), predictor, 0.0, row.count});
        if (row.mean > 0.0 && predictor > 0.0) {
            logx.push_back(std::log(predictor));
            logy.push_back(std::log(row.mean));
        }
    }
    if (logx.size() >= 2) {
        const auto [a, b] = detail::fit_affine(logx, logy);
        res.rows.push_back({"log_fit_intercept", 0.0, a, 0.0, static_cast<int>(logx.size())});
        res.rows.push_back({"log_fit_slope", 0.0, b, 0.0, static_cast<int>(logx.size())});
    }
    return res;
}

// P( ||Psi^n||^2_{UH, tau ^ S} >= M - 1 + ||Psi_0^n||^2_U ) per S, with an
// a + b sqrt(S) least-squares fit across the S sweep.
inline StudyResult small_time_hitting_study(const StudySpec& spec, const std::vector<double>& S_values) {
    spec.validate();
    if (S_values.empty()) throw std::invalid_argument("small_time_hitting_study: S_values empty");
    for (double S : S_values)
        if (!(S > 0.0 && S <= spec.cfg.horizon_t + 1e-12))
            throw std::invalid_argument("small_time_hitting_study: S outside (0, horizon]");
    StudyResult res;
    detail::echo_spec(res, spec);
    const int n = spec.cfg.cutoff_n;
    const SpectralField init = project(spec.initial, n);
    const GalerkinConfig cfg = detail::level_config(spec, n, sobolev_norm2(init, spec.cfg.ladder.m_H));
    const double level = spec.cfg.M - 1.0 + sobolev_norm2(init, spec.cfg.ladder.m_U);
    auto slots = detail::per_sample(spec.sample_count, spec.threads, [&](int s) -> std::vector<double> {
        BrownianPath path(spec.seed, static_cast<std::uint64_t>(s), cfg.dt,
                          spec.bundle->noise->truncation());
        const TrajectoryRecord rec = run(init, cfg, *spec.bundle, path);
        std::vector<double> out;
        for (double S : S_values) {
            const double uh = detail::uh_functional(rec, std::min(rec.tau, S));
            out.push_back(uh >= level ? 1.0 : 0.0);
        }
        return out;
    });
    std::vector<double> sq, prob;
    for (std::size_t i = 0; i < S_values.size(); ++i) {
        auto row = detail::column_stat("hit_probability", S_values[i], slots, i);
        res.rows.push_back(row);
        sq.push_back(std::sqrt(S_values[i]));
        prob.push_back(row.mean);
    }
    const auto [a, b] = detail::fit_affine(sq, prob);
    double max_resid = 0.0;
    for (std::size_t i = 0; i < sq.size(); ++i)
        max_resid = std::max(max_resid, std::abs(prob[i] - (a + b * sq[i])));
    res.rows.push_back({"fit_intercept", 0.0, a, 0.0, static_cast<int>(sq.size())});
    res.rows.push_back({"fit_sqrt_coeff", 0.0, b, 0.0, static_cast<int>(sq.size())});
    res.rows.push_back({"fit_max_residual", 0.0, max_resid, 0.0, static_cast<int>(sq.size())});
    return res;
}

// unit-U-norm direction used to perturb initial data in the uniqueness
// study; lives on the first retained mode and respects the state shape
inline SpectralField perturbation_direction(const OperatorBundle& bundle, const ModeSetPtr& basis) {
    SpectralField e(basis);
    if (bundle.form == EquationForm::Vorticity && basis->dim() == 2) {
        e.coeff(0) = Coeff{Complex{}, Complex{}, Complex(1.0, 0.0)};
    } else {
        e.coeff(0) = Coeff{Complex(1.0, 0.0), Complex(1.0, 0.0), Complex{}};
        e = leray_project(e);
    }
    const double u = sobolev_norm(e, bundle.ladder.m_U);
    e *= 1.0 / u;
    return e;
}

// Coupled runs from Psi_0 and Psi_0 + delta e. delta = 0 asserts exact
// bitwise agreement; delta > 0 reports E||diff||^2_{UH, tau^tau'}/delta^2.
inline StudyResult uniqueness_study(const StudySpec& spec, const std::vector<double>& deltas) {
    spec.validate();
    StudyResult res;
    detail::echo_spec(res, spec);
    const int n = spec.cfg.cutoff_n;
    const auto& basis = spec.bundle->noise->basis();
    const SpectralField init = project(spec.initial, n);
    const SpectralField dir = perturbation_direction(*spec.bundle, basis);
    const GalerkinConfig cfg = detail::level_config(spec, n, sobolev_norm2(init, spec.cfg.ladder.m_H) + 1.0);
    for (double delta : deltas) {
        const SpectralField init2 = init + delta * dir;
        auto slots = detail::per_sample(spec.sample_count, spec.threads, [&](int s) -> std::vector<double> {
            BrownianPath path(spec.seed, static_cast<std::uint64_t>(s), cfg.dt,
                              spec.bundle->noise->truncation());
            const TrajectoryRecord r1 = run(init, cfg, *spec.bundle, path);
            const TrajectoryRecord r2 = run(init2, cfg, *spec.bundle, path);
            if (r1.cause == StopCause::NonFinite || r2.cause == StopCause::NonFinite)
                return {std::numeric_limits<double>::quiet_NaN(), 0.0};
            const double stop = std::min(r1.tau, r2.tau);
            const double gap = detail::uh_diff_functional(r1, r2, stop, spec.cfg.ladder);
            double identical = 1.0;
            for (std::size_t k = 0; k < r1.states.size(); ++k)
                if (!(r1.states[k] == r2.states[k])) {
                    identical = 0.0;
                    break;
                }
            return {gap, identical};
        });
        if (delta == 0.0) {
            res.rows.push_back(detail::column_stat("bit_identical", delta, slots, 1));
            res.rows.push_back(detail::column_stat("uh_gap", delta, slots, 0));
        } else {
            auto row = detail::column_stat("uh_gap", delta, slots, 0);
            res.rows.push_back(row);
            res.rows.push_back({"gronwall_ratio", delta, row.mean / (delta * delta),
                                row.std_error / (delta * delta), row.count});
        }
    }
    return res;
}

// deterministic slowly decaying profile with finite U-norm but H-norm
// spread across the whole spectrum: coeff magnitude lambda^{-(m_U/2+1/4)}
inline SpectralField slow_decay_initial(const OperatorBundle& bundle, const ModeSetPtr& basis,
                                        double amplitude = 1.0) {
    SpectralField f(basis);
    const bool scalar = bundle.form == EquationForm::Vorticity && basis->dim() == 2;
    const double expo = -(0.5 * bundle.ladder.m_U + 0.25);
    for (int j = 0; j < basis->count(); ++j) {
        const double mag = amplitude * std::pow(basis->eigenvalue(j), expo);
        // deterministic quarter-turn phases so no component cancels
        const Complex z = mag * std::polar(1.0, 0.25 * std::numbers::pi * (j % 8));
        Coeff c{};
        if (scalar)
            c[2] = z;
        else {
            c[0] = z;
            c[1] = Complex(-z.imag(), z.real());
        }
        f.coeff(j) = c;
    }
    return scalar ? f : leray_project(f);
}

// Coupled runs of the *same* dynamics (fixed internal cutoff cfg.cutoff_n)
// from successively refined initial data P_n Psi_0; reports the UH gap
// between consecutive initial-data levels and the initial tail sizes.
inline StudyResult rough_data_study(const StudySpec& spec) {
    spec.validate();
    if (spec.n_values.size() < 2) throw std::invalid_argument("rough_data_study: need >= 2 levels");
    StudyResult res;
    detail::echo_spec(res, spec);
    const GalerkinConfig cfg =
        detail::level_config(spec, spec.cfg.cutoff_n, sobolev_norm2(spec.initial, spec.cfg.ladder.m_H));
    auto slots = detail::per_sample(spec.sample_count, spec.threads, [&](int s) -> std::vector<double> {
        std::vector<TrajectoryRecord> recs;
        for (int n : spec.n_values) {
            BrownianPath path(spec.seed, static_cast<std::uint64_t>(s), cfg.dt,
                              spec.bundle->noise->truncation());
            recs.push_back(run(project(spec.initial, n), cfg, *spec.bundle, path));
        }
        std::vector<double> out;
        for (std::size_t i = 0; i + 1 < recs.size(); ++i) {
            if (recs[i].cause == StopCause::NonFinite || recs[i + 1].cause == StopCause::NonFinite) {
                out.push_back(std::numeric_limits<double>::quiet_NaN());
                continue;
            }
            const double stop = std::min(recs[i].tau, recs[i + 1].tau);
            out.push_back(detail::uh_diff_functional(recs[i], recs[i + 1], stop, spec.cfg.ladder));
        }
        return out;
    });
    for (std::size_t i = 0; i + 1 < spec.n_values.size(); ++i) {
        const int m = spec.n_values[i];
        res.rows.push_back(detail::column_stat("uh_gap", m, slots, i));
        res.rows.push_back({"initial_tail_U2", static_cast<double>(m),
                            sobolev_norm2(spec.initial - project(spec.initial, m), spec.cfg.ladder.m_U),
                            0.0, spec.sample_count});
    }
    return res;
}

// Termination-cause census with terminal HV values.
inline StudyResult blowup_watch(const StudySpec& spec) {
    spec.validate();
    StudyResult res;
    detail::echo_spec(res, spec);
    const int n = spec.cfg.cutoff_n;
    const SpectralField init = project(spec.initial, n);
    const GalerkinConfig cfg =
        spec.auto_radius ? detail::level_config(spec, n, sobolev_norm2(init, spec.cfg.ladder.m_H))
                         : spec.cfg;
    auto slots = detail::per_sample(spec.sample_count, spec.threads, [&](int s) -> std::vector<double> {
        BrownianPath path(spec.seed, static_cast<std::uint64_t>(s), cfg.dt,
                          spec.bundle->noise->truncation());
        const TrajectoryRecord rec = run(init, cfg, *spec.bundle, path);
        const double hv = rec.cause == StopCause::NonFinite ? std::numeric_limits<double>::quiet_NaN()
                                                            : detail::hv_functional(rec, rec.tau);
        return {rec.cause == StopCause::Horizon ? 1.0 : 0.0, rec.cause == StopCause::UHHit ? 1.0 : 0.0,
                rec.cause == StopCause::NonFinite ? 1.0 : 0.0, hv, rec.tau};
    });
    res.rows.push_back(detail::column_stat("fraction_horizon", 0.0, slots, 0));
    res.rows.push_back(detail::column_stat("fraction_uhhit", 0.0, slots, 1));
    res.rows.push_back(detail::column_stat("fraction_nonfinite", 0.0, slots, 2));
    res.rows.push_back(detail::column_stat("terminal_hv", 0.0, slots, 3));
    res.rows.push_back(detail::column_stat("tau", 0.0, slots, 4));
    return res;
}

inline StudyResult run_study(const StudySpec& spec) {
    switch (spec.study) {
        case StudyKind::UniformBound: return uniform_bound_study(spec);
        case StudyKind::CauchyDecay: return cauchy_decay_study(spec);
        case StudyKind::SmallTimeHitting: return small_time_hitting_study(spec, spec.S_values);
        case StudyKind::PathwiseUniqueness:
        case StudyKind::GronwallWitness: return uniqueness_study(spec, spec.deltas);
        case StudyKind::RoughDataConvergence: return rough_data_study(spec);
        default: return blowup_watch(spec);
    }
}

inline void write_study_csv(std::ostream& os, const StudyResult& res) {
    os << "statistic,parameter,mean,std_error,count\n";
    for (const auto& r : res.rows) {
        os << r.statistic << ',';
        csv_row(os, r.parameter, r.mean, r.std_error, r.count);
    }
}

inline void write_study_metadata(std::ostream& os, const StudyResult& res) {
    for (const auto& line : res.metadata) os << line << '\n';
}

}  // namespace saltns
