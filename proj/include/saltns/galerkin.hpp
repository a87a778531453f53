#pragma once

#include <ostream>

#include "csv.hpp"
#include "fluid_ops.hpp"

namespace saltns {

enum class Scheme { EulerMaruyamaIto, HeunStratonovich };

struct GalerkinConfig {
    int cutoff_n = 4;        // retained eigenmodes, canonical order
    double R = 1.0;          // truncation radius, H-norm^2 units
    double M = 2.0;          // hitting threshold, > 1
    double horizon_t = 1.0;  // final time
    double dt = 1e-3;
    SobolevLadder ladder = SobolevLadder::velocity();
    Scheme scheme = Scheme::EulerMaruyamaIto;

    void validate() const {
        ladder.validate();
        if (cutoff_n < 1) throw std::invalid_argument("GalerkinConfig: cutoff_n must be >= 1");
        if (!(M > 1.0)) throw std::invalid_argument("GalerkinConfig: M must be > 1");
        if (!(dt > 0.0)) throw std::invalid_argument("GalerkinConfig: dt must be > 0");
        if (!(horizon_t >= dt)) throw std::invalid_argument("GalerkinConfig: horizon_t must be >= dt");
        if (!(R > 0.0)) throw std::invalid_argument("GalerkinConfig: R must be > 0");
    }
};

enum class StopCause { Horizon, UHHit, NonFinite };

inline const char* to_string(StopCause c) {
    switch (c) {
        case StopCause::Horizon: return "Horizon";
        case StopCause::UHHit: return "UHHit";
        default: return "NonFinite";
    }
}

// Full record of one integration: states and norm functionals per grid
// time; states past tau are frozen copies of the state at tau.
struct TrajectoryRecord {
    std::vector<double> times;
    std::vector<SpectralField> states;
    std::vector<double> norm_U2, norm_H2, norm_V2;
    std::vector<double> uh_running;  // sup ||.||^2_U + int ||.||^2_H so far
    std::vector<double> hv_running;  // sup ||.||^2_H + int ||.||^2_V so far
    std::vector<double> fR_value;    // cutoff factor at the recorded state
    double tau = 0.0;
    StopCause cause = StopCause::Horizon;
    double initial_U2 = 0.0;
    double max_step_increment = 0.0;  // largest single-step jump of uh_running

    std::size_t tau_index() const {
        for (std::size_t k = 0; k < times.size(); ++k)
            if (times[k] >= tau) return k;
        return times.empty() ? 0 : times.size() - 1;
    }
};

// 1 on [0,R], 0 on [2R,inf), symmetric quintic smoothstep between
// (value 1/2 at 3R/2).
inline double cutoff_fR(double x, double R) {
    if (!(R > 0.0)) throw std::invalid_argument("cutoff_fR: R must be > 0");
    const double s = (x - R) / R;
    if (s <= 0.0) return 1.0;
    if (s >= 1.0) return 0.0;
    return 1.0 - s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
}

namespace detail {

// increment of the truncated equation at one state for one (dt, dW):
// fR(||s||^2_H) [ P_n drift(s) dt - sum_i P_n G_i(s) dW_i ]
// `ito` selects the converted drift (with the +1/2 sum G^2 term) or the
// plain transport+dissipation drift for the Stratonovich scheme.
inline SpectralField galerkin_increment(const SpectralField& s, const GalerkinConfig& cfg,
                                        const OperatorBundle& bundle, const std::vector<double>& dW,
                                        double dt, bool ito) {
    const StateGrids sg = state_grids(s);
    const double fr = cutoff_fR(sobolev_norm2(s, cfg.ladder.m_H), cfg.R);
    SpectralField inc(s.basis());
    if (fr == 0.0) return inc;
    SpectralField d = ito ? bundle.drift(s, sg) : bundle.stratonovich_drift(s, sg);
    inc += dt * d;
    for (int i = 0; i < bundle.noise->truncation(); ++i) {
        if (dW[static_cast<std::size_t>(i)] == 0.0) continue;
        inc -= dW[static_cast<std::size_t>(i)] * bundle.noise_apply(i, s, sg);
    }
    inc *= fr;
    return project(inc, cfg.cutoff_n);
}

}  // namespace detail

// One time step of the truncated Galerkin system. `dW` carries one
// increment per noise index.
inline SpectralField step(const SpectralField& state, const GalerkinConfig& cfg,
                          const OperatorBundle& bundle, const std::vector<double>& dW, double dt) {
    if (cfg.scheme == Scheme::EulerMaruyamaIto)
        return state + detail::galerkin_increment(state, cfg, bundle, dW, dt, true);
    // Heun on the Stratonovich form: trapezoidal average of the increment
    // at the current state and at the Euler predictor
    const SpectralField inc0 = detail::galerkin_increment(state, cfg, bundle, dW, dt, false);
    const SpectralField pred = state + inc0;
    if (!pred.is_finite()) return pred;
    const SpectralField inc1 = detail::galerkin_increment(pred, cfg, bundle, dW, dt, false);
    return state + 0.5 * (inc0 + inc1);
}

// Integrate until the UH functional crosses M + ||initial||^2_U, the
// horizon, or a non-finite state. Time integrals are left Riemann sums.
inline TrajectoryRecord run(const SpectralField& initial, const GalerkinConfig& cfg,
                            const OperatorBundle& bundle, const BrownianPath& path) {
    cfg.validate();
    if (!supported_on_first(initial, cfg.cutoff_n))
        throw std::invalid_argument("run: initial state not supported on the first cutoff_n modes");

    TrajectoryRecord rec;
    const double mU = cfg.ladder.m_U, mH = cfg.ladder.m_H, mV = cfg.ladder.m_V;
    rec.initial_U2 = sobolev_norm2(initial, mU);
    const double threshold = cfg.M + rec.initial_U2;
    const auto steps = static_cast<std::size_t>(std::llround(cfg.horizon_t / cfg.dt));

    SpectralField state = initial;
    double supU = rec.initial_U2, intH = 0.0;
    double supH = sobolev_norm2(initial, mH), intV = 0.0;

    auto record = [&](double t, const SpectralField& s) {
        rec.times.push_back(t);
        rec.states.push_back(s);
        rec.norm_U2.push_back(sobolev_norm2(s, mU));
        rec.norm_H2.push_back(sobolev_norm2(s, mH));
        rec.norm_V2.push_back(sobolev_norm2(s, mV));
        rec.uh_running.push_back(supU + intH);
        rec.hv_running.push_back(supH + intV);
        rec.fR_value.push_back(cutoff_fR(rec.norm_H2.back(), cfg.R));
    };
    record(0.0, state);

    bool stopped = false;
    rec.tau = cfg.horizon_t;
    rec.cause = StopCause::Horizon;
    if (rec.uh_running.back() >= threshold) {
        stopped = true;
        rec.tau = 0.0;
        rec.cause = StopCause::UHHit;
    }

    for (std::size_t k = 1; k <= steps; ++k) {
        const double t = static_cast<double>(k) * cfg.dt;
        // left Riemann contribution of the interval just traversed
        intH += sobolev_norm2(state, mH) * cfg.dt;
        intV += sobolev_norm2(state, mV) * cfg.dt;
        if (!stopped) {
            const std::vector<double> dW = path.sample_increments(k - 1);
            SpectralField next = step(state, cfg, bundle, dW, cfg.dt);
            if (!next.is_finite()) {
                // freeze at the last finite state
                stopped = true;
                rec.tau = rec.times.back();
                rec.cause = StopCause::NonFinite;
            } else {
                state = next;
            }
        }
        const double prev_uh = rec.uh_running.back();
        supU = std::max(supU, sobolev_norm2(state, mU));
        supH = std::max(supH, sobolev_norm2(state, mH));
        record(t, state);
        rec.max_step_increment = std::max(rec.max_step_increment, rec.uh_running.back() - prev_uh);
        if (!stopped && rec.uh_running.back() >= threshold) {
            stopped = true;
            rec.tau = t;
            rec.cause = StopCause::UHHit;
        }
    }
    return rec;
}

// Truncation radius large enough that f_R never binds before the UH
// hitting time: R must exceed the initial H-norm^2 bound and the largest
// H-norm^2 compatible with the hitting threshold, bridged through the
// norm equivalence ||.||^2_H <= lambda_n^{m_H-m_U} ||.||^2_U on the span
// of the first n modes.
inline double auto_R(const GalerkinConfig& cfg, double initial_bound, const ModeSetPtr& basis,
                     double safety = 1.05) {
    if (initial_bound < 0.0) throw std::invalid_argument("auto_R: initial_bound must be >= 0");
    const double lam_n = basis->eigenvalue(std::min(cfg.cutoff_n, basis->count()) - 1);
    const double gap = std::pow(lam_n, cfg.ladder.m_H - cfg.ladder.m_U);
    // eigenvalues >= 1 on the torus, so the U bound M + initial_U2 is
    // itself bounded by M + initial_bound
    const double h_cap = gap * (cfg.M + initial_bound);
    return safety * std::max(initial_bound, h_cap);
}

inline void write_trajectory_csv(std::ostream& os, const TrajectoryRecord& rec) {
    os << "time,norm_U2,norm_H2,norm_V2,uh_running,hv_running,fR_value\n";
    for (std::size_t k = 0; k < rec.times.size(); ++k)
        csv_row(os, rec.times[k], rec.norm_U2[k], rec.norm_H2[k], rec.norm_V2[k], rec.uh_running[k],
                rec.hv_running[k], rec.fR_value[k]);
}

}  // namespace saltns
