#pragma once

#include "noise_model.hpp"

namespace saltns {

// Value and gradient samples of one state, computed once per drift
// evaluation and shared across every operator application.
struct StateGrids {
    VectorGrid value;
    std::array<VectorGrid, 3> grad;
};

inline StateGrids state_grids(const SpectralField& f) {
    return StateGrids{to_grid(f), gradient_to_grid(f)};
}

namespace detail {

// (a . grad) b pointwise: out_m = sum_j a_j (d_j b)_m
inline VectorGrid advect_grids(const VectorGrid& a, const std::array<VectorGrid, 3>& b_grad, int d) {
    VectorGrid out;
    out.res = a.res;
    const std::size_t P = a.comp[0].size();
    for (int m = 0; m < 3; ++m) out.comp[static_cast<std::size_t>(m)].assign(P, 0.0);
    for (int j = 0; j < d; ++j) {
        const ScalarGrid& aj = a.comp[static_cast<std::size_t>(j)];
        for (int m = 0; m < 3; ++m) {
            const ScalarGrid& g = b_grad[static_cast<std::size_t>(j)].comp[static_cast<std::size_t>(m)];
            ScalarGrid& o = out.comp[static_cast<std::size_t>(m)];
            for (std::size_t p = 0; p < P; ++p) o[p] += aj[p] * g[p];
        }
    }
    return out;
}

// sum_j psi_j grad(phi_j) pointwise: out_l = sum_j psi_j (d_l phi)_j
inline VectorGrid stretch_grids(const VectorGrid& psi, const std::array<VectorGrid, 3>& phi_grad, int d) {
    VectorGrid out;
    out.res = psi.comp[0].empty() ? 0 : psi.res;
    const std::size_t P = psi.comp[0].size();
    for (int m = 0; m < 3; ++m) out.comp[static_cast<std::size_t>(m)].assign(P, 0.0);
    for (int l = 0; l < d; ++l) {
        ScalarGrid& o = out.comp[static_cast<std::size_t>(l)];
        for (int j = 0; j < d; ++j) {
            const ScalarGrid& pj = psi.comp[static_cast<std::size_t>(j)];
            const ScalarGrid& g = phi_grad[static_cast<std::size_t>(l)].comp[static_cast<std::size_t>(j)];
            for (std::size_t p = 0; p < P; ++p) o[p] += pj[p] * g[p];
        }
    }
    return out;
}

}  // namespace detail

// (a . grad) b on the alias-safe grid of the common basis.
inline SpectralField advect(const SpectralField& a, const SpectralField& b) {
    if (!a.same_grid(b)) throw std::invalid_argument("advect: grid mismatch");
    return from_grid(a.basis(), detail::advect_grids(to_grid(a), gradient_to_grid(b), a.dim()));
}

// sum_j psi^j grad(phi^j), the stretching companion of advection.
inline SpectralField stretch(const SpectralField& phi, const SpectralField& psi) {
    if (!phi.same_grid(psi)) throw std::invalid_argument("stretch: grid mismatch");
    return from_grid(phi.basis(), detail::stretch_grids(to_grid(psi), gradient_to_grid(phi), phi.dim()));
}

// antisymmetrised advection (phi . grad) psi - (psi . grad) phi
inline SpectralField advect_bracket(const SpectralField& phi, const SpectralField& psi) {
    return advect(phi, psi) - advect(psi, phi);
}

enum class EquationForm { Velocity, Vorticity };

// How the squared noise operator in the Ito-form drift composes with the
// divergence-free projection: project after every application, or only
// after the full square.
enum class NoiseComposition { ProjectEach, ProjectFinal };

// The right-hand side of the fluid SPDE in both forms.
//
// Velocity:  du = [-P (u.grad)u - nu A u + 1/2 sum_i G_i^2 u] dt - G_i u dW^i
//            with G_i u = P[(xi_i.grad)u + sum_j u^j grad xi_i^j]
// Vorticity: dw = [-L(u,w) + nu Lap w + 1/2 sum_i L_i^2 w] dt - L_i w dW^i
//            with u = biot_savart(w), L(a,b) the antisymmetrised advection
//            and L_i w = L(xi_i, w).
struct OperatorBundle {
    EquationForm form = EquationForm::Velocity;
    SobolevLadder ladder = SobolevLadder::velocity();
    double viscosity = 1.0;
    const NoiseModel* noise = nullptr;
    bool include_advection = true;
    NoiseComposition composition = NoiseComposition::ProjectEach;

    static OperatorBundle velocity(const NoiseModel& nm, double nu = 1.0) {
        return OperatorBundle{EquationForm::Velocity, SobolevLadder::velocity(), nu, &nm, true,
                              NoiseComposition::ProjectEach};
    }
    static OperatorBundle vorticity(const NoiseModel& nm, double nu = 1.0) {
        return OperatorBundle{EquationForm::Vorticity, SobolevLadder::vorticity(), nu, &nm, true,
                              NoiseComposition::ProjectEach};
    }

    SpectralField velocity_of(const SpectralField& f) const {
        return form == EquationForm::Velocity ? f : biot_savart(f);
    }

    // B_i f before any projection
    SpectralField raw_noise(int i, const SpectralField& f, const StateGrids& sg) const {
        const auto& basis = f.basis();
        const int d = f.dim();
        const XiGrids& xg = noise->grids(i);
        if (form == EquationForm::Velocity) {
            VectorGrid out = detail::advect_grids(xg.value, sg.grad, d);
            const VectorGrid st = detail::stretch_grids(sg.value, xg.grad, d);
            const std::size_t P = out.comp[0].size();
            for (int m = 0; m < 3; ++m)
                for (std::size_t p = 0; p < P; ++p)
                    out.comp[static_cast<std::size_t>(m)][p] += st.comp[static_cast<std::size_t>(m)][p];
            return from_grid(basis, out);
        }
        // vorticity: L(xi_i, f) = (xi_i.grad)f - (f.grad)xi_i
        VectorGrid out = detail::advect_grids(xg.value, sg.grad, d);
        const VectorGrid back = detail::advect_grids(sg.value, xg.grad, d);
        const std::size_t P = out.comp[0].size();
        for (int m = 0; m < 3; ++m)
            for (std::size_t p = 0; p < P; ++p)
                out.comp[static_cast<std::size_t>(m)][p] -= back.comp[static_cast<std::size_t>(m)][p];
        return from_grid(basis, out);
    }

    // the diffusion operator G_i as it multiplies dW^i
    SpectralField noise_apply(int i, const SpectralField& f, const StateGrids& sg) const {
        SpectralField b = raw_noise(i, f, sg);
        return form == EquationForm::Velocity ? leray_project(b) : b;
    }

    SpectralField noise_apply(int i, const SpectralField& f) const {
        return noise_apply(i, f, state_grids(f));
    }

    // 1/2 sum_i G_i(G_i f), the drift gained when the Stratonovich
    // transport noise is rewritten in Ito form
    SpectralField ito_correction(const SpectralField& f, const StateGrids& sg) const {
        SpectralField acc(f.basis());
        for (int i = 0; i < noise->truncation(); ++i) {
            SpectralField once = (form == EquationForm::Velocity && composition == NoiseComposition::ProjectEach)
                                     ? noise_apply(i, f, sg)
                                     : raw_noise(i, f, sg);
            SpectralField twice = raw_noise(i, once, state_grids(once));
            if (form == EquationForm::Velocity) twice = leray_project(twice);
            acc += twice;
        }
        acc *= 0.5;
        return acc;
    }

    SpectralField ito_correction(const SpectralField& f) const {
        return ito_correction(f, state_grids(f));
    }

    // drift of the Stratonovich form: nonlinear transport + dissipation
    SpectralField stratonovich_drift(const SpectralField& f, const StateGrids& sg) const {
        SpectralField out(f.basis());
        if (include_advection) {
            if (form == EquationForm::Velocity) {
                out -= leray_project(
                    from_grid(f.basis(), detail::advect_grids(sg.value, sg.grad, f.dim())));
            } else {
                const SpectralField u = biot_savart(f);
                const StateGrids ug = state_grids(u);
                VectorGrid fwd = detail::advect_grids(ug.value, sg.grad, f.dim());
                const VectorGrid back = detail::advect_grids(sg.value, ug.grad, f.dim());
                const std::size_t P = fwd.comp[0].size();
                for (int m = 0; m < 3; ++m)
                    for (std::size_t p = 0; p < P; ++p)
                        fwd.comp[static_cast<std::size_t>(m)][p] -= back.comp[static_cast<std::size_t>(m)][p];
                out -= from_grid(f.basis(), fwd);
            }
        }
        out -= viscosity * stokes_apply(f, 1.0);
        return out;
    }

    SpectralField stratonovich_drift(const SpectralField& f) const {
        return stratonovich_drift(f, state_grids(f));
    }

    // full Ito-form drift
    SpectralField drift(const SpectralField& f, const StateGrids& sg) const {
        SpectralField out = stratonovich_drift(f, sg);
        if (noise->truncation() > 0) out += ito_correction(f, sg);
        return out;
    }

    SpectralField drift(const SpectralField& f) const { return drift(f, state_grids(f)); }
};

}  // namespace saltns
