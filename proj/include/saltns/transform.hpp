#pragma once

#include <numbers>
#include <vector>

#include "spectral_field.hpp"

namespace saltns {

// Real-space samples of one scalar component on the uniform grid of a
// ModeSet (or a caller-supplied resolution for the public grid_transform).
using ScalarGrid = std::vector<double>;

struct VectorGrid {
    int res = 0;
    std::array<ScalarGrid, 3> comp;
};

namespace detail {

// spectral coefficients -> samples on the ModeSet's own grid, using the
// precomputed phase table
inline void to_grid_scalar(const ModeSet& ms, const std::vector<Coeff>& coeffs, int component,
                           ScalarGrid& out) {
    const int P = ms.grid_points();
    out.assign(static_cast<std::size_t>(P), 0.0);
    for (int j = 0; j < ms.count(); ++j) {
        const Complex c = coeffs[static_cast<std::size_t>(j)][static_cast<std::size_t>(component)];
        if (c == Complex{}) continue;
        for (int p = 0; p < P; ++p) {
            const Complex& e = ms.phase(j, p);
            out[static_cast<std::size_t>(p)] += 2.0 * (c.real() * e.real() - c.imag() * e.imag());
        }
    }
}

inline void from_grid_scalar(const ModeSet& ms, const ScalarGrid& g, int component,
                             std::vector<Coeff>& coeffs) {
    const int P = ms.grid_points();
    const double inv = 1.0 / P;
    for (int j = 0; j < ms.count(); ++j) {
        double re = 0.0, im = 0.0;
        for (int p = 0; p < P; ++p) {
            const Complex& e = ms.phase(j, p);
            const double v = g[static_cast<std::size_t>(p)];
            re += v * e.real();
            im -= v * e.imag();
        }
        coeffs[static_cast<std::size_t>(j)][static_cast<std::size_t>(component)] = Complex(re * inv, im * inv);
    }
}

}  // namespace detail

// All vector components on the internal alias-safe grid.
inline VectorGrid to_grid(const SpectralField& f) {
    const auto& ms = *f.basis();
    VectorGrid g;
    g.res = ms.grid_resolution();
    for (int m = 0; m < 3; ++m) detail::to_grid_scalar(ms, f.coeffs(), m, g.comp[static_cast<std::size_t>(m)]);
    return g;
}

inline SpectralField from_grid(const ModeSetPtr& basis, const VectorGrid& g) {
    SpectralField f(basis);
    std::vector<Coeff> coeffs(static_cast<std::size_t>(basis->count()));
    for (int m = 0; m < 3; ++m) detail::from_grid_scalar(*basis, g.comp[static_cast<std::size_t>(m)], m, coeffs);
    for (int j = 0; j < basis->count(); ++j) f.coeff(j) = coeffs[static_cast<std::size_t>(j)];
    return f;
}

// df/dx_axis, spectrally: c -> i k_axis c
inline SpectralField partial_derivative(const SpectralField& f, int axis) {
    SpectralField out = f;
    const auto& ms = *f.basis();
    const Complex i(0.0, 1.0);
    for (int j = 0; j < ms.count(); ++j) {
        const Complex ik = i * double(ms.mode(j)[axis]);
        Coeff& c = out.coeff(j);
        for (int m = 0; m < 3; ++m) c[static_cast<std::size_t>(m)] *= ik;
    }
    return out;
}

// grad[a] = samples of d(f)/dx_a (each entry a full vector grid)
inline std::array<VectorGrid, 3> gradient_to_grid(const SpectralField& f) {
    std::array<VectorGrid, 3> g;
    for (int a = 0; a < f.dim(); ++a) g[static_cast<std::size_t>(a)] = to_grid(partial_derivative(f, a));
    return g;
}

// --- public grid_transform with a caller-chosen resolution -----------------
//
// Round trip inverse(forward) is the identity whenever the resolution
// resolves every retained frequency (res >= 2*kmax+1); below that the
// sampling aliases and we refuse.

struct AliasingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline void check_resolution(const ModeSet& ms, int res) {
    if (res < 2 * ms.max_abs_component() + 1)
        throw AliasingError("grid_transform: resolution " + std::to_string(res) +
                            " aliases modes with |k| up to " + std::to_string(ms.max_abs_component()) +
                            " (need >= " + std::to_string(2 * ms.max_abs_component() + 1) + ")");
}

inline VectorGrid grid_transform(const SpectralField& f, int res) {
    const auto& ms = *f.basis();
    check_resolution(ms, res);
    VectorGrid g;
    g.res = res;
    int P = 1;
    for (int a = 0; a < ms.dim(); ++a) P *= res;
    const double h = 2.0 * std::numbers::pi / res;
    for (int m = 0; m < 3; ++m) g.comp[static_cast<std::size_t>(m)].assign(static_cast<std::size_t>(P), 0.0);
    for (int j = 0; j < ms.count(); ++j) {
        const WaveVector& k = ms.mode(j);
        const Coeff& c = f.coeff(j);
        for (int p = 0; p < P; ++p) {
            int q = p;
            double arg = 0.0;
            for (int a = ms.dim() - 1; a >= 0; --a) {
                arg += k[a] * h * (q % res);
                q /= res;
            }
            const double cr = std::cos(arg), si = std::sin(arg);
            for (int m = 0; m < 3; ++m) {
                const Complex& z = c[static_cast<std::size_t>(m)];
                g.comp[static_cast<std::size_t>(m)][static_cast<std::size_t>(p)] +=
                    2.0 * (z.real() * cr - z.imag() * si);
            }
        }
    }
    return g;
}

inline SpectralField grid_transform_inverse(const ModeSetPtr& basis, const VectorGrid& g) {
    const auto& ms = *basis;
    check_resolution(ms, g.res);
    const int res = g.res;
    int P = 1;
    for (int a = 0; a < ms.dim(); ++a) P *= res;
    const double h = 2.0 * std::numbers::pi / res;
    SpectralField f(basis);
    for (int j = 0; j < ms.count(); ++j) {
        const WaveVector& k = ms.mode(j);
        Coeff c{};
        for (int p = 0; p < P; ++p) {
            int q = p;
            double arg = 0.0;
            for (int a = ms.dim() - 1; a >= 0; --a) {
                arg += k[a] * h * (q % res);
                q /= res;
            }
            const double cr = std::cos(arg), si = std::sin(arg);
            for (int m = 0; m < 3; ++m) {
                const double v = g.comp[static_cast<std::size_t>(m)][static_cast<std::size_t>(p)];
                c[static_cast<std::size_t>(m)] += Complex(v * cr, -v * si);
            }
        }
        f.coeff(j) = (1.0 / P) * c;
    }
    return f;
}

}  // namespace saltns
