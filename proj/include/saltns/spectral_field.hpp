#pragma once

#include <cmath>
#include <stdexcept>

#include "mode_set.hpp"

namespace saltns {

using Coeff = std::array<Complex, 3>;

inline Coeff operator+(const Coeff& a, const Coeff& b) {
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}
inline Coeff operator-(const Coeff& a, const Coeff& b) {
    return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}
inline Coeff operator*(double s, const Coeff& a) { return {s * a[0], s * a[1], s * a[2]}; }

// Divergence-free vector field on the torus stored as complex coefficients
// on the canonical half-space of a ModeSet; coeff(-k) = conj(coeff(k)) is
// implied, so fields are real by construction. Convention:
//   f(x) = sum_j [ c_j e^{i k_j.x} + conj(c_j) e^{-i k_j.x} ]
// with the L^2 inner product normalised by (2*pi)^{-d}, so
// ||f||^2_{L^2} = 2 sum_j |c_j|^2.
class SpectralField {
public:
    SpectralField() = default;
    explicit SpectralField(ModeSetPtr basis)
        : basis_(std::move(basis)),
          coeffs_(static_cast<std::size_t>(basis_->count()), Coeff{}) {}

    const ModeSetPtr& basis() const { return basis_; }
    int dim() const { return basis_->dim(); }
    int mode_count() const { return basis_->count(); }

    const Coeff& coeff(int j) const { return coeffs_[static_cast<std::size_t>(j)]; }
    Coeff& coeff(int j) { return coeffs_[static_cast<std::size_t>(j)]; }
    const std::vector<Coeff>& coeffs() const { return coeffs_; }

    void set_mode(const WaveVector& k, const Coeff& c) {
        const int j = basis_->index_of(k.is_canonical() ? k : k.negated());
        if (j < 0) throw std::invalid_argument("SpectralField: wave vector outside basis");
        if (k.is_canonical())
            coeffs_[static_cast<std::size_t>(j)] = c;
        else
            coeffs_[static_cast<std::size_t>(j)] = {std::conj(c[0]), std::conj(c[1]), std::conj(c[2])};
    }

    bool same_grid(const SpectralField& other) const { return basis_ == other.basis_; }

    bool is_finite() const {
        for (const auto& c : coeffs_)
            for (const auto& z : c)
                if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
        return true;
    }

    SpectralField& operator+=(const SpectralField& o) {
        check(o);
        for (std::size_t j = 0; j < coeffs_.size(); ++j) coeffs_[j] = coeffs_[j] + o.coeffs_[j];
        return *this;
    }
    SpectralField& operator-=(const SpectralField& o) {
        check(o);
        for (std::size_t j = 0; j < coeffs_.size(); ++j) coeffs_[j] = coeffs_[j] - o.coeffs_[j];
        return *this;
    }
    SpectralField& operator*=(double s) {
        for (auto& c : coeffs_) c = s * c;
        return *this;
    }

    friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
    friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
    friend SpectralField operator*(double s, SpectralField a) { return a *= s; }

    bool operator==(const SpectralField& o) const {
        return basis_ == o.basis_ && coeffs_ == o.coeffs_;
    }

private:
    void check(const SpectralField& o) const {
        if (basis_ != o.basis_) throw std::invalid_argument("SpectralField: grid mismatch");
    }

    ModeSetPtr basis_;
    std::vector<Coeff> coeffs_;
};

// --- spectral_core operations ----------------------------------------------

// L^2-orthogonal projection onto divergence-free fields:
// c'(k) = c(k) - (c(k).khat) khat per mode.
inline SpectralField leray_project(const SpectralField& f) {
    SpectralField out = f;
    const auto& ms = *f.basis();
    for (int j = 0; j < ms.count(); ++j) {
        const WaveVector& k = ms.mode(j);
        const double n2 = static_cast<double>(k.norm2());
        Coeff& c = out.coeff(j);
        Complex dot = c[0] * double(k[0]) + c[1] * double(k[1]) + c[2] * double(k[2]);
        dot /= n2;
        for (int m = 0; m < 3; ++m) c[m] -= dot * double(k.k[static_cast<std::size_t>(m)]);
    }
    return out;
}

// Fractional power of the Stokes operator: c'(k) = lambda_k^power c(k).
inline SpectralField stokes_apply(const SpectralField& f, double power) {
    SpectralField out = f;
    const auto& ms = *f.basis();
    for (int j = 0; j < ms.count(); ++j) {
        const double s = std::pow(ms.eigenvalue(j), power);
        out.coeff(j) = s * out.coeff(j);
    }
    return out;
}

inline double sobolev_norm2(const SpectralField& f, double m) {
    const auto& ms = *f.basis();
    double acc = 0.0;
    for (int j = 0; j < ms.count(); ++j) {
        const Coeff& c = f.coeff(j);
        const double mag2 = std::norm(c[0]) + std::norm(c[1]) + std::norm(c[2]);
        acc += 2.0 * std::pow(ms.eigenvalue(j), m) * mag2;
    }
    return acc;
}

inline double sobolev_norm(const SpectralField& f, double m) { return std::sqrt(sobolev_norm2(f, m)); }

// <f,g>_m = <A^{m/2}f, A^{m/2}g>_{L^2}
inline double sobolev_inner(const SpectralField& f, const SpectralField& g, double m) {
    if (!f.same_grid(g)) throw std::invalid_argument("sobolev_inner: grid mismatch");
    const auto& ms = *f.basis();
    double acc = 0.0;
    for (int j = 0; j < ms.count(); ++j) {
        const Coeff& a = f.coeff(j);
        const Coeff& b = g.coeff(j);
        double re = 0.0;
        for (int c = 0; c < 3; ++c)
            re += a[static_cast<std::size_t>(c)].real() * b[static_cast<std::size_t>(c)].real() +
                  a[static_cast<std::size_t>(c)].imag() * b[static_cast<std::size_t>(c)].imag();
        acc += 2.0 * std::pow(ms.eigenvalue(j), m) * re;
    }
    return acc;
}

// The U x V duality pairing of the ladder. On finite-cutoff fields it is
// the spectral sum with weight lambda^{(m_U+m_V)/2}, which coincides with
// the H inner product because m_U + m_V = 2 m_H on both ladders.
inline double dual_pairing(const SpectralField& f, const SpectralField& g, const SobolevLadder& lad) {
    return sobolev_inner(f, g, 0.5 * (lad.m_U + lad.m_V));
}

// P_n: retain the first n modes of the canonical ordering.
inline SpectralField project(const SpectralField& f, int n) {
    if (n < 1) throw std::invalid_argument("project: n must be >= 1");
    SpectralField out = f;
    for (int j = n; j < f.mode_count(); ++j) out.coeff(j) = Coeff{};
    return out;
}

inline bool supported_on_first(const SpectralField& f, int n) {
    for (int j = n; j < f.mode_count(); ++j) {
        const Coeff& c = f.coeff(j);
        if (std::norm(c[0]) + std::norm(c[1]) + std::norm(c[2]) != 0.0) return false;
    }
    return true;
}

// max over stored modes of |k . c(k)| / |c(k)|; 0 for the zero field
inline double divergence_defect(const SpectralField& f) {
    const auto& ms = *f.basis();
    double worst = 0.0;
    for (int j = 0; j < ms.count(); ++j) {
        const WaveVector& k = ms.mode(j);
        const Coeff& c = f.coeff(j);
        const double mag = std::sqrt(std::norm(c[0]) + std::norm(c[1]) + std::norm(c[2]));
        if (mag == 0.0) continue;
        const Complex dot = c[0] * double(k[0]) + c[1] * double(k[1]) + c[2] * double(k[2]);
        worst = std::max(worst, std::abs(dot) / (mag * std::sqrt(double(k.norm2()))));
    }
    return worst;
}

// Spectral curl: (curl f)(k) = i k x c(k).
inline SpectralField curl(const SpectralField& f) {
    SpectralField out(f.basis());
    const auto& ms = *f.basis();
    for (int j = 0; j < ms.count(); ++j) {
        const WaveVector& k = ms.mode(j);
        const Coeff& c = f.coeff(j);
        const Complex i(0.0, 1.0);
        out.coeff(j) = {i * (double(k[1]) * c[2] - double(k[2]) * c[1]),
                        i * (double(k[2]) * c[0] - double(k[0]) * c[2]),
                        i * (double(k[0]) * c[1] - double(k[1]) * c[0])};
    }
    return out;
}

// Inverse of curl on zero-average divergence-free fields:
// u(k) = i k x w(k) / |k|^2.
inline SpectralField biot_savart(const SpectralField& w) {
    SpectralField out = curl(w);
    const auto& ms = *w.basis();
    for (int j = 0; j < ms.count(); ++j) out.coeff(j) = (1.0 / ms.eigenvalue(j)) * out.coeff(j);
    return out;
}

}  // namespace saltns
