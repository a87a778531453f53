#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "wave_vector.hpp"

namespace saltns {

using Complex = std::complex<double>;

// Sobolev exponents for the ladder V -> H -> U -> X. Velocity form uses
// (3,2,1,0), vorticity form (2,1,0) with X unused.
struct SobolevLadder {
    double m_V = 3.0;
    double m_H = 2.0;
    double m_U = 1.0;
    double m_X = 0.0;
    bool has_X = true;

    static SobolevLadder velocity() { return SobolevLadder{3.0, 2.0, 1.0, 0.0, true}; }
    static SobolevLadder vorticity() { return SobolevLadder{2.0, 1.0, 0.0, 0.0, false}; }

    void validate() const {
        if (!(m_V > m_H && m_H > m_U && m_U >= m_X && m_X >= 0.0))
            throw std::invalid_argument("SobolevLadder: exponents must satisfy m_V > m_H > m_U >= m_X >= 0");
    }
};

// The ordered spectral basis: the first `count` canonical wave vectors on
// the d-torus sorted by (|k|^2, lex). Eigenvalue of mode k is |k|^2 for
// the 2*pi-periodic torus. Also owns the sampling tables for the
// alias-safe pseudo-spectral grid (resolution >= 3*kmax+1 per axis so
// that quadratic products project back exactly).
class ModeSet {
public:
    static std::shared_ptr<const ModeSet> make(int dim, int count) {
        if (dim != 2 && dim != 3) throw std::invalid_argument("ModeSet: dim must be 2 or 3");
        if (count < 1) throw std::invalid_argument("ModeSet: count must be >= 1");
        return std::shared_ptr<const ModeSet>(new ModeSet(dim, count));
    }

    int dim() const { return dim_; }
    int count() const { return static_cast<int>(modes_.size()); }
    const std::vector<WaveVector>& modes() const { return modes_; }
    const WaveVector& mode(int j) const { return modes_[static_cast<std::size_t>(j)]; }
    double eigenvalue(int j) const { return lambda_[static_cast<std::size_t>(j)]; }
    const std::vector<double>& eigenvalues() const { return lambda_; }

    // index of a canonical wave vector, -1 if absent
    int index_of(const WaveVector& k) const {
        auto it = index_.find(k);
        return it == index_.end() ? -1 : it->second;
    }

    int max_abs_component() const { return kmax_; }

    // default alias-safe grid
    int grid_resolution() const { return res_; }
    int grid_points() const { return points_; }
    // e^{i k_j . x_p} for mode j, grid point p (row-major over axes)
    const Complex& phase(int j, int p) const {
        return phases_[static_cast<std::size_t>(j) * static_cast<std::size_t>(points_) +
                       static_cast<std::size_t>(p)];
    }

    std::array<double, 3> grid_point(int p) const {
        const double h = 2.0 * std::numbers::pi / res_;
        std::array<double, 3> x{0.0, 0.0, 0.0};
        for (int a = dim_ - 1; a >= 0; --a) {
            x[static_cast<std::size_t>(a)] = h * (p % res_);
            p /= res_;
        }
        return x;
    }

private:
    ModeSet(int dim, int count) : dim_(dim) {
        // enumerate canonical vectors inside a generous box, then sort
        int box = 1;
        while (true) {
            std::vector<WaveVector> cand;
            const int b3 = dim == 3 ? box : 0;
            for (int k1 = -box; k1 <= box; ++k1)
                for (int k2 = -box; k2 <= box; ++k2)
                    for (int k3 = -b3; k3 <= b3; ++k3) {
                        WaveVector v{{k1, k2, k3}};
                        if (!v.is_zero() && v.is_canonical()) cand.push_back(v);
                    }
            std::sort(cand.begin(), cand.end(), mode_less);
            if (static_cast<int>(cand.size()) >= count) {
                // the box is large enough iff mode `count-1` cannot be
                // beaten by a vector just outside it
                if (cand[static_cast<std::size_t>(count) - 1].norm2() <= box * box) {
                    cand.resize(static_cast<std::size_t>(count));
                    modes_ = std::move(cand);
                    break;
                }
            }
            ++box;
        }
        lambda_.reserve(modes_.size());
        kmax_ = 1;
        for (std::size_t j = 0; j < modes_.size(); ++j) {
            lambda_.push_back(static_cast<double>(modes_[j].norm2()));
            index_[modes_[j]] = static_cast<int>(j);
            for (int a = 0; a < 3; ++a) kmax_ = std::max(kmax_, std::abs(modes_[j][a]));
        }
        res_ = 3 * kmax_ + 2;  // exact quadrature for triple products
        points_ = 1;
        for (int a = 0; a < dim_; ++a) points_ *= res_;
        build_phase_table();
    }

    void build_phase_table() {
        phases_.resize(modes_.size() * static_cast<std::size_t>(points_));
        const double h = 2.0 * std::numbers::pi / res_;
        for (std::size_t j = 0; j < modes_.size(); ++j) {
            for (int p = 0; p < points_; ++p) {
                int q = p;
                double arg = 0.0;
                for (int a = dim_ - 1; a >= 0; --a) {
                    arg += modes_[j][a] * h * (q % res_);
                    q /= res_;
                }
                phases_[j * static_cast<std::size_t>(points_) + static_cast<std::size_t>(p)] =
                    Complex(std::cos(arg), std::sin(arg));
            }
        }
    }

    int dim_;
    std::vector<WaveVector> modes_;
    std::vector<double> lambda_;
    std::unordered_map<WaveVector, int, WaveVectorHash> index_;
    int kmax_ = 1;
    int res_ = 0;
    int points_ = 0;
    std::vector<Complex> phases_;
};

using ModeSetPtr = std::shared_ptr<const ModeSet>;

}  // namespace saltns
