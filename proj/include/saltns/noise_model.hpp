#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "brownian.hpp"
#include "transform.hpp"

namespace saltns {

enum class XiKind { ShearModes, RandomSmooth };

// Real-space samples of one correlation field and its gradient, cached on
// the basis grid so transport applications only transform the state.
struct XiGrids {
    VectorGrid value;
    std::array<VectorGrid, 3> grad;
};

// The correlation family (xi_i) driving the transport noise, with
// summability weights and cached W^{3,inf} norm estimates.
class NoiseModel {
public:
    NoiseModel(ModeSetPtr basis, std::vector<SpectralField> xis, std::vector<double> weights)
        : basis_(std::move(basis)), xis_(std::move(xis)), weights_(std::move(weights)) {
        for (const auto& xi : xis_)
            if (divergence_defect(xi) > 1e-12)
                throw std::invalid_argument("NoiseModel: xi fields must be divergence-free");
        w3inf_.reserve(xis_.size());
        grids_.reserve(xis_.size());
        for (const auto& xi : xis_) {
            w3inf_.push_back(estimate_w3inf(xi));
            grids_.push_back(XiGrids{to_grid(xi), gradient_to_grid(xi)});
        }
    }

    static NoiseModel empty(ModeSetPtr basis) { return NoiseModel(std::move(basis), {}, {}); }

    const ModeSetPtr& basis() const { return basis_; }
    int truncation() const { return static_cast<int>(xis_.size()); }
    const SpectralField& xi(int i) const { return xis_.at(static_cast<std::size_t>(i)); }
    double weight(int i) const { return weights_.at(static_cast<std::size_t>(i)); }
    double w3inf_norm(int i) const { return w3inf_.at(static_cast<std::size_t>(i)); }
    const XiGrids& grids(int i) const { return grids_.at(static_cast<std::size_t>(i)); }

    // sum_i ||xi_i||^2_{W^{3,inf}} over the truncated family; the bound
    // the family must keep finite as the truncation grows
    double w3inf_sum_squares() const {
        double s = 0.0;
        for (double w : w3inf_) s += w * w;
        return s;
    }

    // W^{3,inf} norm by dense sampling of all derivatives up to order 3.
    // Per-axis sample count defaults to 128 in 2D, 48 in 3D.
    static double estimate_w3inf(const SpectralField& f, int samples_per_axis = 0) {
        const auto& ms = *f.basis();
        const int d = ms.dim();
        if (samples_per_axis <= 0) samples_per_axis = (d == 2) ? 128 : 48;
        double sup = 0.0;
        std::array<int, 3> alpha{0, 0, 0};
        const int a3max = (d == 3) ? 3 : 0;
        // enumerate multi-indices |alpha| <= 3
        for (alpha[0] = 0; alpha[0] <= 3; ++alpha[0])
            for (alpha[1] = 0; alpha[0] + alpha[1] <= 3; ++alpha[1])
                for (alpha[2] = 0; alpha[2] <= a3max && alpha[0] + alpha[1] + alpha[2] <= 3; ++alpha[2]) {
                    SpectralField g = f;
                    for (int a = 0; a < d; ++a)
                        for (int r = 0; r < alpha[static_cast<std::size_t>(a)]; ++r)
                            g = partial_derivative(g, a);
                    sup = std::max(sup, sup_norm(g, samples_per_axis));
                }
        return sup;
    }

private:
    static double sup_norm(const SpectralField& f, int res) {
        const auto& ms = *f.basis();
        const int d = ms.dim();
        const double h = 2.0 * std::numbers::pi / res;
        int P = 1;
        for (int a = 0; a < d; ++a) P *= res;
        double sup = 0.0;
        for (int p = 0; p < P; ++p) {
            int q = p;
            std::array<double, 3> x{0.0, 0.0, 0.0};
            for (int a = d - 1; a >= 0; --a) {
                x[static_cast<std::size_t>(a)] = h * (q % res);
                q /= res;
            }
            for (int m = 0; m < 3; ++m) {
                double v = 0.0;
                for (int j = 0; j < ms.count(); ++j) {
                    const WaveVector& k = ms.mode(j);
                    const Complex c = f.coeff(j)[static_cast<std::size_t>(m)];
                    if (c == Complex{}) continue;
                    const double arg = k[0] * x[0] + k[1] * x[1] + k[2] * x[2];
                    v += 2.0 * (c.real() * std::cos(arg) - c.imag() * std::sin(arg));
                }
                sup = std::max(sup, std::abs(v));
            }
        }
        return sup;
    }

    ModeSetPtr basis_;
    std::vector<SpectralField> xis_;
    std::vector<double> weights_;
    std::vector<double> w3inf_;
    std::vector<XiGrids> grids_;
};

namespace detail {

// unit shear patterns: component `comp` carries cos/sin of harmonic m
// along axis `dep`, automatically divergence-free since dep != comp
inline SpectralField shear_mode(const ModeSetPtr& basis, int comp, int dep, int m, bool use_sin) {
    SpectralField f(basis);
    WaveVector k{};
    k.k[static_cast<std::size_t>(dep)] = m;
    const int j = basis->index_of(k);
    if (j < 0)
        throw std::invalid_argument("shear_mode: harmonic " + std::to_string(m) +
                                    " outside the mode set; increase ambient modes");
    Coeff c{};
    c[static_cast<std::size_t>(comp)] = use_sin ? Complex(0.0, -0.5) : Complex(0.5, 0.0);
    f.coeff(j) = c;
    return f;
}

}  // namespace detail

// Family xi_i = amplitude * 2^{-decay*i} * base_i with unit-L2 smooth
// divergence-free bases. ShearModes cycles sin/cos shears over axes with
// growing harmonics; RandomSmooth draws Gaussian low-mode fields.
inline NoiseModel build_xi_family(XiKind kind, int count, double decay, const ModeSetPtr& basis,
                                  double amplitude = 1.0, std::uint64_t seed = 0) {
    if (count < 0) throw std::invalid_argument("build_xi_family: count must be >= 0");
    if (decay <= 0.0) throw std::invalid_argument("build_xi_family: decay must be > 0");
    const int d = basis->dim();
    std::vector<SpectralField> xis;
    std::vector<double> weights;
    for (int i = 0; i < count; ++i) {
        const double eps = std::pow(2.0, -decay * i);
        SpectralField base(basis);
        if (kind == XiKind::ShearModes) {
            // (comp, dep) pairs with dep != comp, cycled; harmonic grows
            // once the sin/cos x axis combinations are exhausted
            const int pairs = (d == 2) ? 2 : 3;
            const int cycle = 2 * pairs;
            const int m = i / cycle + 1;
            const int slot = i % cycle;
            const bool use_sin = (slot % 2) == 0;
            const int pair = slot / 2;
            const int comp = pair;
            const int dep = (pair + 1) % d;
            base = detail::shear_mode(basis, comp, dep, m, use_sin);
        } else {
            CounterRng rng(seed, 0xA11CEu + static_cast<std::uint64_t>(i));
            for (int j = 0; j < basis->count(); ++j) {
                if (basis->eigenvalue(j) > 4.0) break;  // low modes only
                Coeff c{};
                for (int mcomp = 0; mcomp < d; ++mcomp)
                    c[static_cast<std::size_t>(mcomp)] = Complex(rng.normal(), rng.normal());
                base.coeff(j) = c;
            }
            base = leray_project(base);
            const double n = sobolev_norm(base, 0.0);
            if (n > 0) base *= 1.0 / n;
        }
        base *= amplitude * eps;
        xis.push_back(std::move(base));
        weights.push_back(eps);
    }
    return NoiseModel(basis, std::move(xis), std::move(weights));
}

// Text format for externally supplied correlation families: per field a
// header "xi <weight>" followed by one line per mode
// "k1 k2 k3 re0 im0 re1 im1 re2 im2", closed by "end". '#' comments.
inline NoiseModel noise_model_from_file(const std::string& path, const ModeSetPtr& basis) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("noise_model_from_file: cannot open " + path);
    std::vector<SpectralField> xis;
    std::vector<double> weights;
    std::string line;
    int lineno = 0;
    SpectralField current;
    bool open = false;
    double weight = 0.0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        std::string tok;
        if (!(ss >> tok)) continue;
        if (tok == "xi") {
            if (open) throw std::runtime_error(path + ":" + std::to_string(lineno) + ": nested 'xi' record");
            if (!(ss >> weight)) throw std::runtime_error(path + ":" + std::to_string(lineno) + ": missing weight");
            current = SpectralField(basis);
            open = true;
        } else if (tok == "end") {
            if (!open) throw std::runtime_error(path + ":" + std::to_string(lineno) + ": 'end' without 'xi'");
            xis.push_back(current);
            weights.push_back(weight);
            open = false;
        } else {
            if (!open) throw std::runtime_error(path + ":" + std::to_string(lineno) + ": mode outside 'xi' record");
            WaveVector k{};
            std::istringstream ms(line);
            double re[3], im[3];
            if (!(ms >> k.k[0] >> k.k[1] >> k.k[2] >> re[0] >> im[0] >> re[1] >> im[1] >> re[2] >> im[2]))
                throw std::runtime_error(path + ":" + std::to_string(lineno) + ": malformed mode line");
            current.set_mode(k, Coeff{Complex(re[0], im[0]), Complex(re[1], im[1]), Complex(re[2], im[2])});
        }
    }
    if (open) throw std::runtime_error(path + ": unterminated 'xi' record");
    return NoiseModel(basis, std::move(xis), std::move(weights));
}

}  // namespace saltns
