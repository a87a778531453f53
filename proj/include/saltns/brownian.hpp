#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

namespace saltns {

// Philox4x32-10 counter-based generator. A draw is a pure function of
// (key, counter), so Monte Carlo streams are reproducible regardless of
// evaluation order or thread scheduling.
namespace philox {

struct Block {
    std::uint32_t v[4];
};

inline std::uint32_t mulhi(std::uint32_t a, std::uint32_t b) {
    return static_cast<std::uint32_t>((static_cast<std::uint64_t>(a) * b) >> 32);
}

inline Block round10(std::uint32_t k0, std::uint32_t k1, Block c) {
    constexpr std::uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
    constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
    for (int r = 0; r < 10; ++r) {
        const std::uint32_t hi0 = mulhi(M0, c.v[0]), lo0 = M0 * c.v[0];
        const std::uint32_t hi1 = mulhi(M1, c.v[2]), lo1 = M1 * c.v[2];
        c = Block{{hi1 ^ c.v[1] ^ k0, lo1, hi0 ^ c.v[3] ^ k1, lo0}};
        k0 += W0;
        k1 += W1;
    }
    return c;
}

inline double uniform(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 32) | lo;
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;  // (0,1)
}

// two standard normals from one 128-bit block
inline void normal_pair(std::uint64_t key, std::uint64_t c01, std::uint64_t c23, double& z0, double& z1) {
    Block b{{static_cast<std::uint32_t>(c01), static_cast<std::uint32_t>(c01 >> 32),
             static_cast<std::uint32_t>(c23), static_cast<std::uint32_t>(c23 >> 32)}};
    b = round10(static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32), b);
    const double u1 = uniform(b.v[0], b.v[1]);
    const double u2 = uniform(b.v[2], b.v[3]);
    const double r = std::sqrt(-2.0 * std::log(u1));
    z0 = r * std::cos(2.0 * std::numbers::pi * u2);
    z1 = r * std::sin(2.0 * std::numbers::pi * u2);
}

}  // namespace philox

// Counter-keyed normal draws for generic sampling (assumption checkers,
// random test fields). Stateless: draw(i) is a function of (key, i).
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream) : key_(seed), stream_(stream) {}

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double z0, z1;
        philox::normal_pair(key_, stream_, counter_++, z0, z1);
        spare_ = z1;
        have_spare_ = true;
        return z0;
    }

private:
    std::uint64_t key_;
    std::uint64_t stream_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// Scalar Brownian increments W^i_{t+dt} - W^i_t for a finite family of
// independent Brownian motions, indexed by (step, noise index). Increment
// values depend only on (seed, sample, step, index).
class BrownianPath {
public:
    BrownianPath(std::uint64_t seed, std::uint64_t sample, double dt, int n_indices)
        : seed_(seed), sample_(sample), dt_(dt), n_(n_indices) {}

    double dt() const { return dt_; }
    int index_count() const { return n_; }
    std::uint64_t seed() const { return seed_; }
    std::uint64_t sample() const { return sample_; }

    double increment(std::uint64_t step, int index) const {
        double z0, z1;
        const std::uint64_t c01 = (sample_ << 32) ^ static_cast<std::uint64_t>(index);
        philox::normal_pair(seed_, c01, step, z0, z1);
        return z0 * std::sqrt(dt_);
    }

    std::vector<double> sample_increments(std::uint64_t step) const {
        std::vector<double> out(static_cast<std::size_t>(n_));
        for (int i = 0; i < n_; ++i) out[static_cast<std::size_t>(i)] = increment(step, i);
        return out;
    }

private:
    std::uint64_t seed_;
    std::uint64_t sample_;
    double dt_;
    int n_;
};

}  // namespace saltns
