#pragma once

#include <array>
#include <cstdint>
#include <functional>

namespace saltns {

// Fourier frequency on the 2*pi-periodic torus. Stored as a 3-tuple with
// k3 == 0 in two dimensions. The zero vector never appears in a field
// support (zero-average condition).
struct WaveVector {
    std::array<int, 3> k{0, 0, 0};

    int operator[](int i) const { return k[static_cast<std::size_t>(i)]; }

    int norm2() const { return k[0] * k[0] + k[1] * k[1] + k[2] * k[2]; }

    bool is_zero() const { return k[0] == 0 && k[1] == 0 && k[2] == 0; }

    WaveVector negated() const { return WaveVector{{-k[0], -k[1], -k[2]}}; }

    // Canonical representative of the {k, -k} pair: first nonzero
    // component positive. Only canonical vectors are stored; the
    // conjugate half-space is implied.
    bool is_canonical() const {
        if (k[0] != 0) return k[0] > 0;
        if (k[1] != 0) return k[1] > 0;
        return k[2] > 0;
    }

    bool operator==(const WaveVector& o) const { return k == o.k; }
};

// Total mode ordering: |k|^2 ascending, ties broken lexicographically.
inline bool mode_less(const WaveVector& a, const WaveVector& b) {
    const int na = a.norm2(), nb = b.norm2();
    if (na != nb) return na < nb;
    return a.k < b.k;
}

struct WaveVectorHash {
    std::size_t operator()(const WaveVector& v) const {
        std::uint64_t h = 1469598103934665603ull;
        for (int c : v.k) {
            h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(c));
            h *= 1099511628211ull;
        }
        return static_cast<std::size_t>(h);
    }
};

}  // namespace saltns
