#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace gradsense {

/// splitmix64 finalizer. Bit-mixes a 64-bit word; used for sub-seed
/// derivation so that nearby seeds give unrelated streams.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Sub-seed for stream `stream` of a master seed (stream 0, 1, ... map to
/// per-run initializations, direction draws, and so on).
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    return mix64(seed ^ mix64(stream + 1));
}

/// Deterministic random source. The uniform stream comes from mt19937_64,
/// whose output sequence is fixed by the C++ standard; normals use the
/// trigonometric Box-Muller transform on that stream. Identical seeds give
/// identical draw sequences.
class Rng {
public:
    explicit Rng(std::uint64_t s) : gen_(s) {}

    /// Uniform draw in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal draw (Box-Muller, pair cached).
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform();  // (0, 1], keeps the log finite
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * 3.141592653589793238462643383279502884 * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    double normal(double mean, double sd) { return mean + sd * normal(); }

private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace gradsense
