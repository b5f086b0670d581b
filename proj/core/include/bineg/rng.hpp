#pragma once

#include <cmath>
#include <cstdint>

namespace bineg {

// Counter-based generator: the k-th output is mix(key + k*phi) where the key
// is derived from (seed, index, stream tag) by chained splitmix64 finalizers.
// Per-sample streams are therefore order-independent and thread-safe by
// construction; identical (seed, index, tag) always replays the same stream.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t index, std::uint64_t tag) {
        key_ = mix(mix(mix(seed + 0x9E3779B97F4A7C15ull) ^ (index + 0xD1B54A32D192ED03ull)) ^
                   (tag + 0x8CB92BA72F3D8DD7ull));
    }

    std::uint64_t next_u64() { return mix(key_ + (counter_++) * 0x9E3779B97F4A7C15ull); }

    // Uniform in (0, 1].
    double next_unit() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

    // Box-Muller pair of independent standard normals.
    void next_gaussian_pair(double& z0, double& z1) {
        const double u1 = next_unit();
        const double u2 = next_unit();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 6.283185307179586476925286766559 * u2;
        z0 = r * std::cos(t);
        z1 = r * std::sin(t);
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ull;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBull;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t key_ = 0;
    std::uint64_t counter_ = 0;
};

} // namespace bineg
