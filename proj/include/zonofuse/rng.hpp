#ifndef ZONOFUSE_RNG_HPP_
#define ZONOFUSE_RNG_HPP_

/**
 * @file rng.hpp
 * @brief Counter-based deterministic random streams (splitmix64 finalizer).
 *
 * Each stream is keyed by (seed, stream key); draws are a pure function of
 * the key pair and the draw counter, so adding a consumer never perturbs
 * other streams and results are identical across platforms and runs.
 */

#include <Eigen/Dense>
#include <cstdint>
#include <string_view>

namespace zonofuse {

class NoiseStream {
  public:
    NoiseStream(std::uint64_t seed, std::uint64_t stream_key)
        : base_(mix(seed ^ mix(stream_key ^ 0x8000000000000001ull))) {}

    NoiseStream(std::uint64_t seed, std::string_view stream_name)
        : NoiseStream(seed, fnv1a(stream_name)) {}

    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9E3779B97F4A7C15ull;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    static std::uint64_t fnv1a(std::string_view s) {
        std::uint64_t h = 0xCBF29CE484222325ull;
        for (char c : s) {
            h ^= static_cast<unsigned char>(c);
            h *= 0x100000001B3ull;
        }
        return h;
    }

    std::uint64_t next_u64() { return mix(base_ + 0x9E3779B97F4A7C15ull * ++counter_); }

    /// Uniform on [-1, 1).
    double uniform() {
        const double u01 = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
        return 2.0 * u01 - 1.0;
    }

    /// Extreme points: -1 or +1.
    double sign() { return (next_u64() >> 63) ? 1.0 : -1.0; }

    Eigen::VectorXd uniform_vec(Eigen::Index dims) {
        Eigen::VectorXd v(dims);
        for (Eigen::Index i = 0; i < dims; ++i) v(i) = uniform();
        return v;
    }

    Eigen::VectorXd sign_vec(Eigen::Index dims) {
        Eigen::VectorXd v(dims);
        for (Eigen::Index i = 0; i < dims; ++i) v(i) = sign();
        return v;
    }

  private:
    std::uint64_t base_;
    std::uint64_t counter_ = 0;
};

} // namespace zonofuse

#endif
