#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>

namespace abmdp::rng {

// SplitMix64 step; used only to derive engine seeds from (seed, stream id).
inline std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Stream ids. Every consumer owns a private stream so that runs sharing a
// seed consume identical variates regardless of what other components do.
enum class StreamId : std::uint64_t {
    ChannelPath = 1,
    QlTrain = 2,
    Eval = 3,
    Detector = 4,
};

/// Seedable random stream: mt19937_64 keyed by (seed, stream id).
///
/// Generator is "abmdp-rng v1": engine = std::mt19937_64 seeded with
/// splitmix64(seed XOR id * 0x9e3779b97f4a7c15), uniforms from the top 53
/// bits, normals by Box-Muller. Identical (seed, id) gives an identical
/// variate sequence.
class Stream {
public:
    Stream(std::uint64_t seed, StreamId id)
        : Stream(seed, static_cast<std::uint64_t>(id)) {}

    Stream(std::uint64_t seed, std::uint64_t stream_index) {
        std::uint64_t x = seed ^ (stream_index * 0x9e3779b97f4a7c15ULL);
        engine_.seed(splitmix64(x));
    }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1).
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in {0, ..., n-1}.
    int uniform_int(int n) {
        if (n <= 0) throw std::invalid_argument("uniform_int: n must be positive");
        int v = static_cast<int>(uniform01() * n);
        return v >= n ? n - 1 : v;
    }

    /// Standard normal via Box-Muller (pairs cached).
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 1.0 - uniform01();  // (0, 1]
        double u2 = uniform01();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    /// Inverse-CDF draw from a probability vector. Cumulative sums are taken
    /// in index order; a draw landing exactly on a boundary resolves to the
    /// lower index.
    int pick(std::span<const double> probs) {
        double u = uniform01();
        double acc = 0.0;
        for (std::size_t i = 0; i < probs.size(); ++i) {
            acc += probs[i];
            if (u <= acc) return static_cast<int>(i);
        }
        return static_cast<int>(probs.size()) - 1;  // guards float round-off
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace abmdp::rng
