#pragma once

#include <cmath>
#include <cstdint>

namespace mrfm {

// SplitMix64 finalizer (Steele/Lea/Flood constants).
constexpr std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
}

// Derives a stream seed from (seed, lane). Used for per-trial, per-hypothesis
// and per-candidate substreams, so results never depend on execution order or
// on how much of a parent stream has already been consumed.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t lane) {
    return mix64(seed ^ mix64(lane + 0x632BE59BD9B4E019ULL));
}

/// Deterministic random stream with explicit substream derivation.
///
/// The generator is SplitMix64. A stream is identified by its key; derive()
/// depends only on the key, never on consumption state, so
/// `s.derive(k)` yields the same stream no matter how many values were
/// drawn from `s` beforehand.
class RandomStream {
public:
    RandomStream() : RandomStream(0) {}
    explicit RandomStream(std::uint64_t seed) { reset_key(mix64(seed + kGamma)); }

    /// Independent stream keyed by (this stream's identity, lane).
    RandomStream derive(std::uint64_t lane) const {
        RandomStream out;
        out.reset_key(derive_seed(key_, lane));
        return out;
    }

    std::uint64_t key() const { return key_; }

    std::uint64_t next_u64() {
        state_ += kGamma;
        return mix64(state_);
    }

    /// Uniform in [0, 1) with 53-bit resolution.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in (0, 1); never returns an endpoint.
    double uniform_open01() {
        double u = uniform01();
        while (u == 0.0) u = uniform01();
        return u;
    }

    double uniform(double lo, double hi) { return lo + uniform01() * (hi - lo); }

    /// Standard normal via Box-Muller; both values of a pair are used.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform_open01()));
        const double a = 2.0 * kPi * uniform01();
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    /// Exponential inter-arrival time; strictly positive.
    double exponential(double rate) { return -std::log(uniform_open01()) / rate; }

    /// +1 or -1 with equal probability.
    int coin_sign() { return (next_u64() >> 63) ? 1 : -1; }

private:
    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
    static constexpr double kPi = 3.14159265358979323846;

    void reset_key(std::uint64_t key) {
        key_ = key;
        state_ = key;
        has_spare_ = false;
        spare_ = 0.0;
    }

    std::uint64_t key_ = 0;
    std::uint64_t state_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace mrfm
