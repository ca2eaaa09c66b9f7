#pragma once

#include <cstdint>
#include <vector>

namespace infs {

// splitmix64: stable across platforms, used for stream derivation.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Minimal xorshift-based generator. The standard distributions are
// implementation-defined, so anything feeding a reproducibility contract
// draws through this instead.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(splitmix64(seed ^ 0xD1B54A32D192ED03ULL)) {
        if (state_ == 0) state_ = 0x9E3779B97F4A7C15ULL;
    }

    std::uint64_t next() {
        state_ ^= state_ << 13;
        state_ ^= state_ >> 7;
        state_ ^= state_ << 17;
        return state_;
    }

    // Uniform in [0, n).
    std::uint64_t bounded(std::uint64_t n) { return next() % n; }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(bounded(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    // Independent substream, stable under reordering of derivations.
    Rng substream(std::uint64_t index) const {
        return Rng(splitmix64(state_ ^ splitmix64(index)));
    }

private:
    std::uint64_t state_;
};

}  // namespace infs
