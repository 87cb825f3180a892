#pragma once

#include <cstdint>

namespace fptmc {

/// Splittable counter-based uniform generator (SplitMix64 over a mixed
/// (seed, stream_id) origin). The draw sequence is a pure function of
/// (seed, stream_id): replicate r always sees the same numbers no matter
/// which worker runs it or in what order.
class RngStream {
  public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id)
        : seed_(seed),
          stream_id_(stream_id),
          state_(mix(seed + 0x9E3779B97F4A7C15ull) ^ mix(stream_id + 0xD1B54A32D192ED03ull)) {}

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ull;
        return mix(state_);
    }

    /// Uniform double in [0, 1), 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

  private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::uint64_t state_;
};

}  // namespace fptmc
