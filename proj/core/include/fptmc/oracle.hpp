#pragma once

#include <cstdint>

#include "fptmc/chain.hpp"
#include "fptmc/rng.hpp"

namespace fptmc {

/// Step cap for a single trajectory; exceeding it raises TrajectoryOverflow.
inline constexpr std::uint64_t kTrajectoryStepCap = 10'000'000;

/// Walks one trajectory to absorption and returns the number of steps
/// taken (the absorbing step included, so the result is at least 1).
std::uint64_t simulate_trajectory(const AbsorbingChainSpec& spec, RngStream& rng);

struct TruncatedMoments {
    MomentPair moments;
    /// Probability mass beyond the horizon, v'Uᵀ1. The truncated moments
    /// are a valid oracle only when this is small.
    double tail_bound = 0.0;
    std::uint64_t horizon = 0;
};

/// Moments of the passage-time distribution truncated at `horizon`,
/// accumulated from P(L = t) = v'(Uᵗ⁻¹ - Uᵗ)1 for t = 1..horizon.
/// Independent of the fundamental-matrix path. Requires k <= 8.
TruncatedMoments truncated_sum_moments(const AbsorbingChainSpec& spec, std::uint64_t horizon);

/// Smallest power-of-two horizon (from 32) whose tail mass falls below
/// the threshold, capped at 10⁶.
std::uint64_t adaptive_horizon(const AbsorbingChainSpec& spec, double tail_threshold = 1e-9);

}  // namespace fptmc
