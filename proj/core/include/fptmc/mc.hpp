#pragma once

#include <cstdint>
#include <vector>

#include "fptmc/chain.hpp"
#include "fptmc/sampling.hpp"

namespace fptmc {

struct McConfig {
    std::uint64_t replicates = 100000;
    std::uint64_t seed = 0;
    /// Effective sample-size fraction f: each row resamples
    /// max(1, round(f·n_i)) transitions.
    double fraction = 1.0;
    /// Abort when more than this proportion of replicates is skipped.
    double max_skip_ratio = 0.01;
    /// Replicate j draws from stream (seed, stream_offset + j).
    std::uint64_t stream_offset = 0;
    unsigned workers = 1;
    /// Retain the per-replicate (mean, variance) pairs in the result.
    bool keep_replicates = false;
};

/// Aggregated Monte Carlo estimate. var_L is the law-of-total-variance
/// sum mean_of_variances + variance_of_means, exactly by construction.
struct McResult {
    double mean_L = 0.0;
    double var_L = 0.0;
    double mean_of_variances = 0.0;
    double variance_of_means = 0.0;
    std::uint64_t replicates_used = 0;
    std::uint64_t replicates_skipped = 0;
    /// Usable replicates in replicate order; filled when keep_replicates.
    std::vector<MomentPair> per_replicate;

    double sd_L() const;
};

/// Runs the resampling loop: replicate j draws U* from the table at the
/// configured fraction, computes its passage-time moments, and the
/// replicate moments are aggregated as mean_L = mean(μ_j),
/// mean_of_variances = mean(σ_j), variance_of_means = population variance
/// of μ_j. Replicates whose chain cannot absorb (or whose moments are
/// non-finite or below the variance slack) are skipped and counted.
///
/// Deterministic for fixed (inputs, seed) at any worker count: replicates
/// are seeded by index and reduced in index order.
///
/// Throws TooManySkips when skipped/replicates exceeds max_skip_ratio and
/// InsufficientReplicates when fewer than two replicates survive.
McResult run_mc(const TransitionCountTable& table, const std::vector<double>& start,
                const McConfig& cfg);

struct SweepPoint {
    double fraction = 1.0;
    McResult result;
    /// 100·(sd_L(f) - sd_L(1)) / sd_L(1) against the f = 1 baseline.
    double sd_increase_percent = 0.0;
};

/// Runs run_mc at each fraction with the same seed but disjoint stream
/// ranges. The f = 1 baseline is prepended when absent; every point's
/// sd_increase_percent is measured against it.
std::vector<SweepPoint> sweep_sample_fraction(const TransitionCountTable& table,
                                              const std::vector<double>& start,
                                              const McConfig& cfg,
                                              std::vector<double> fractions);

}  // namespace fptmc
