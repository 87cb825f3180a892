#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fptmc/chain.hpp"
#include "fptmc/rng.hpp"

namespace fptmc {

/// Observed one-step transition counts. Row i holds the counts of
/// transitions from transient state i to each transient state plus a final
/// absorption count (k+1 entries); the row total n_i is the sample size
/// behind the estimated probabilities of that row.
struct TransitionCountTable {
    std::vector<std::string> state_labels;
    std::vector<std::vector<std::uint64_t>> counts;

    std::size_t size() const { return counts.size(); }

    std::uint64_t row_total(std::size_t i) const;

    /// Estimated probability row p̂_i = counts_i / n_i, length k+1.
    std::vector<double> row_probabilities(std::size_t i) const;

    /// The point-estimate chain Û: each entry is one count/total division,
    /// so equal tables give bit-identical matrices. `start` defaults to all
    /// mass on the first state.
    AbsorbingChainSpec point_estimate(std::vector<double> start = {}) const;

    /// Same estimated probabilities at `factor` times the sample size.
    TransitionCountTable scaled(std::uint64_t factor) const;
};

/// Checks every TransitionCountTable invariant, including that absorption
/// is reachable from every state through positive counts. Empty when valid.
std::vector<std::string> validate_table(const TransitionCountTable& table);

/// Exact Binomial(n, p) draw. Inversion from zero for small n·p, inversion
/// outward from the mode otherwise; both consume one uniform.
std::uint64_t sample_binomial(std::uint64_t n, double p, RngStream& rng);

/// One multinomial draw by conditional binomials: component j is Binomial
/// on the trials left after components 0..j-1, giving the exact joint
/// distribution in O(k) binomial draws. Counts sum to n.
///
/// Throws InvalidProbabilityVector when probabilities has a negative entry
/// or sums farther than 1e-9 from one.
std::vector<std::uint64_t> sample_row(const std::vector<double>& probabilities, std::uint64_t n,
                                      RngStream& rng);

/// One resampled realization U* of the estimated transition matrix: each
/// row is a multinomial draw of max(1, round(fraction·n_i)) transitions
/// from the fixed point estimates p̂_i, divided by that effective sample
/// size. The absorption column becomes the row deficit.
AbsorbingChainSpec sample_matrix(const TransitionCountTable& table, double fraction,
                                 RngStream& rng, std::vector<double> start = {});

}  // namespace fptmc
