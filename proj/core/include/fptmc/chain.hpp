#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "fptmc/matrix.hpp"

namespace fptmc {

/// Tolerance for row sums above 1 and start-distribution normalization.
inline constexpr double kRowSumTolerance = 1e-12;

/// Variance values in [-kVarianceSlack, 0) are cancellation noise and are
/// clamped to zero; anything below is an error.
inline constexpr double kVarianceSlack = 1e-9;

/// An absorbing discrete-time Markov chain, reduced to its transient part.
///
/// `transitions(i, j)` is the one-step probability of moving from transient
/// state i to transient state j. Row sums may be below one; the deficit is
/// the one-step absorption probability from that state. `start` is the
/// initial distribution over the transient states.
struct AbsorbingChainSpec {
    Matrix transitions;
    std::vector<double> start;
    std::vector<std::string> state_labels;

    std::size_t size() const { return transitions.size(); }

    /// One-step absorption probability from state i (the row deficit).
    double absorption_probability(std::size_t i) const {
        return 1.0 - transitions.row_sum(i);
    }
};

/// Mean and variance of the passage (absorption) time, in steps and steps².
struct MomentPair {
    double mean = 0.0;
    double variance = 0.0;

    double sd() const;
};

/// Distribution putting all mass on one state.
std::vector<double> point_mass(std::size_t k, std::size_t state);

/// The fundamental matrix N = (I - U)⁻¹, computed as k pivoted linear
/// solves. N(i, j) is the expected number of visits to transient state j
/// starting from i before absorption.
///
/// Throws SingularSystem when (I - U) has no usable pivot or the solution
/// is not a valid fundamental matrix (non-finite or negative entries),
/// both of which signal a chain with no path to absorption.
Matrix fundamental_matrix(const AbsorbingChainSpec& spec);

/// Mean and variance of the time to absorption from the start distribution:
/// mean = v'N1, variance = v'N(2N - I)1 - mean². Uses two solves against a
/// single factorization rather than forming N.
///
/// A variance within kVarianceSlack below zero is clamped to zero; one
/// below that raises NumericalError. Propagates SingularSystem.
MomentPair passage_time_moments(const AbsorbingChainSpec& spec);

/// Checks every AbsorbingChainSpec invariant. Returns one message per
/// violation, empty when the spec is valid. Violations are data, not errors.
std::vector<std::string> validate_spec(const AbsorbingChainSpec& spec);

}  // namespace fptmc
