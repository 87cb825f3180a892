#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace fptmc {

/// Base class for all fptmc errors.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// (I - U) admitted no pivot above threshold: some state has no path to
/// absorption, or the chain is numerically indistinguishable from one.
class SingularSystem : public Error {
  public:
    using Error::Error;
};

/// A moment computation produced non-finite values or a variance more
/// negative than the allowed cancellation slack.
class NumericalError : public Error {
  public:
    using Error::Error;
};

/// A probability vector had a negative entry or did not sum to one.
class InvalidProbabilityVector : public Error {
  public:
    using Error::Error;
};

/// A simulated trajectory exceeded the hard step cap without absorbing.
class TrajectoryOverflow : public Error {
  public:
    using Error::Error;
};

/// The Monte Carlo run skipped more replicates than allowed.
class TooManySkips : public Error {
  public:
    TooManySkips(std::uint64_t skipped, std::uint64_t replicates, double max_ratio,
                 double fraction)
        : Error("skipped " + std::to_string(skipped) + " of " + std::to_string(replicates) +
                " replicates at fraction " + std::to_string(fraction) +
                ", above the allowed ratio " + std::to_string(max_ratio)),
          skipped_(skipped),
          replicates_(replicates) {}

    std::uint64_t skipped() const { return skipped_; }
    std::uint64_t replicates() const { return replicates_; }

  private:
    std::uint64_t skipped_;
    std::uint64_t replicates_;
};

/// Fewer than two usable replicates survived.
class InsufficientReplicates : public Error {
  public:
    using Error::Error;
};

/// Structural problem in an input file, with 1-based position.
class ParseError : public Error {
  public:
    ParseError(std::size_t line, std::size_t column, const std::string& message)
        : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                message),
          line_(line),
          column_(column) {}

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

  private:
    std::size_t line_;
    std::size_t column_;
};

/// One or more data invariants do not hold; carries the full list.
class ValidationError : public Error {
  public:
    explicit ValidationError(std::vector<std::string> violations)
        : Error(join(violations)), violations_(std::move(violations)) {}

    const std::vector<std::string>& violations() const { return violations_; }

  private:
    static std::string join(const std::vector<std::string>& violations) {
        std::string out = "invalid input:";
        for (const auto& v : violations) {
            out += "\n  " + v;
        }
        return out;
    }

    std::vector<std::string> violations_;
};

}  // namespace fptmc
