#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "fptmc/sampling.hpp"

namespace fptmc {

/// One row of a stage-structured (matrix population model) count table:
/// from this stage an individual graduated to the next stage, died, or
/// stayed, `total` observed transitions in all.
struct StageRecord {
    std::string label;
    std::uint64_t graduation = 0;
    std::uint64_t death = 0;
    std::uint64_t stay = 0;
    std::uint64_t total = 0;
};

struct StageTable {
    std::vector<StageRecord> stages;
};

std::vector<std::string> validate_stage_table(const StageTable& stages);

/// Rewrites stage counts in chain-row orientation: row i keeps `stay` on
/// the diagonal, sends `graduation` to state i+1 and `death` to the
/// absorption column. The resulting matrix is the transpose of the MPM's
/// transient block. Throws ValidationError on an invalid stage table.
TransitionCountTable stage_table_to_counts(const StageTable& stages);

/// Parses the generic counts format (see README for the grammar):
///   states: A B
///   A: to_A=5, to_B=3, absorb=2
/// Throws ParseError with a 1-based position on structural problems and
/// ValidationError when the parsed table violates its invariants.
TransitionCountTable parse_counts(std::string_view text);

/// Parses the stage format: one `label G R P n` line per stage.
StageTable parse_stage_table(std::string_view text);

/// Canonical generic-format encoding: header plus one row per state with
/// every destination written out. parse_counts(write_counts(t)) == t.
std::string write_counts(const TransitionCountTable& table);

}  // namespace fptmc
