#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>

#include "fptmc/chain.hpp"
#include "fptmc/io.hpp"
#include "fptmc/rng.hpp"
#include "fptmc/sampling.hpp"

// Shared fixtures: the seven-stage insect data set in both input formats,
// frozen reference values, and small generators for property tests.
namespace fixtures {

inline constexpr const char* kBugStages = R"(# seven-stage insect cohort
Egg   139  59  478  676
N1     89  52  528  669
N2     74  15  301  390
N3     60  14  392  466
N4     59   1  405  465
N5     55   4  853  912
Adult   0  55 2515 2570
)";

inline constexpr const char* kBugCounts = R"(# seven-stage insect cohort, generic format
states: Egg N1 N2 N3 N4 N5 Adult
Egg: to_Egg=478, to_N1=139, absorb=59
N1: to_N1=528, to_N2=89, absorb=52
N2: to_N2=301, to_N3=74, absorb=15
N3: to_N3=392, to_N4=60, absorb=14
N4: to_N4=405, to_N5=59, absorb=1
N5: to_N5=853, to_Adult=55, absorb=4
Adult: to_Adult=2515, absorb=55
)";

// Frozen from exact rational arithmetic on the seven-stage counts
// (start = all mass on Egg).
inline constexpr double kBugMean = 30.658499892542444;
inline constexpr double kBugVariance = 2019.9528471894023;
inline constexpr double kBugSd = 44.94388553729419;

// First row of the fundamental matrix, same exact-rational route.
inline constexpr double kBugFundamentalRow0[7] = {
    3.414141414141414,  3.330861809585214, 1.9417580055877928, 2.3201518733433626,
    2.3151730066623686, 4.540726413066839, 12.795687370155456,
};

// Single-state table with counts [50, 50]: exact enumeration over the
// binomial count of stays, X ~ Binomial(100, 1/2), with the all-stay draw
// excluded as a skip. Replicate mean is 100/(100-X).
inline constexpr double kHalfEnumMeanOfMeans = 2.0206276186376404;
inline constexpr double kHalfEnumSdOfMeans = 0.20851005165825878;
inline constexpr double kHalfEnumMeanOfVariances = 2.105784796206111;

inline fptmc::TransitionCountTable bug_table() {
    return fptmc::parse_counts(kBugCounts);
}

inline fptmc::AbsorbingChainSpec geometric_chain(double stay) {
    fptmc::AbsorbingChainSpec spec;
    spec.transitions = fptmc::Matrix(1);
    spec.transitions(0, 0) = stay;
    spec.start = {1.0};
    spec.state_labels = {"S"};
    return spec;
}

/// Random substochastic chain: every row sum is uniform in
/// (0, max_row_sum], entries proportional to uniforms.
inline fptmc::AbsorbingChainSpec random_chain(std::size_t k, double max_row_sum,
                                              fptmc::RngStream& rng) {
    fptmc::AbsorbingChainSpec spec;
    spec.transitions = fptmc::Matrix(k);
    for (std::size_t i = 0; i < k; ++i) {
        double total = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            spec.transitions(i, j) = rng.next_double();
            total += spec.transitions(i, j);
        }
        const double target = max_row_sum * rng.next_double();
        for (std::size_t j = 0; j < k; ++j) {
            spec.transitions(i, j) *= target / total;
        }
    }
    spec.start = fptmc::point_mass(k, 0);
    return spec;
}

class TempFile {
  public:
    explicit TempFile(std::string_view content, std::string_view suffix = ".txt") {
        static std::uint64_t counter = 0;
        path_ = (std::filesystem::temp_directory_path() /
                 ("fptmc_test_" + std::to_string(++counter) + std::string(suffix)))
                    .string();
        std::ofstream out(path_, std::ios::binary);
        out << content;
    }

    ~TempFile() { std::remove(path_.c_str()); }

    TempFile(const TempFile&) = delete;
    TempFile& operator=(const TempFile&) = delete;

    const std::string& path() const { return path_; }

  private:
    std::string path_;
};

}  // namespace fixtures
