#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "fixtures.hpp"
#include "fptmc/errors.hpp"
#include "fptmc/mc.hpp"

using fptmc::McConfig;
using fptmc::McResult;
using fptmc::run_mc;
using fptmc::sweep_sample_fraction;
using fptmc::SweepPoint;
using fptmc::TransitionCountTable;

namespace {

TransitionCountTable pure_absorption_table() {
    TransitionCountTable table;
    table.state_labels = {"A", "B"};
    table.counts = {{0, 0, 25}, {0, 0, 75}};
    return table;
}

TransitionCountTable half_half_table() {
    TransitionCountTable table;
    table.state_labels = {"S"};
    table.counts = {{50, 50}};
    return table;
}

}  // namespace

TEST_CASE("pure absorption gives one deterministic step") {
    McConfig cfg;
    cfg.replicates = 500;
    cfg.seed = 3;
    const McResult result = run_mc(pure_absorption_table(), {1.0, 0.0}, cfg);
    CHECK(result.mean_L == 1.0);
    CHECK(result.var_L == 0.0);
    CHECK(result.mean_of_variances == 0.0);
    CHECK(result.variance_of_means == 0.0);
    CHECK(result.replicates_used == 500);
    CHECK(result.replicates_skipped == 0);
}

TEST_CASE("total variance decomposes exactly and both parts are nonnegative") {
    McConfig cfg;
    cfg.replicates = 20000;
    cfg.seed = 4;
    const McResult result = run_mc(fixtures::bug_table(), fptmc::point_mass(7, 0), cfg);
    CHECK(result.var_L == result.mean_of_variances + result.variance_of_means);
    CHECK(result.mean_of_variances >= 0.0);
    CHECK(result.variance_of_means >= 0.0);
    CHECK(result.replicates_used + result.replicates_skipped == cfg.replicates);
}

TEST_CASE("results are bitwise identical for any worker count") {
    McConfig cfg;
    cfg.replicates = 20000;
    cfg.seed = 5;
    cfg.fraction = 0.3;
    cfg.keep_replicates = true;

    cfg.workers = 1;
    const McResult serial = run_mc(fixtures::bug_table(), fptmc::point_mass(7, 0), cfg);
    for (const unsigned workers : {2u, 3u, 8u}) {
        cfg.workers = workers;
        const McResult parallel = run_mc(fixtures::bug_table(), fptmc::point_mass(7, 0), cfg);
        CHECK(parallel.mean_L == serial.mean_L);
        CHECK(parallel.var_L == serial.var_L);
        CHECK(parallel.mean_of_variances == serial.mean_of_variances);
        CHECK(parallel.variance_of_means == serial.variance_of_means);
        CHECK(parallel.replicates_skipped == serial.replicates_skipped);
        REQUIRE(parallel.per_replicate.size() == serial.per_replicate.size());
        for (std::size_t i = 0; i < serial.per_replicate.size(); ++i) {
            CHECK(parallel.per_replicate[i].mean == serial.per_replicate[i].mean);
            CHECK(parallel.per_replicate[i].variance == serial.per_replicate[i].variance);
        }
    }
}

TEST_CASE("per-replicate retention reproduces the aggregates") {
    McConfig cfg;
    cfg.replicates = 5000;
    cfg.seed = 6;
    cfg.keep_replicates = true;
    const McResult result = run_mc(fixtures::bug_table(), fptmc::point_mass(7, 0), cfg);
    REQUIRE(result.per_replicate.size() == result.replicates_used);

    double mean_sum = 0.0;
    double var_sum = 0.0;
    for (const auto& m : result.per_replicate) {
        mean_sum += m.mean;
        var_sum += m.variance;
    }
    const auto used = static_cast<double>(result.replicates_used);
    CHECK(result.mean_L == doctest::Approx(mean_sum / used).epsilon(1e-14));
    CHECK(result.mean_of_variances == doctest::Approx(var_sum / used).epsilon(1e-14));
}

TEST_CASE("single-state table matches the exact enumeration over resampled counts") {
    McConfig cfg;
    cfg.replicates = 10000;
    cfg.seed = 7;
    const McResult result = run_mc(half_half_table(), {1.0}, cfg);
    const double standard_error =
        fixtures::kHalfEnumSdOfMeans / std::sqrt(static_cast<double>(cfg.replicates));
    CHECK(std::fabs(result.mean_L - fixtures::kHalfEnumMeanOfMeans) <= 3.0 * standard_error);
    // The all-stay draw has probability 2^-100; nothing should be skipped.
    CHECK(result.replicates_skipped == 0);
}

TEST_CASE("scaling all counts 100x drives the estimate to the exact moments") {
    McConfig cfg;
    cfg.replicates = 10000;
    cfg.seed = 8;
    const McResult result =
        run_mc(fixtures::bug_table().scaled(100), fptmc::point_mass(7, 0), cfg);
    CHECK(std::fabs(result.mean_L - fixtures::kBugMean) / fixtures::kBugMean < 0.01);
    CHECK(std::fabs(result.sd_L() - fixtures::kBugSd) / fixtures::kBugSd < 0.01);
}

TEST_CASE("skip policy fails loudly above the ratio and reports counts") {
    // One state, absorption count 1 of 10: at f = 0.1 each replicate draws a
    // single transition, and the nine-in-ten stay draw leaves the chain
    // unable to absorb, so most replicates are skipped.
    TransitionCountTable table;
    table.state_labels = {"S"};
    table.counts = {{9, 1}};

    McConfig cfg;
    cfg.replicates = 2000;
    cfg.seed = 9;
    cfg.fraction = 0.1;
    CHECK_THROWS_AS(run_mc(table, {1.0}, cfg), fptmc::TooManySkips);

    cfg.max_skip_ratio = 0.99;
    const McResult result = run_mc(table, {1.0}, cfg);
    CHECK(result.replicates_used + result.replicates_skipped == cfg.replicates);
    CHECK(result.replicates_skipped > 1500);  // ~90% expected
    // Surviving replicates all absorbed immediately.
    CHECK(result.mean_L == 1.0);
    CHECK(result.var_L == 0.0);
}

TEST_CASE("fewer than two usable replicates is an error") {
    McConfig cfg;
    cfg.replicates = 1;
    cfg.seed = 10;
    CHECK_THROWS_AS(run_mc(half_half_table(), {1.0}, cfg), fptmc::InsufficientReplicates);
}

TEST_CASE("configuration and input preconditions are enforced") {
    McConfig cfg;
    cfg.replicates = 0;
    CHECK_THROWS_AS(run_mc(half_half_table(), {1.0}, cfg), std::invalid_argument);
    cfg.replicates = 10;
    cfg.fraction = 0.0;
    CHECK_THROWS_AS(run_mc(half_half_table(), {1.0}, cfg), std::invalid_argument);
    cfg.fraction = 1.0;
    cfg.max_skip_ratio = 1.0;
    CHECK_THROWS_AS(run_mc(half_half_table(), {1.0}, cfg), std::invalid_argument);
    cfg.max_skip_ratio = 0.01;
    cfg.workers = 0;
    CHECK_THROWS_AS(run_mc(half_half_table(), {1.0}, cfg), std::invalid_argument);
    cfg.workers = 1;
    CHECK_THROWS_AS(run_mc(half_half_table(), {0.5, 0.5}, cfg), std::invalid_argument);

    TransitionCountTable bad;
    bad.state_labels = {"S"};
    bad.counts = {{10, 0}};
    CHECK_THROWS_AS(run_mc(bad, {1.0}, cfg), fptmc::ValidationError);
}

TEST_CASE("sweep baseline reports zero increase and is prepended when absent") {
    McConfig cfg;
    cfg.replicates = 2000;
    cfg.seed = 11;

    const auto only_baseline =
        sweep_sample_fraction(fixtures::bug_table(), fptmc::point_mass(7, 0), cfg, {1.0});
    REQUIRE(only_baseline.size() == 1);
    CHECK(only_baseline[0].fraction == 1.0);
    CHECK(only_baseline[0].sd_increase_percent == 0.0);

    const auto with_prepended =
        sweep_sample_fraction(fixtures::bug_table(), fptmc::point_mass(7, 0), cfg, {0.5});
    REQUIRE(with_prepended.size() == 2);
    CHECK(with_prepended[0].fraction == 1.0);
    CHECK(with_prepended[0].sd_increase_percent == 0.0);
    CHECK(with_prepended[1].fraction == 0.5);
}

TEST_CASE("sweep uses disjoint streams and matches standalone runs") {
    McConfig cfg;
    cfg.replicates = 3000;
    cfg.seed = 12;
    const auto points =
        sweep_sample_fraction(fixtures::bug_table(), fptmc::point_mass(7, 0), cfg, {1.0, 0.5});
    REQUIRE(points.size() == 2);

    McConfig second = cfg;
    second.fraction = 0.5;
    second.stream_offset = cfg.replicates;
    const McResult standalone = run_mc(fixtures::bug_table(), fptmc::point_mass(7, 0), second);
    CHECK(points[1].result.mean_L == standalone.mean_L);
    CHECK(points[1].result.var_L == standalone.var_L);
}

TEST_CASE("sd increases monotonically as the sample fraction shrinks") {
    McConfig cfg;
    cfg.replicates = 20000;
    cfg.seed = 13;
    const auto points = sweep_sample_fraction(fixtures::bug_table(), fptmc::point_mass(7, 0),
                                              cfg, {1.0, 0.5, 0.2, 0.1});
    REQUIRE(points.size() == 4);
    for (std::size_t i = 1; i < points.size(); ++i) {
        CHECK(points[i].sd_increase_percent > points[i - 1].sd_increase_percent);
    }
}

TEST_CASE("sweep rejects bad fraction lists") {
    McConfig cfg;
    cfg.replicates = 100;
    CHECK_THROWS_AS(
        sweep_sample_fraction(fixtures::bug_table(), fptmc::point_mass(7, 0), cfg, {}),
        std::invalid_argument);
    CHECK_THROWS_AS(
        sweep_sample_fraction(fixtures::bug_table(), fptmc::point_mass(7, 0), cfg, {1.5}),
        std::invalid_argument);
}
