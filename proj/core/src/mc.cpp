#include "fptmc/mc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "fptmc/errors.hpp"

namespace fptmc {

double McResult::sd_L() const { return std::sqrt(var_L); }

namespace {

void check_config(const McConfig& cfg) {
    if (cfg.replicates < 1) {
        throw std::invalid_argument("replicates must be at least 1");
    }
    if (!(cfg.fraction > 0.0 && cfg.fraction <= 1.0)) {
        throw std::invalid_argument("fraction must be in (0, 1]");
    }
    if (!(cfg.max_skip_ratio >= 0.0 && cfg.max_skip_ratio < 1.0)) {
        throw std::invalid_argument("max_skip_ratio must be in [0, 1)");
    }
    if (cfg.workers < 1) {
        throw std::invalid_argument("workers must be at least 1");
    }
}

}  // namespace

McResult run_mc(const TransitionCountTable& table, const std::vector<double>& start,
                const McConfig& cfg) {
    check_config(cfg);
    if (const auto violations = validate_table(table); !violations.empty()) {
        throw ValidationError(violations);
    }
    if (start.size() != table.size()) {
        throw std::invalid_argument("start distribution length does not match table");
    }

    const std::uint64_t replicates = cfg.replicates;
    std::vector<double> means(replicates);
    std::vector<double> variances(replicates);
    std::vector<char> skipped(replicates, 0);

    const auto worker = [&](std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t j = begin; j < end; ++j) {
            RngStream rng(cfg.seed, cfg.stream_offset + j);
            try {
                const AbsorbingChainSpec realization =
                    sample_matrix(table, cfg.fraction, rng, start);
                const MomentPair moments = passage_time_moments(realization);
                means[j] = moments.mean;
                variances[j] = moments.variance;
            } catch (const SingularSystem&) {
                skipped[j] = 1;
            } catch (const NumericalError&) {
                skipped[j] = 1;
            }
        }
    };

    const auto workers =
        static_cast<std::uint64_t>(std::min<std::uint64_t>(cfg.workers, replicates));
    if (workers <= 1) {
        worker(0, replicates);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::uint64_t w = 0; w < workers; ++w) {
            const std::uint64_t begin = replicates * w / workers;
            const std::uint64_t end = replicates * (w + 1) / workers;
            pool.emplace_back(worker, begin, end);
        }
        for (auto& t : pool) {
            t.join();
        }
    }

    // Reduction in replicate order keeps the result bitwise identical for
    // any worker count.
    McResult result;
    for (std::uint64_t j = 0; j < replicates; ++j) {
        if (skipped[j]) {
            ++result.replicates_skipped;
        }
    }
    result.replicates_used = replicates - result.replicates_skipped;

    const double ratio =
        static_cast<double>(result.replicates_skipped) / static_cast<double>(replicates);
    if (ratio > cfg.max_skip_ratio) {
        throw TooManySkips(result.replicates_skipped, replicates, cfg.max_skip_ratio,
                           cfg.fraction);
    }
    if (result.replicates_used < 2) {
        throw InsufficientReplicates("only " + std::to_string(result.replicates_used) +
                                     " usable replicates at fraction " +
                                     std::to_string(cfg.fraction) + "; need at least 2");
    }

    const double used = static_cast<double>(result.replicates_used);
    double mean_sum = 0.0;
    double variance_sum = 0.0;
    for (std::uint64_t j = 0; j < replicates; ++j) {
        if (!skipped[j]) {
            mean_sum += means[j];
            variance_sum += variances[j];
        }
    }
    result.mean_L = mean_sum / used;
    result.mean_of_variances = variance_sum / used;

    double squared_deviations = 0.0;
    for (std::uint64_t j = 0; j < replicates; ++j) {
        if (!skipped[j]) {
            const double d = means[j] - result.mean_L;
            squared_deviations += d * d;
        }
    }
    result.variance_of_means = squared_deviations / used;  // population variance
    result.var_L = result.mean_of_variances + result.variance_of_means;

    if (cfg.keep_replicates) {
        result.per_replicate.reserve(result.replicates_used);
        for (std::uint64_t j = 0; j < replicates; ++j) {
            if (!skipped[j]) {
                result.per_replicate.push_back(MomentPair{means[j], variances[j]});
            }
        }
    }
    return result;
}

std::vector<SweepPoint> sweep_sample_fraction(const TransitionCountTable& table,
                                              const std::vector<double>& start,
                                              const McConfig& cfg,
                                              std::vector<double> fractions) {
    if (fractions.empty()) {
        throw std::invalid_argument("sweep needs at least one fraction");
    }
    for (const double f : fractions) {
        if (!(f > 0.0 && f <= 1.0)) {
            throw std::invalid_argument("sweep fraction " + std::to_string(f) +
                                        " must be in (0, 1]");
        }
    }
    if (std::find(fractions.begin(), fractions.end(), 1.0) == fractions.end()) {
        fractions.insert(fractions.begin(), 1.0);
    }

    std::vector<SweepPoint> points;
    points.reserve(fractions.size());
    for (std::size_t q = 0; q < fractions.size(); ++q) {
        McConfig point_cfg = cfg;
        point_cfg.fraction = fractions[q];
        point_cfg.stream_offset =
            cfg.stream_offset + static_cast<std::uint64_t>(q) * cfg.replicates;
        // run_mc errors already name the offending fraction.
        points.push_back(SweepPoint{fractions[q], run_mc(table, start, point_cfg), 0.0});
    }

    double baseline_sd = 0.0;
    for (const auto& p : points) {
        if (p.fraction == 1.0) {
            baseline_sd = p.result.sd_L();
            break;
        }
    }
    for (auto& p : points) {
        p.sd_increase_percent = 100.0 * (p.result.sd_L() - baseline_sd) / baseline_sd;
    }
    return points;
}

}  // namespace fptmc
