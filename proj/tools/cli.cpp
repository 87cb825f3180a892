#include "cli.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "fptmc/chain.hpp"
#include "fptmc/errors.hpp"
#include "fptmc/io.hpp"
#include "fptmc/mc.hpp"
#include "fptmc/oracle.hpp"
#include "fptmc/rng.hpp"
#include "fptmc/sampling.hpp"

namespace fptmc::cli {

namespace {

using nlohmann::json;

struct InputReadError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fixed3(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

std::string compact(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

std::string full(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string pad(const std::string& s, std::size_t width = 10) {
    return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

struct CommonOpts {
    std::string input;
    std::string format = "generic";
    std::string start;
    std::string output_format = "table";
    std::string out_path;
};

void add_common(CLI::App* cmd, CommonOpts& opts, const std::string& default_output) {
    opts.output_format = default_output;
    cmd->add_option("--input", opts.input, "input file")->required();
    cmd->add_option("--format", opts.format, "input format")
        ->check(CLI::IsMember({"generic", "stage"}))
        ->capture_default_str();
    cmd->add_option("--start", opts.start,
                    "start state label or comma-separated weight vector (default: first state)");
    cmd->add_option("--output-format", opts.output_format, "report format")
        ->check(CLI::IsMember({"table", "json", "csv"}))
        ->capture_default_str();
    cmd->add_option("--out", opts.out_path, "write the report to a file instead of stdout");
}

TransitionCountTable load_table(const CommonOpts& opts) {
    std::ifstream in(opts.input, std::ios::binary);
    if (!in) {
        throw InputReadError("cannot read input file '" + opts.input + "'");
    }
    std::ostringstream text;
    text << in.rdbuf();
    if (opts.format == "stage") {
        return stage_table_to_counts(parse_stage_table(text.str()));
    }
    return parse_counts(text.str());
}

std::vector<double> resolve_start(const std::string& arg, const TransitionCountTable& table) {
    const std::size_t k = table.size();
    if (arg.empty()) {
        return point_mass(k, 0);
    }
    for (std::size_t i = 0; i < k; ++i) {
        if (table.state_labels[i] == arg) {
            return point_mass(k, i);
        }
    }
    std::vector<double> weights;
    std::stringstream parts(arg);
    std::string piece;
    while (std::getline(parts, piece, ',')) {
        try {
            std::size_t used = 0;
            const double w = std::stod(piece, &used);
            if (used != piece.size()) {
                throw std::invalid_argument(piece);
            }
            weights.push_back(w);
        } catch (const std::exception&) {
            throw ValidationError({"start '" + arg + "' is neither a state label nor a " +
                                   "comma-separated weight vector"});
        }
    }
    if (weights.size() != k) {
        throw ValidationError({"start weight vector has " + std::to_string(weights.size()) +
                               " entries for " + std::to_string(k) + " states"});
    }
    double sum = 0.0;
    for (const double w : weights) {
        if (w < 0.0) {
            throw ValidationError({"start weights must be nonnegative"});
        }
        sum += w;
    }
    if (!(sum > 0.0)) {
        throw ValidationError({"start weights must not all be zero"});
    }
    for (double& w : weights) {
        w /= sum;
    }
    return weights;
}

void emit(const CommonOpts& opts, const std::string& report, std::ostream& out) {
    if (opts.out_path.empty()) {
        out << report;
        return;
    }
    std::ofstream file(opts.out_path, std::ios::binary);
    if (!file) {
        throw InputReadError("cannot write output file '" + opts.out_path + "'");
    }
    file << report;
}

json analytic_json(const MomentPair& moments) {
    return json{{"mean", moments.mean}, {"variance", moments.variance}, {"sd", moments.sd()}};
}

void run_analytic(const CommonOpts& opts, std::ostream& out) {
    const TransitionCountTable table = load_table(opts);
    const AbsorbingChainSpec spec = table.point_estimate(resolve_start(opts.start, table));
    const MomentPair moments = passage_time_moments(spec);

    std::string report;
    if (opts.output_format == "json") {
        report = analytic_json(moments).dump(2) + "\n";
    } else if (opts.output_format == "csv") {
        report = "mean,variance,sd\n" + full(moments.mean) + "," + full(moments.variance) + "," +
                 full(moments.sd()) + "\n";
    } else {
        report = "mean      " + fixed3(moments.mean) + "\n" +
                 "variance  " + fixed3(moments.variance) + "\n" +
                 "sd        " + fixed3(moments.sd()) + "\n";
    }
    emit(opts, report, out);
}

struct McOpts {
    std::uint64_t replicates = 100000;
    std::uint64_t seed = 0;
    double fraction = 1.0;
    double max_skip_ratio = 0.01;
    unsigned workers = 1;
};

void add_mc(CLI::App* cmd, McOpts& opts, bool with_fraction) {
    cmd->add_option("--replicates", opts.replicates, "number of Monte Carlo replicates")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--seed", opts.seed, "random seed")->capture_default_str();
    if (with_fraction) {
        cmd->add_option("--fraction", opts.fraction, "effective sample-size fraction in (0, 1]")
            ->check(CLI::Range(std::nextafter(0.0, 1.0), 1.0))
            ->capture_default_str();
    }
    cmd->add_option("--max-skip-ratio", opts.max_skip_ratio,
                    "maximum tolerated proportion of skipped replicates")
        ->check(CLI::Range(0.0, std::nextafter(1.0, 0.0)))
        ->capture_default_str();
    cmd->add_option("--workers", opts.workers, "worker threads")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
}

McConfig to_config(const McOpts& opts) {
    McConfig cfg;
    cfg.replicates = opts.replicates;
    cfg.seed = opts.seed;
    cfg.fraction = opts.fraction;
    cfg.max_skip_ratio = opts.max_skip_ratio;
    cfg.workers = opts.workers;
    return cfg;
}

json mc_json(const McResult& result, const McOpts& opts, double fraction) {
    // Deliberately excludes the worker count: results are identical for any
    // worker count and so is the report.
    return json{{"analytic", nullptr},
                {"fraction", fraction},
                {"mean_L", result.mean_L},
                {"mean_of_variances", result.mean_of_variances},
                {"replicates", opts.replicates},
                {"replicates_skipped", result.replicates_skipped},
                {"replicates_used", result.replicates_used},
                {"sd_L", result.sd_L()},
                {"seed", opts.seed},
                {"var_L", result.var_L},
                {"variance_of_means", result.variance_of_means}};
}

void run_montecarlo(const CommonOpts& opts, const McOpts& mc_opts, std::ostream& out) {
    const TransitionCountTable table = load_table(opts);
    const std::vector<double> start = resolve_start(opts.start, table);
    const McResult result = run_mc(table, start, to_config(mc_opts));
    const MomentPair analytic = passage_time_moments(table.point_estimate(start));

    std::string report;
    if (opts.output_format == "json") {
        json j = mc_json(result, mc_opts, mc_opts.fraction);
        j["analytic"] = analytic_json(analytic);
        report = j.dump(2) + "\n";
    } else if (opts.output_format == "csv") {
        report = "f,mean_L,sd_L,var_L,mean_of_variances,variance_of_means,used,skipped\n" +
                 full(mc_opts.fraction) + "," + full(result.mean_L) + "," + full(result.sd_L()) +
                 "," + full(result.var_L) + "," + full(result.mean_of_variances) + "," +
                 full(result.variance_of_means) + "," + std::to_string(result.replicates_used) +
                 "," + std::to_string(result.replicates_skipped) + "\n";
    } else {
        report = "                    calculated   monte carlo\n";
        report += "expected value      " + pad(fixed3(analytic.mean)) + "   " +
                  pad(fixed3(result.mean_L)) + "\n";
        report += "standard deviation  " + pad(fixed3(analytic.sd())) + "   " +
                  pad(fixed3(result.sd_L())) + "\n\n";
        report += "variance of passage time " + fixed3(result.var_L) +
                  " = mean of variances " + fixed3(result.mean_of_variances) +
                  " + variance of means " + fixed3(result.variance_of_means) + "\n";
        report += "replicates " + std::to_string(result.replicates_used) + " used, " +
                  std::to_string(result.replicates_skipped) + " skipped (seed " +
                  std::to_string(mc_opts.seed) + ", fraction " + compact(mc_opts.fraction) +
                  ")\n";
    }
    emit(opts, report, out);
}

void run_sweep(const CommonOpts& opts, const McOpts& mc_opts, const std::string& fractions_arg,
               std::ostream& out) {
    const TransitionCountTable table = load_table(opts);
    const std::vector<double> start = resolve_start(opts.start, table);

    std::vector<double> fractions;
    std::stringstream parts(fractions_arg);
    std::string piece;
    while (std::getline(parts, piece, ',')) {
        try {
            std::size_t used = 0;
            const double f = std::stod(piece, &used);
            if (used != piece.size() || !(f > 0.0 && f <= 1.0)) {
                throw std::invalid_argument(piece);
            }
            fractions.push_back(f);
        } catch (const std::exception&) {
            throw ValidationError({"fraction '" + piece + "' is not a number in (0, 1]"});
        }
    }
    if (fractions.empty()) {
        throw ValidationError({"--fractions names no fractions"});
    }

    const std::vector<SweepPoint> points =
        sweep_sample_fraction(table, start, to_config(mc_opts), fractions);

    std::string report;
    if (opts.output_format == "json") {
        json arr = json::array();
        for (const SweepPoint& p : points) {
            json j = mc_json(p.result, mc_opts, p.fraction);
            j.erase("analytic");
            j["sd_increase_percent"] = p.sd_increase_percent;
            arr.push_back(std::move(j));
        }
        report = arr.dump(2) + "\n";
    } else if (opts.output_format == "table") {
        report = "       f       mean_L         sd_L   sd_increase%   skipped\n";
        for (const SweepPoint& p : points) {
            char buf[160];
            std::snprintf(buf, sizeof buf, "%8g %12.3f %12.3f %14.3f %9llu\n", p.fraction,
                          p.result.mean_L, p.result.sd_L(), p.sd_increase_percent,
                          static_cast<unsigned long long>(p.result.replicates_skipped));
            report += buf;
        }
    } else {
        report = "f,mean_L,sd_L,sd_increase_percent,skipped\n";
        for (const SweepPoint& p : points) {
            report += full(p.fraction) + "," + full(p.result.mean_L) + "," +
                      full(p.result.sd_L()) + "," + full(p.sd_increase_percent) + "," +
                      std::to_string(p.result.replicates_skipped) + "\n";
        }
    }
    emit(opts, report, out);
}

void run_simulate(const CommonOpts& opts, std::uint64_t trajectories, std::uint64_t seed,
                  std::ostream& out) {
    const TransitionCountTable table = load_table(opts);
    const std::vector<double> start = resolve_start(opts.start, table);
    const AbsorbingChainSpec spec = table.point_estimate(start);
    const MomentPair analytic = passage_time_moments(spec);

    double mean = 0.0;
    double m2 = 0.0;
    for (std::uint64_t i = 0; i < trajectories; ++i) {
        RngStream rng(seed, i);
        const auto steps = static_cast<double>(simulate_trajectory(spec, rng));
        const double delta = steps - mean;
        mean += delta / static_cast<double>(i + 1);
        m2 += delta * (steps - mean);
    }
    const double sample_var =
        trajectories > 1 ? m2 / static_cast<double>(trajectories - 1) : 0.0;
    const double sd = std::sqrt(sample_var);
    const double standard_error = sd / std::sqrt(static_cast<double>(trajectories));

    std::string report;
    if (opts.output_format == "json") {
        const json j{{"analytic", analytic_json(analytic)},
                     {"empirical_mean", mean},
                     {"empirical_sd", sd},
                     {"standard_error", standard_error},
                     {"trajectories", trajectories},
                     {"seed", seed}};
        report = j.dump(2) + "\n";
    } else if (opts.output_format == "csv") {
        report = "trajectories,empirical_mean,empirical_sd,standard_error\n" +
                 std::to_string(trajectories) + "," + full(mean) + "," + full(sd) + "," +
                 full(standard_error) + "\n";
    } else {
        report = "trajectories    " + std::to_string(trajectories) + "\n" +
                 "empirical mean  " + fixed3(mean) + " (standard error " +
                 fixed3(standard_error) + ")\n" +
                 "empirical sd    " + fixed3(sd) + "\n" +
                 "analytic mean   " + fixed3(analytic.mean) + "\n" +
                 "analytic sd     " + fixed3(analytic.sd()) + "\n";
    }
    emit(opts, report, out);
}

void run_validate(const CommonOpts& opts, std::ostream& out) {
    const TransitionCountTable table = load_table(opts);
    std::uint64_t transitions = 0;
    for (std::size_t i = 0; i < table.size(); ++i) {
        transitions += table.row_total(i);
    }
    out << "valid: " << table.size() << " states, " << transitions
        << " observed transitions\n";
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"passage-time statistics for absorbing Markov chains estimated from counts"};
    app.name("fptmc");
    app.require_subcommand(1);

    CommonOpts analytic_opts;
    CLI::App* analytic_cmd = app.add_subcommand(
        "analytic", "exact moments of the passage time from the point estimates");
    add_common(analytic_cmd, analytic_opts, "table");

    CommonOpts mc_common;
    McOpts mc_opts;
    CLI::App* mc_cmd = app.add_subcommand(
        "montecarlo", "resampling estimate of the moments with sampling uncertainty");
    add_common(mc_cmd, mc_common, "table");
    add_mc(mc_cmd, mc_opts, true);

    CommonOpts sweep_common;
    McOpts sweep_opts;
    std::string fractions = "1,0.5,0.2,0.1";
    CLI::App* sweep_cmd =
        app.add_subcommand("sweep", "sample-size sensitivity sweep over fractions");
    add_common(sweep_cmd, sweep_common, "csv");
    add_mc(sweep_cmd, sweep_opts, false);
    sweep_cmd->add_option("--fractions", fractions, "comma-separated fractions in (0, 1]")
        ->capture_default_str();

    CommonOpts sim_common;
    std::uint64_t trajectories = 10000;
    std::uint64_t sim_seed = 0;
    CLI::App* sim_cmd = app.add_subcommand(
        "simulate", "empirical passage-time moments from simulated trajectories");
    add_common(sim_cmd, sim_common, "table");
    sim_cmd->add_option("--trajectories", trajectories, "number of trajectories")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sim_cmd->add_option("--seed", sim_seed, "random seed")->capture_default_str();

    CommonOpts validate_opts;
    CLI::App* validate_cmd =
        app.add_subcommand("validate", "parse and validate an input file, reporting violations");
    add_common(validate_cmd, validate_opts, "table");

    analytic_cmd->callback([&] { run_analytic(analytic_opts, out); });
    mc_cmd->callback([&] { run_montecarlo(mc_common, mc_opts, out); });
    sweep_cmd->callback([&] { run_sweep(sweep_common, sweep_opts, fractions, out); });
    sim_cmd->callback([&] { run_simulate(sim_common, trajectories, sim_seed, out); });
    validate_cmd->callback([&] { run_validate(validate_opts, out); });

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("fptmc");
    for (const std::string& a : args) {
        argv.push_back(a.c_str());
    }

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
        return 0;
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    } catch (const fptmc::ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const InputReadError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        err << "validation error: " << e.what() << "\n";
        return 3;
    } catch (const SingularSystem& e) {
        err << "numerical error: " << e.what() << "\n";
        return 4;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << "\n";
        return 4;
    } catch (const InvalidProbabilityVector& e) {
        err << "numerical error: " << e.what() << "\n";
        return 4;
    } catch (const TrajectoryOverflow& e) {
        err << "numerical error: " << e.what() << "\n";
        return 4;
    } catch (const TooManySkips& e) {
        err << "monte carlo error: " << e.what() << "\n";
        return 5;
    } catch (const InsufficientReplicates& e) {
        err << "monte carlo error: " << e.what() << "\n";
        return 5;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace fptmc::cli
