#include "fptmc/sampling.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "fptmc/errors.hpp"

namespace fptmc {

std::uint64_t TransitionCountTable::row_total(std::size_t i) const {
    std::uint64_t n = 0;
    for (const std::uint64_t c : counts[i]) {
        n += c;
    }
    return n;
}

std::vector<double> TransitionCountTable::row_probabilities(std::size_t i) const {
    const double n = static_cast<double>(row_total(i));
    std::vector<double> p(counts[i].size());
    for (std::size_t j = 0; j < p.size(); ++j) {
        p[j] = static_cast<double>(counts[i][j]) / n;
    }
    return p;
}

AbsorbingChainSpec TransitionCountTable::point_estimate(std::vector<double> start) const {
    const std::size_t k = size();
    AbsorbingChainSpec spec;
    spec.transitions = Matrix(k);
    for (std::size_t i = 0; i < k; ++i) {
        const double n = static_cast<double>(row_total(i));
        for (std::size_t j = 0; j < k; ++j) {
            spec.transitions(i, j) = static_cast<double>(counts[i][j]) / n;
        }
    }
    spec.start = start.empty() ? point_mass(k, 0) : std::move(start);
    spec.state_labels = state_labels;
    return spec;
}

TransitionCountTable TransitionCountTable::scaled(std::uint64_t factor) const {
    TransitionCountTable out = *this;
    for (auto& row : out.counts) {
        for (auto& c : row) {
            c *= factor;
        }
    }
    return out;
}

std::vector<std::string> validate_table(const TransitionCountTable& table) {
    std::vector<std::string> violations;
    const std::size_t k = table.size();

    if (k == 0) {
        violations.push_back("table has no states");
        return violations;
    }
    if (table.state_labels.size() != k) {
        violations.push_back("table has " + std::to_string(table.state_labels.size()) +
                             " labels for " + std::to_string(k) + " rows");
        return violations;
    }
    for (std::size_t i = 0; i < k; ++i) {
        if (table.counts[i].size() != k + 1) {
            violations.push_back("row " + std::to_string(i) + " has " +
                                 std::to_string(table.counts[i].size()) + " counts, expected " +
                                 std::to_string(k + 1));
            return violations;
        }
        if (table.row_total(i) == 0) {
            violations.push_back("row " + std::to_string(i) + " (" + table.state_labels[i] +
                                 ") has no observed transitions");
        }
    }
    if (!violations.empty()) {
        return violations;
    }

    // Absorption must be reachable from every state through positive counts.
    std::vector<char> absorbs(k, 0);
    for (std::size_t i = 0; i < k; ++i) {
        absorbs[i] = table.counts[i][k] > 0 ? 1 : 0;
    }
    for (std::size_t round = 0; round < k; ++round) {
        bool changed = false;
        for (std::size_t i = 0; i < k; ++i) {
            if (absorbs[i]) {
                continue;
            }
            for (std::size_t j = 0; j < k; ++j) {
                if (table.counts[i][j] > 0 && absorbs[j]) {
                    absorbs[i] = 1;
                    changed = true;
                    break;
                }
            }
        }
        if (!changed) {
            break;
        }
    }
    for (std::size_t i = 0; i < k; ++i) {
        if (!absorbs[i]) {
            violations.push_back("row " + std::to_string(i) + " (" + table.state_labels[i] +
                                 "): absorption unreachable");
        }
    }
    return violations;
}

namespace {

// Inversion from zero; requires n·p modest so (1-p)^n stays normal.
std::uint64_t binomial_inversion_small(std::uint64_t n, double p, RngStream& rng) {
    const double q = 1.0 - p;
    const double s = p / q;
    double pmf = std::pow(q, static_cast<double>(n));
    double u = rng.next_double();
    std::uint64_t x = 0;
    while (u >= pmf) {
        u -= pmf;
        ++x;
        if (x > n) {
            return n;  // residual rounding mass
        }
        pmf *= s * (static_cast<double>(n - x) + 1.0) / static_cast<double>(x);
    }
    return x;
}

// Inversion enumerated outward from the mode, where the mass lives;
// expected O(sqrt(n·p·q)) steps and no q^n underflow.
std::uint64_t binomial_inversion_mode(std::uint64_t n, double p, RngStream& rng) {
    const double q = 1.0 - p;
    const double nd = static_cast<double>(n);
    const auto mode = static_cast<std::uint64_t>((nd + 1.0) * p);
    const double md = static_cast<double>(mode);

    const double log_pmf_mode = std::lgamma(nd + 1.0) - std::lgamma(md + 1.0) -
                                std::lgamma(nd - md + 1.0) + md * std::log(p) +
                                (nd - md) * std::log1p(-p);
    const double pmf_mode = std::exp(log_pmf_mode);

    double u = rng.next_double();
    if (u < pmf_mode) {
        return mode;
    }
    u -= pmf_mode;

    const double ratio_up = p / q;
    std::uint64_t lo = mode;
    std::uint64_t hi = mode;
    double pmf_lo = pmf_mode;
    double pmf_hi = pmf_mode;
    while (lo > 0 || hi < n) {
        if (hi < n) {
            pmf_hi *= ratio_up * static_cast<double>(n - hi) / static_cast<double>(hi + 1);
            ++hi;
            if (u < pmf_hi) {
                return hi;
            }
            u -= pmf_hi;
        }
        if (lo > 0) {
            pmf_lo *= static_cast<double>(lo) / (ratio_up * static_cast<double>(n - lo + 1));
            --lo;
            if (u < pmf_lo) {
                return lo;
            }
            u -= pmf_lo;
        }
    }
    return mode;  // residual rounding mass
}

}  // namespace

std::uint64_t sample_binomial(std::uint64_t n, double p, RngStream& rng) {
    if (n == 0 || p <= 0.0) {
        return 0;
    }
    if (p >= 1.0) {
        return n;
    }
    const bool flipped = p > 0.5;
    const double ps = flipped ? 1.0 - p : p;
    std::uint64_t x;
    if (static_cast<double>(n) * ps < 30.0) {
        x = binomial_inversion_small(n, ps, rng);
    } else {
        x = binomial_inversion_mode(n, ps, rng);
    }
    return flipped ? n - x : x;
}

std::vector<std::uint64_t> sample_row(const std::vector<double>& probabilities, std::uint64_t n,
                                      RngStream& rng) {
    double total = 0.0;
    for (const double p : probabilities) {
        if (p < 0.0) {
            throw InvalidProbabilityVector("probability entry " + std::to_string(p) +
                                           " is negative");
        }
        total += p;
    }
    if (std::fabs(total - 1.0) > 1e-9) {
        throw InvalidProbabilityVector("probabilities sum to " + std::to_string(total));
    }
    if (n == 0) {
        throw std::invalid_argument("sample_row needs at least one trial");
    }

    const std::size_t m = probabilities.size();
    std::vector<std::uint64_t> counts(m, 0);
    std::uint64_t remaining = n;
    double mass_left = 1.0;
    for (std::size_t j = 0; j + 1 < m; ++j) {
        if (remaining == 0) {
            break;
        }
        double conditional = mass_left > 0.0 ? probabilities[j] / mass_left : 1.0;
        if (conditional > 1.0) {
            conditional = 1.0;
        }
        counts[j] = sample_binomial(remaining, conditional, rng);
        remaining -= counts[j];
        mass_left -= probabilities[j];
    }
    counts[m - 1] = remaining;
    return counts;
}

AbsorbingChainSpec sample_matrix(const TransitionCountTable& table, double fraction,
                                 RngStream& rng, std::vector<double> start) {
    if (!(fraction > 0.0 && fraction <= 1.0)) {
        throw std::invalid_argument("fraction must be in (0, 1]");
    }
    const std::size_t k = table.size();
    AbsorbingChainSpec spec;
    spec.transitions = Matrix(k);
    for (std::size_t i = 0; i < k; ++i) {
        const auto n = static_cast<double>(table.row_total(i));
        const std::uint64_t effective =
            std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::llround(fraction * n)));
        const std::vector<std::uint64_t> drawn =
            sample_row(table.row_probabilities(i), effective, rng);
        for (std::size_t j = 0; j < k; ++j) {
            spec.transitions(i, j) =
                static_cast<double>(drawn[j]) / static_cast<double>(effective);
        }
    }
    spec.start = start.empty() ? point_mass(k, 0) : std::move(start);
    spec.state_labels = table.state_labels;
    return spec;
}

}  // namespace fptmc
