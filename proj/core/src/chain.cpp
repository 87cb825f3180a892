#include "fptmc/chain.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "fptmc/errors.hpp"
#include "fptmc/matrix.hpp"

namespace fptmc {

double MomentPair::sd() const { return std::sqrt(variance); }

std::vector<double> point_mass(std::size_t k, std::size_t state) {
    std::vector<double> v(k, 0.0);
    v[state] = 1.0;
    return v;
}

namespace {

Matrix identity_minus(const Matrix& u) {
    const std::size_t n = u.size();
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            m(i, j) = (i == j ? 1.0 : 0.0) - u(i, j);
        }
    }
    return m;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += a[i] * b[i];
    }
    return s;
}

std::string state_name(const AbsorbingChainSpec& spec, std::size_t i) {
    std::string out = "row " + std::to_string(i);
    if (i < spec.state_labels.size() && !spec.state_labels[i].empty()) {
        out += " (" + spec.state_labels[i] + ")";
    }
    return out;
}

}  // namespace

Matrix fundamental_matrix(const AbsorbingChainSpec& spec) {
    const std::size_t k = spec.size();
    const LuSolver lu(identity_minus(spec.transitions));
    Matrix n(k);
    std::vector<double> rhs(k, 0.0);
    for (std::size_t j = 0; j < k; ++j) {
        rhs[j] = 1.0;
        const std::vector<double> col = lu.solve(rhs);
        rhs[j] = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            n(i, j) = col[i];
        }
    }
    // Operational absorbing check: a genuine fundamental matrix has finite
    // nonnegative entries and at least one expected visit to the home state.
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            if (!std::isfinite(n(i, j)) || n(i, j) < -1e-9) {
                throw SingularSystem("fundamental matrix entry (" + std::to_string(i) + ", " +
                                     std::to_string(j) + ") is not a visit count; no path to "
                                     "absorption from some state");
            }
        }
        if (n(i, i) < 1.0 - 1e-9) {
            throw SingularSystem("fundamental matrix diagonal " + std::to_string(i) +
                                 " fell below one");
        }
    }
    return n;
}

MomentPair passage_time_moments(const AbsorbingChainSpec& spec) {
    const std::size_t k = spec.size();
    const LuSolver lu(identity_minus(spec.transitions));

    // y = N·1 (expected steps per start state), z = N·y.
    const std::vector<double> y = lu.solve(std::vector<double>(k, 1.0));
    const std::vector<double> z = lu.solve(y);

    const double mean = dot(spec.start, y);
    double second = 0.0;  // v'N(2N - I)1 = v'(2z - y)
    for (std::size_t i = 0; i < k; ++i) {
        second += spec.start[i] * (2.0 * z[i] - y[i]);
    }
    double variance = second - mean * mean;

    if (!std::isfinite(mean) || !std::isfinite(variance)) {
        throw NumericalError("passage-time moments are not finite");
    }
    if (variance < 0.0) {
        if (variance < -kVarianceSlack) {
            throw NumericalError("passage-time variance " + std::to_string(variance) +
                                 " is negative beyond cancellation slack");
        }
        variance = 0.0;
    }
    return MomentPair{mean, variance};
}

std::vector<std::string> validate_spec(const AbsorbingChainSpec& spec) {
    std::vector<std::string> violations;
    const std::size_t k = spec.size();

    if (k == 0) {
        violations.push_back("chain has no transient states");
        return violations;
    }
    if (spec.start.size() != k) {
        violations.push_back("start distribution has " + std::to_string(spec.start.size()) +
                             " entries for " + std::to_string(k) + " states");
        return violations;
    }
    if (!spec.state_labels.empty() && spec.state_labels.size() != k) {
        violations.push_back("state_labels has " + std::to_string(spec.state_labels.size()) +
                             " entries for " + std::to_string(k) + " states");
    }

    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            const double p = spec.transitions(i, j);
            if (!(p >= 0.0 && p <= 1.0)) {
                violations.push_back(state_name(spec, i) + ": entry to state " +
                                     std::to_string(j) + " is " + std::to_string(p) +
                                     ", outside [0, 1]");
            }
        }
        if (spec.transitions.row_sum(i) > 1.0 + kRowSumTolerance) {
            violations.push_back(state_name(spec, i) + ": row sum " +
                                 std::to_string(spec.transitions.row_sum(i)) + " exceeds 1");
        }
    }

    double start_sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        if (spec.start[i] < 0.0) {
            violations.push_back("start distribution entry " + std::to_string(i) + " is " +
                                 std::to_string(spec.start[i]) + ", negative");
        }
        start_sum += spec.start[i];
    }
    if (std::fabs(start_sum - 1.0) > kRowSumTolerance) {
        violations.push_back("start distribution sums to " + std::to_string(start_sum));
    }

    if (!violations.empty()) {
        return violations;
    }

    // Reachability of absorption through positive entries; fixpoint over at
    // most k rounds.
    std::vector<char> absorbs(k, 0);
    for (std::size_t i = 0; i < k; ++i) {
        absorbs[i] = spec.absorption_probability(i) > kRowSumTolerance ? 1 : 0;
    }
    for (std::size_t round = 0; round < k; ++round) {
        bool changed = false;
        for (std::size_t i = 0; i < k; ++i) {
            if (absorbs[i]) {
                continue;
            }
            for (std::size_t j = 0; j < k; ++j) {
                if (spec.transitions(i, j) > 0.0 && absorbs[j]) {
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
            bool has_exit = false;
            for (std::size_t j = 0; j < k; ++j) {
                if (j != i && spec.transitions(i, j) > 0.0) {
                    has_exit = true;
                    break;
                }
            }
            if (has_exit) {
                violations.push_back(state_name(spec, i) +
                                     ": absorption unreachable through any successor");
            } else {
                violations.push_back(state_name(spec, i) +
                                     ": no absorption mass and no exit; absorption unreachable");
            }
        }
    }
    return violations;
}

}  // namespace fptmc
