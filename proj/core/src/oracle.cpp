#include "fptmc/oracle.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "fptmc/errors.hpp"

namespace fptmc {

std::uint64_t simulate_trajectory(const AbsorbingChainSpec& spec, RngStream& rng) {
    const std::size_t k = spec.size();

    // Draw the starting state from the start distribution.
    std::size_t state = 0;
    {
        const double u = rng.next_double();
        double cum = 0.0;
        std::size_t last_positive = 0;
        bool found = false;
        for (std::size_t i = 0; i < k; ++i) {
            if (spec.start[i] > 0.0) {
                last_positive = i;
            }
            cum += spec.start[i];
            if (u < cum) {
                state = i;
                found = true;
                break;
            }
        }
        if (!found) {
            state = last_positive;
        }
    }

    for (std::uint64_t step = 1; step <= kTrajectoryStepCap; ++step) {
        const double u = rng.next_double();
        double cum = 0.0;
        bool moved = false;
        for (std::size_t j = 0; j < k; ++j) {
            cum += spec.transitions(state, j);
            if (u < cum) {
                state = j;
                moved = true;
                break;
            }
        }
        if (!moved) {
            return step;  // fell into the row deficit: absorbed
        }
    }
    throw TrajectoryOverflow("no absorption within " + std::to_string(kTrajectoryStepCap) +
                             " steps");
}

TruncatedMoments truncated_sum_moments(const AbsorbingChainSpec& spec, std::uint64_t horizon) {
    if (spec.size() > 8) {
        throw std::invalid_argument("truncated-sum oracle is limited to 8 states");
    }
    if (horizon < 1) {
        throw std::invalid_argument("horizon must be at least 1");
    }

    std::vector<double> occupancy = spec.start;  // v'Uᵗ as t advances
    double survival_prev = 0.0;                  // v'Uᵗ⁻¹·1
    for (const double s : occupancy) {
        survival_prev += s;
    }

    double mean = 0.0;
    double second = 0.0;
    for (std::uint64_t t = 1; t <= horizon; ++t) {
        occupancy = spec.transitions.left_multiply(occupancy);
        double survival = 0.0;
        for (const double s : occupancy) {
            survival += s;
        }
        const double pmf = std::max(0.0, survival_prev - survival);
        const double td = static_cast<double>(t);
        mean += td * pmf;
        second += td * td * pmf;
        survival_prev = survival;
    }

    TruncatedMoments out;
    out.moments = MomentPair{mean, second - mean * mean};
    out.tail_bound = survival_prev;
    out.horizon = horizon;
    return out;
}

std::uint64_t adaptive_horizon(const AbsorbingChainSpec& spec, double tail_threshold) {
    constexpr std::uint64_t kMaxHorizon = 1'000'000;
    std::vector<double> occupancy = spec.start;
    std::uint64_t steps_taken = 0;
    std::uint64_t horizon = 32;
    while (true) {
        for (; steps_taken < horizon; ++steps_taken) {
            occupancy = spec.transitions.left_multiply(occupancy);
        }
        double tail = 0.0;
        for (const double s : occupancy) {
            tail += s;
        }
        if (tail < tail_threshold || horizon >= kMaxHorizon) {
            return horizon;
        }
        horizon = std::min(kMaxHorizon, horizon * 2);
    }
}

}  // namespace fptmc
