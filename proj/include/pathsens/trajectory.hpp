#pragma once

#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace pathsens {

// Stationary-regime record of a jump process: visited states and the waiting
// time spent in each.
template <class State>
struct JumpTrajectory {
    std::vector<State> states;
    std::vector<double> waits;

    std::size_t size() const { return states.size(); }

    double total_time() const {
        return std::accumulate(waits.begin(), waits.end(), 0.0);
    }

    void push(const State& s, double wait) {
        if (wait <= 0.0) throw std::invalid_argument("waiting time must be > 0");
        states.push_back(s);
        waits.push_back(wait);
    }
};

// Discrete-time path sigma_0 ... sigma_M.
template <class State>
struct ChainTrajectory {
    std::vector<State> states;

    std::size_t steps() const {
        return states.empty() ? 0 : states.size() - 1;
    }
};

}  // namespace pathsens
