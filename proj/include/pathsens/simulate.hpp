#pragma once

#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "pathsens/params.hpp"
#include "pathsens/rng.hpp"
#include "pathsens/trajectory.hpp"

// Trajectory generation at the stationary regime.  Drivers stream every
// post-burn-in transition to the attached hooks exactly once; trajectory
// storage is optional so long runs need no memory.

namespace pathsens {

struct AbsorbingStateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SsaOptions {
    double burn_in_time = 0.0;
    double horizon_time = std::numeric_limits<double>::infinity();
    std::size_t max_jumps = std::numeric_limits<std::size_t>::max();
    bool record = false;

    void validate() const {
        if (burn_in_time < 0.0) throw std::invalid_argument("ssa: negative burn-in");
        if (burn_in_time >= horizon_time &&
            max_jumps == std::numeric_limits<std::size_t>::max())
            throw std::invalid_argument("ssa: burn-in must be smaller than the horizon");
    }
};

template <class State>
struct SsaRunResult {
    std::size_t jumps = 0;       // total jumps simulated (incl. burn-in)
    double total_time = 0.0;     // total simulated time
    double sampled_time = 0.0;   // post-burn-in time seen by hooks
    JumpTrajectory<State> trajectory;  // filled only when record is on
};

// Gillespie SSA.  Hook contract:
//   hook(state, rates, lambda, event, dt)
// called before the jump executes, with the same rate vector used for event
// selection.  Waiting times are Exp(lambda) by inverse transform; the event
// is picked by cumulative-rate inversion (first event reaching the
// threshold).
template <class Model, class... Hooks>
SsaRunResult<typename Model::State> run_ssa(const Model& model, typename Model::State state,
                                            const ParameterVector& theta, RngStream& rng,
                                            const SsaOptions& opt, Hooks&... hooks) {
    opt.validate();
    SsaRunResult<typename Model::State> result;
    std::vector<double> rates;
    double t = 0.0;
    while (t < opt.horizon_time && result.jumps < opt.max_jumps) {
        model.rates(state, theta, rates);
        double lambda = 0.0;
        for (double c : rates) lambda += c;
        if (lambda <= 0.0)
            throw AbsorbingStateError("ssa: total rate vanished (absorbing state reached)");
        const double dt = rng.exponential(lambda);
        // cumulative-rate inversion
        const double target = rng.uniform() * lambda;
        std::size_t event = rates.size() - 1;
        double acc = 0.0;
        for (std::size_t k = 0; k < rates.size(); ++k) {
            acc += rates[k];
            if (rates[k] > 0.0 && acc >= target) {
                event = k;
                break;
            }
        }
        if (t >= opt.burn_in_time) {
            (hooks(state, rates, lambda, event, dt), ...);
            result.sampled_time += dt;
            if (opt.record) result.trajectory.push(state, dt);
        }
        model.apply(state, event, rng);
        t += dt;
        ++result.jumps;
    }
    result.total_time = t;
    return result;
}

struct ChainOptions {
    std::size_t burn_in_steps = 0;
    std::size_t steps = 0;
    bool record = false;

    void validate() const {
        if (burn_in_steps >= steps)
            throw std::invalid_argument("chain: burn-in must be smaller than the horizon");
    }
};

template <class State>
struct ChainRunResult {
    std::size_t steps = 0;
    ChainTrajectory<State> trajectory;
    State final_state;
};

// Generic one-step sampling for discrete-time chain models.  Hook contract:
//   hook(prev, next)
template <class Model, class... Hooks>
ChainRunResult<typename Model::State> run_chain(const Model& model,
                                                typename Model::State state,
                                                const ParameterVector& theta, RngStream& rng,
                                                const ChainOptions& opt, Hooks&... hooks) {
    opt.validate();
    ChainRunResult<typename Model::State> result;
    for (std::size_t i = 0; i < opt.steps; ++i) {
        typename Model::State next = model.step(state, theta, rng);
        if (i >= opt.burn_in_steps) {
            (hooks(static_cast<const typename Model::State&>(state),
                   static_cast<const typename Model::State&>(next)),
             ...);
            if (opt.record) {
                if (result.trajectory.states.empty()) result.trajectory.states.push_back(state);
                result.trajectory.states.push_back(next);
            }
        }
        state = std::move(next);
        ++result.steps;
    }
    result.final_state = std::move(state);
    return result;
}

}  // namespace pathsens
