#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "pathsens/params.hpp"
#include "pathsens/rng.hpp"

namespace pathsens::models {

// Well-mixed bistable reaction network for species X with theta =
// [k1A, k2, k3B, k4] and fixed volume Omega.  Event rates:
//   c1 = k1A x(x-1)/(2 Omega)      (x -> x+1)
//   c2 = k2  x(x-1)(x-2)/(6 Omega^2)  (x -> x-1)
//   c3 = k3B Omega                 (x -> x+1)
//   c4 = k4  x                     (x -> x-1)

inline std::array<double, 4> schlogl_event_rates(std::int64_t x,
                                                 const ParameterVector& theta,
                                                 double omega) {
    if (x < 0) throw std::invalid_argument("schlogl: molecule count must be >= 0");
    if (theta.size() != 4) throw std::invalid_argument("schlogl: theta must have 4 components");
    const double xd = static_cast<double>(x);
    return {
        theta[0] * xd * (xd - 1.0) / (2.0 * omega),
        theta[1] * xd * (xd - 1.0) * (xd - 2.0) / (6.0 * omega * omega),
        theta[2] * omega,
        theta[3] * xd,
    };
}

// grad of log c_k; each rate is linear in exactly one parameter, so this is
// e_k / theta_k.  Undefined where the rate vanishes.
inline Vec schlogl_event_log_grad(std::int64_t x, std::size_t event,
                                  const ParameterVector& theta, double omega) {
    const auto c = schlogl_event_rates(x, theta, omega);
    if (event >= 4) throw std::invalid_argument("schlogl: event index out of range");
    if (c[event] <= 0.0)
        throw std::runtime_error("schlogl: log-rate gradient requested where the rate is zero");
    Vec g(4, 0.0);
    g[event] = 1.0 / theta[event];
    return g;
}

// Jump-model view with transitions grouped by target state: the birth rate is
// c(x,x+1) = c1 + c3 and the death rate c(x,x-1) = c2 + c4.
class SchloglModel {
public:
    using State = std::int64_t;
    static constexpr std::size_t kBirth = 0;
    static constexpr std::size_t kDeath = 1;

    explicit SchloglModel(double volume = 15.0) : omega_(volume) {
        if (volume <= 0.0) throw std::invalid_argument("schlogl: volume must be > 0");
    }

    double volume() const { return omega_; }
    std::size_t n_params() const { return 4; }

    bool admissible(const ParameterVector& theta) const {
        return theta.size() == 4 && theta.all_positive();
    }

    void rates(State x, const ParameterVector& theta, std::vector<double>& out) const {
        const auto c = schlogl_event_rates(x, theta, omega_);
        out.assign(2, 0.0);
        out[kBirth] = c[0] + c[2];
        out[kDeath] = c[1] + c[3];
    }

    void apply(State& x, std::size_t event, RngStream&) const {
        x += (event == kBirth) ? 1 : -1;
    }

    // d c(x, target) / d theta for the grouped transition
    void rate_grads(State x, const ParameterVector&, std::size_t event,
                    std::vector<double>& out) const {
        const double xd = static_cast<double>(x);
        out.assign(4, 0.0);
        if (event == kBirth) {
            out[0] = xd * (xd - 1.0) / (2.0 * omega_);
            out[2] = omega_;
        } else {
            out[1] = xd * (xd - 1.0) * (xd - 2.0) / (6.0 * omega_ * omega_);
            out[3] = xd;
        }
    }

    double digest(State x) const { return static_cast<double>(x); }

private:
    double omega_;
};

}  // namespace pathsens::models
