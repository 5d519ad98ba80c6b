#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "pathsens/linalg.hpp"

namespace pathsens {

// Model parameter vector theta with per-component labels.
struct ParameterVector {
    Vec values;
    std::vector<std::string> names;

    ParameterVector() = default;
    ParameterVector(Vec v, std::vector<std::string> n = {})
        : values(std::move(v)), names(std::move(n)) {
        if (values.empty()) throw std::invalid_argument("parameter vector must have k >= 1");
        for (double x : values)
            if (!std::isfinite(x)) throw std::invalid_argument("non-finite parameter component");
        if (names.empty()) {
            names.reserve(values.size());
            for (std::size_t i = 0; i < values.size(); ++i)
                names.push_back("theta" + std::to_string(i));
        }
        if (names.size() != values.size())
            throw std::invalid_argument("parameter names/values length mismatch");
    }

    std::size_t size() const { return values.size(); }
    double operator[](std::size_t i) const { return values[i]; }

    bool all_positive() const {
        for (double x : values)
            if (x <= 0.0) return false;
        return true;
    }
};

// A perturbation direction; the stored vector IS epsilon (any scalar
// magnitude is pre-multiplied).
struct Perturbation {
    Vec eps;
    std::string label;

    Perturbation() = default;
    explicit Perturbation(Vec e, std::string lbl = "")
        : eps(std::move(e)), label(std::move(lbl)) {
        for (double x : eps)
            if (!std::isfinite(x)) throw std::invalid_argument("non-finite perturbation component");
    }

    // eps0 * e_k, negated if requested
    static Perturbation axis(std::size_t k, std::size_t dim, double eps0) {
        Vec e(dim, 0.0);
        e.at(k) = eps0;
        std::string lbl = (eps0 >= 0 ? "+" : "-") + std::string("e") + std::to_string(k + 1);
        return Perturbation(std::move(e), lbl);
    }

    std::size_t size() const { return eps.size(); }
};

inline ParameterVector perturbed(const ParameterVector& theta, const Perturbation& d) {
    if (d.size() != theta.size())
        throw std::invalid_argument("perturbation dimension mismatch");
    Vec v = theta.values;
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += d.eps[i];
    return ParameterVector(std::move(v), theta.names);
}

}  // namespace pathsens
