#pragma once

#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pathsens/linalg.hpp"
#include "pathsens/params.hpp"
#include "pathsens/rng.hpp"

namespace pathsens::models {

// Finite-state chain defined by a theta -> transition matrix builder.  The
// built matrix (and its parameter gradients) are memoized per theta, so the
// per-step cost is a table lookup.  This is the workhorse for validating the
// estimators against dense oracles.
class FiniteChainModel {
public:
    using State = std::size_t;
    using Builder = std::function<Matrix(const ParameterVector&)>;
    using GradBuilder = std::function<std::vector<Matrix>(const ParameterVector&)>;

    FiniteChainModel(std::size_t n_params, Builder build, GradBuilder grads = nullptr)
        : n_params_(n_params), build_(std::move(build)), grads_(std::move(grads)) {}

    std::size_t n_params() const { return n_params_; }

    bool admissible(const ParameterVector& theta) const {
        if (theta.size() != n_params_) return false;
        try {
            (void)table(theta);
        } catch (const std::exception&) {
            return false;
        }
        return true;
    }

    std::size_t n_states(const ParameterVector& theta) const { return table(theta).p.rows(); }

    State step(const State& s, const ParameterVector& theta, RngStream& rng) const {
        const Matrix& p = table(theta).p;
        const double target = rng.uniform();
        double acc = 0.0;
        State last = 0;
        for (std::size_t j = 0; j < p.cols(); ++j) {
            if (p(s, j) <= 0.0) continue;
            acc += p(s, j);
            last = j;
            if (acc >= target) return j;
        }
        return last;
    }

    double log_density(const State& a, const State& b, const ParameterVector& theta) const {
        return std::log(table(theta).p(a, b));
    }

    void grad_log_density(const State& a, const State& b, const ParameterVector& theta,
                          Vec& out) const {
        const Entry& e = table(theta);
        require_grads();
        out.assign(n_params_, 0.0);
        const double p = e.p(a, b);
        if (p <= 0.0)
            throw std::runtime_error("finite chain: log-gradient on a zero-probability transition");
        for (std::size_t k = 0; k < n_params_; ++k) out[k] = e.g[k](a, b) / p;
    }

    void row_probs(const State& s, const ParameterVector& theta, std::vector<double>& out) const {
        const Matrix& p = table(theta).p;
        out.resize(p.cols());
        for (std::size_t j = 0; j < p.cols(); ++j) out[j] = p(s, j);
    }

    void row_prob_grads(const State& s, const ParameterVector& theta, std::size_t j,
                        Vec& out) const {
        const Entry& e = table(theta);
        require_grads();
        out.resize(n_params_);
        for (std::size_t k = 0; k < n_params_; ++k) out[k] = e.g[k](s, j);
    }

    const Matrix& matrix(const ParameterVector& theta) const { return table(theta).p; }
    const std::vector<Matrix>& matrix_grads(const ParameterVector& theta) const {
        require_grads();
        return table(theta).g;
    }

private:
    struct Entry {
        Vec key;
        Matrix p;
        std::vector<Matrix> g;
    };

    const Entry& table(const ParameterVector& theta) const {
        for (const Entry& e : cache_)
            if (e.key == theta.values) return e;
        Entry e;
        e.key = theta.values;
        e.p = build_(theta);
        if (e.p.rows() != e.p.cols() || e.p.rows() == 0)
            throw std::invalid_argument("finite chain: builder must return a square matrix");
        for (std::size_t i = 0; i < e.p.rows(); ++i) {
            double row = 0.0;
            for (std::size_t j = 0; j < e.p.cols(); ++j) {
                if (e.p(i, j) < 0.0)
                    throw std::invalid_argument("finite chain: negative probability");
                row += e.p(i, j);
            }
            if (std::abs(row - 1.0) > 1e-12)
                throw std::invalid_argument("finite chain: rows must sum to 1");
        }
        if (grads_) e.g = grads_(theta);
        cache_.push_back(std::move(e));
        return cache_.back();
    }

    void require_grads() const {
        if (!grads_)
            throw std::logic_error("finite chain: no gradient builder was supplied");
    }

    std::size_t n_params_;
    Builder build_;
    GradBuilder grads_;
    mutable std::vector<Entry> cache_;
};

// Finite-state jump process defined by a theta -> rate matrix builder (zero
// diagonal).  Event k means "jump to state k".
class FiniteJumpModel {
public:
    using State = std::size_t;
    using Builder = std::function<Matrix(const ParameterVector&)>;
    using GradBuilder = std::function<std::vector<Matrix>(const ParameterVector&)>;

    FiniteJumpModel(std::size_t n_params, Builder build, GradBuilder grads = nullptr)
        : n_params_(n_params), build_(std::move(build)), grads_(std::move(grads)) {}

    std::size_t n_params() const { return n_params_; }

    bool admissible(const ParameterVector& theta) const {
        if (theta.size() != n_params_) return false;
        try {
            (void)table(theta);
        } catch (const std::exception&) {
            return false;
        }
        return true;
    }

    void rates(const State& s, const ParameterVector& theta, std::vector<double>& out) const {
        const Matrix& c = table(theta).c;
        out.resize(c.cols());
        for (std::size_t j = 0; j < c.cols(); ++j) out[j] = (j == s) ? 0.0 : c(s, j);
    }

    void apply(State& s, std::size_t event, RngStream&) const { s = event; }

    void rate_grads(const State& s, const ParameterVector& theta, std::size_t event,
                    Vec& out) const {
        const Entry& e = table(theta);
        require_grads();
        out.resize(n_params_);
        for (std::size_t k = 0; k < n_params_; ++k) out[k] = e.g[k](s, event);
    }

    double digest(const State& s) const { return static_cast<double>(s); }

    const Matrix& matrix(const ParameterVector& theta) const { return table(theta).c; }
    const std::vector<Matrix>& matrix_grads(const ParameterVector& theta) const {
        require_grads();
        return table(theta).g;
    }

private:
    struct Entry {
        Vec key;
        Matrix c;
        std::vector<Matrix> g;
    };

    const Entry& table(const ParameterVector& theta) const {
        for (const Entry& e : cache_)
            if (e.key == theta.values) return e;
        Entry e;
        e.key = theta.values;
        e.c = build_(theta);
        if (e.c.rows() != e.c.cols() || e.c.rows() == 0)
            throw std::invalid_argument("finite jump: builder must return a square matrix");
        for (std::size_t i = 0; i < e.c.rows(); ++i)
            for (std::size_t j = 0; j < e.c.cols(); ++j)
                if (i != j && e.c(i, j) < 0.0)
                    throw std::invalid_argument("finite jump: negative rate");
        if (grads_) e.g = grads_(theta);
        cache_.push_back(std::move(e));
        return cache_.back();
    }

    void require_grads() const {
        if (!grads_)
            throw std::logic_error("finite jump: no gradient builder was supplied");
    }

    std::size_t n_params_;
    Builder build_;
    GradBuilder grads_;
    mutable std::vector<Entry> cache_;
};

}  // namespace pathsens::models
