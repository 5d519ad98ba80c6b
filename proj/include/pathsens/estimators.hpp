#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "pathsens/accumulate.hpp"
#include "pathsens/exact.hpp"
#include "pathsens/params.hpp"

// Streaming estimators for the relative entropy rate and the path-space
// Fisher information matrix, attached as hooks to the simulation drivers.
// The H1 forms average an enumeration over all transitions out of each
// visited state; the H2 forms evaluate only realized transitions (larger
// variance, no enumeration needed).
//
// Every perturbation direction is evaluated in one pass over a single
// unperturbed trajectory; the perturbed rate evaluation is the only
// per-direction cost.

namespace pathsens {

using exact::SupportViolation;

namespace detail {

template <class Model>
std::vector<ParameterVector> admissible_perturbed(const Model& model,
                                                  const ParameterVector& theta,
                                                  const std::vector<Perturbation>& dirs) {
    std::vector<ParameterVector> out;
    out.reserve(dirs.size());
    for (const auto& d : dirs) {
        ParameterVector tp = perturbed(theta, d);
        if (!model.admissible(tp))
            throw std::invalid_argument("perturbation direction '" + d.label +
                                        "' leaves the admissible parameter region");
        out.push_back(std::move(tp));
    }
    return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// CTMC estimators
// ---------------------------------------------------------------------------

// H1 RER: time-weighted average of
//   sum_k c(s,k) log(c/c~) - (lambda - lambda~)
template <class Model>
class CtmcRerH1 {
public:
    CtmcRerH1(const Model& model, ParameterVector theta, std::vector<Perturbation> dirs,
              std::size_t n_batches = 32)
        : model_(model), theta_(std::move(theta)), dirs_(std::move(dirs)),
          pert_(detail::admissible_perturbed(model, theta_, dirs_)),
          accs_(dirs_.size()), batches_(dirs_.size(), BatchMeans(n_batches)),
          traces_(dirs_.size(), ConvergenceTrace(1.3)) {}

    template <class State>
    void operator()(const State& s, const std::vector<double>& rates, double lambda,
                    std::size_t /*event*/, double dt) {
        time_ += dt;
        for (std::size_t d = 0; d < dirs_.size(); ++d) {
            model_.rates(s, pert_[d], buf_);
            double log_term = 0.0, lambda_p = 0.0;
            for (std::size_t k = 0; k < rates.size(); ++k) {
                lambda_p += buf_[k];
                if (rates[k] <= 0.0) continue;
                if (buf_[k] <= 0.0)
                    throw SupportViolation(
                        "rer_ctmc_h1: perturbed rate vanishes on event " + std::to_string(k) +
                        " (direction '" + dirs_[d].label + "')");
                log_term += rates[k] * std::log(rates[k] / buf_[k]);
            }
            const double sample = log_term - (lambda - lambda_p);
            accs_[d].add(sample, dt);
            batches_[d].add(sample, dt);
            traces_[d].maybe_record(time_, [&] { return accs_[d].estimate(); });
        }
    }

    std::size_t n_directions() const { return dirs_.size(); }
    const Perturbation& direction(std::size_t d) const { return dirs_[d]; }
    const RerAccumulator& accumulator(std::size_t d) const { return accs_[d]; }
    double estimate(std::size_t d) const { return accs_[d].estimate(); }
    double std_error(std::size_t d) const { return batches_[d].std_error(); }
    const ConvergenceTrace& trace(std::size_t d) const { return traces_[d]; }
    double sampled_time() const { return time_; }

private:
    const Model& model_;
    ParameterVector theta_;
    std::vector<Perturbation> dirs_;
    std::vector<ParameterVector> pert_;
    std::vector<RerAccumulator> accs_;
    std::vector<BatchMeans> batches_;
    std::vector<ConvergenceTrace> traces_;
    std::vector<double> buf_;
    double time_ = 0.0;
};

// Batch means for the two-part Girsanov statistic: a per-jump log-ratio term
// and a time-weighted rate-difference term.
class GirsanovBatches {
public:
    explicit GirsanovBatches(std::size_t n_batches = 32)
        : logs_(n_batches), njump_(n_batches, 0.0), wdl_(n_batches), w_(n_batches) {}

    void add(double log_ratio, double rate_diff, double dt) {
        if (fill_ == capacity_) advance();
        logs_[cur_].add(log_ratio);
        njump_[cur_] += 1.0;
        wdl_[cur_].add(dt * rate_diff);
        w_[cur_].add(dt);
        ++fill_;
    }

    double estimate() const {
        KahanSum logs, wdl, w;
        double n = 0.0;
        for (std::size_t b = 0; b < logs_.size(); ++b) {
            logs.merge(logs_[b]);
            n += njump_[b];
            wdl.merge(wdl_[b]);
            w.merge(w_[b]);
        }
        if (n <= 0.0) throw std::runtime_error("no data accumulated");
        return (logs.value() - wdl.value()) / w.value();
    }

    double std_error() const {
        const std::size_t nb = cur_ + (fill_ > 0 ? 1 : 0);
        if (nb < 2) return std::nan("");
        std::vector<double> bm(nb);
        double m = 0.0;
        for (std::size_t b = 0; b < nb; ++b) {
            bm[b] = (logs_[b].value() - wdl_[b].value()) / w_[b].value();
            m += bm[b];
        }
        m /= static_cast<double>(nb);
        double v = 0.0;
        for (double x : bm) v += (x - m) * (x - m);
        v /= static_cast<double>(nb - 1);
        return std::sqrt(v / static_cast<double>(nb));
    }

private:
    void advance() {
        if (cur_ + 1 < logs_.size()) {
            ++cur_;
            fill_ = 0;
            return;
        }
        const std::size_t nb = logs_.size();
        for (std::size_t b = 0; b < nb / 2; ++b) {
            logs_[b] = logs_[2 * b];
            logs_[b].merge(logs_[2 * b + 1]);
            njump_[b] = njump_[2 * b] + njump_[2 * b + 1];
            wdl_[b] = wdl_[2 * b];
            wdl_[b].merge(wdl_[2 * b + 1]);
            w_[b] = w_[2 * b];
            w_[b].merge(w_[2 * b + 1]);
        }
        for (std::size_t b = nb / 2; b < nb; ++b) {
            logs_[b] = KahanSum{};
            njump_[b] = 0.0;
            wdl_[b] = KahanSum{};
            w_[b] = KahanSum{};
        }
        cur_ = nb / 2;
        fill_ = 0;
        capacity_ *= 2;
    }

    std::vector<KahanSum> logs_;
    std::vector<double> njump_;
    std::vector<KahanSum> wdl_, w_;
    std::size_t cur_ = 0, fill_ = 0, capacity_ = 1;
};

// H2 RER: per-jump average of log(c(s,s')/c~(s,s')) minus the time-weighted
// average of (lambda - lambda~).  The jump term is deliberately unweighted.
template <class Model>
class CtmcRerH2 {
public:
    CtmcRerH2(const Model& model, ParameterVector theta, std::vector<Perturbation> dirs,
              std::size_t n_batches = 32)
        : model_(model), theta_(std::move(theta)), dirs_(std::move(dirs)),
          pert_(detail::admissible_perturbed(model, theta_, dirs_)),
          batches_(dirs_.size(), GirsanovBatches(n_batches)),
          traces_(dirs_.size(), ConvergenceTrace(1.3)) {}

    template <class State>
    void operator()(const State& s, const std::vector<double>& rates, double lambda,
                    std::size_t event, double dt) {
        time_ += dt;
        for (std::size_t d = 0; d < dirs_.size(); ++d) {
            model_.rates(s, pert_[d], buf_);
            double lambda_p = 0.0;
            for (double c : buf_) lambda_p += c;
            if (buf_[event] <= 0.0)
                throw SupportViolation("rer_ctmc_h2: perturbed rate vanishes on realized event " +
                                       std::to_string(event) + " (direction '" +
                                       dirs_[d].label + "')");
            batches_[d].add(std::log(rates[event] / buf_[event]), lambda - lambda_p, dt);
            traces_[d].maybe_record(time_, [&] { return batches_[d].estimate(); });
        }
    }

    std::size_t n_directions() const { return dirs_.size(); }
    const Perturbation& direction(std::size_t d) const { return dirs_[d]; }
    double estimate(std::size_t d) const { return batches_[d].estimate(); }
    double std_error(std::size_t d) const { return batches_[d].std_error(); }
    const ConvergenceTrace& trace(std::size_t d) const { return traces_[d]; }

private:
    const Model& model_;
    ParameterVector theta_;
    std::vector<Perturbation> dirs_;
    std::vector<ParameterVector> pert_;
    std::vector<GirsanovBatches> batches_;
    std::vector<ConvergenceTrace> traces_;
    std::vector<double> buf_;
    double time_ = 0.0;
};

// H1 FIM: time-weighted average of sum_k c grad(log c) grad(log c)^T.
template <class Model>
class CtmcFimH1 {
public:
    CtmcFimH1(const Model& model, ParameterVector theta)
        : model_(model), theta_(std::move(theta)), k_(model.n_params()), acc_(k_),
          sample_(k_, k_) {}

    template <class State>
    void operator()(const State& s, const std::vector<double>& rates, double /*lambda*/,
                    std::size_t /*event*/, double dt) {
        sample_ = Matrix(k_, k_);
        for (std::size_t e = 0; e < rates.size(); ++e) {
            if (rates[e] <= 0.0) continue;
            model_.rate_grads(s, theta_, e, gbuf_);
            for (std::size_t i = 0; i < k_; ++i)
                for (std::size_t j = 0; j < k_; ++j)
                    sample_(i, j) += gbuf_[i] * gbuf_[j] / rates[e];
        }
        acc_.add_matrix(sample_, dt);
    }

    const FimAccumulator& accumulator() const { return acc_; }
    Matrix estimate() const { return acc_.estimate(); }

private:
    const Model& model_;
    ParameterVector theta_;
    std::size_t k_;
    FimAccumulator acc_;
    Matrix sample_;
    std::vector<double> gbuf_;
};

// ---------------------------------------------------------------------------
// Discrete-time chain estimators
// ---------------------------------------------------------------------------

// H2 RER for chains: per-step average of realized log-density ratios.
template <class Model>
class ChainRerH2 {
public:
    ChainRerH2(const Model& model, ParameterVector theta, std::vector<Perturbation> dirs,
               std::size_t n_batches = 32)
        : model_(model), theta_(std::move(theta)), dirs_(std::move(dirs)),
          pert_(detail::admissible_perturbed(model, theta_, dirs_)),
          accs_(dirs_.size()), batches_(dirs_.size(), BatchMeans(n_batches)),
          traces_(dirs_.size(), ConvergenceTrace(1.3)) {}

    template <class State>
    void operator()(const State& prev, const State& next) {
        ++steps_;
        const double base = model_.log_density(prev, next, theta_);
        if (!std::isfinite(base))
            throw SupportViolation("rer_chain_h2: log-density not finite on a realized pair");
        for (std::size_t d = 0; d < dirs_.size(); ++d) {
            const double p = model_.log_density(prev, next, pert_[d]);
            if (!std::isfinite(p))
                throw SupportViolation(
                    "rer_chain_h2: perturbed log-density not finite (direction '" +
                    dirs_[d].label + "')");
            const double sample = base - p;
            accs_[d].add(sample);
            batches_[d].add(sample);
            traces_[d].maybe_record(static_cast<double>(steps_),
                                    [&] { return accs_[d].estimate(); });
        }
    }

    std::size_t n_directions() const { return dirs_.size(); }
    const Perturbation& direction(std::size_t d) const { return dirs_[d]; }
    const RerAccumulator& accumulator(std::size_t d) const { return accs_[d]; }
    double estimate(std::size_t d) const { return accs_[d].estimate(); }
    double std_error(std::size_t d) const { return batches_[d].std_error(); }
    const ConvergenceTrace& trace(std::size_t d) const { return traces_[d]; }

private:
    const Model& model_;
    ParameterVector theta_;
    std::vector<Perturbation> dirs_;
    std::vector<ParameterVector> pert_;
    std::vector<RerAccumulator> accs_;
    std::vector<BatchMeans> batches_;
    std::vector<ConvergenceTrace> traces_;
    std::size_t steps_ = 0;
};

// H2 FIM for chains: per-step average of the realized outer products.
template <class Model>
class ChainFimH2 {
public:
    ChainFimH2(const Model& model, ParameterVector theta)
        : model_(model), theta_(std::move(theta)), acc_(model.n_params()) {}

    template <class State>
    void operator()(const State& prev, const State& next) {
        model_.grad_log_density(prev, next, theta_, gbuf_);
        for (double g : gbuf_)
            if (!std::isfinite(g))
                throw SupportViolation("fim_chain_h2: non-finite log-density gradient");
        acc_.add_outer(gbuf_);
    }

    const FimAccumulator& accumulator() const { return acc_; }
    Matrix estimate() const { return acc_.estimate(); }

private:
    const Model& model_;
    ParameterVector theta_;
    FimAccumulator acc_;
    Vec gbuf_;
};

// H1 RER for chains whose next-state law is enumerable: per-step average of
// the conditional relative entropy sum_j p log(p/p~).  Requires
// Model::row_probs.
template <class Model>
class ChainRerH1 {
public:
    ChainRerH1(const Model& model, ParameterVector theta, std::vector<Perturbation> dirs,
               std::size_t n_batches = 32)
        : model_(model), theta_(std::move(theta)), dirs_(std::move(dirs)),
          pert_(detail::admissible_perturbed(model, theta_, dirs_)),
          accs_(dirs_.size()), batches_(dirs_.size(), BatchMeans(n_batches)) {}

    template <class State>
    void operator()(const State& prev, const State& /*next*/) {
        model_.row_probs(prev, theta_, row_);
        for (std::size_t d = 0; d < dirs_.size(); ++d) {
            model_.row_probs(prev, pert_[d], prow_);
            double sample = 0.0;
            for (std::size_t j = 0; j < row_.size(); ++j) {
                if (row_[j] <= 0.0) continue;
                if (prow_[j] <= 0.0)
                    throw SupportViolation(
                        "rer_chain_h1: perturbed probability vanishes on transition to state " +
                        std::to_string(j));
                sample += row_[j] * std::log(row_[j] / prow_[j]);
            }
            accs_[d].add(sample);
            batches_[d].add(sample);
        }
    }

    std::size_t n_directions() const { return dirs_.size(); }
    const RerAccumulator& accumulator(std::size_t d) const { return accs_[d]; }
    double estimate(std::size_t d) const { return accs_[d].estimate(); }
    double std_error(std::size_t d) const { return batches_[d].std_error(); }

private:
    const Model& model_;
    ParameterVector theta_;
    std::vector<Perturbation> dirs_;
    std::vector<ParameterVector> pert_;
    std::vector<RerAccumulator> accs_;
    std::vector<BatchMeans> batches_;
    std::vector<double> row_, prow_;
};

// H1 FIM for enumerable chains.  Requires Model::row_probs and
// Model::row_prob_grads.
template <class Model>
class ChainFimH1 {
public:
    ChainFimH1(const Model& model, ParameterVector theta)
        : model_(model), theta_(std::move(theta)), k_(model.n_params()), acc_(k_),
          sample_(k_, k_) {}

    template <class State>
    void operator()(const State& prev, const State& /*next*/) {
        model_.row_probs(prev, theta_, row_);
        sample_ = Matrix(k_, k_);
        for (std::size_t j = 0; j < row_.size(); ++j) {
            if (row_[j] <= 0.0) continue;
            model_.row_prob_grads(prev, theta_, j, gbuf_);
            for (std::size_t a = 0; a < k_; ++a)
                for (std::size_t b = 0; b < k_; ++b)
                    sample_(a, b) += gbuf_[a] * gbuf_[b] / row_[j];
        }
        acc_.add_matrix(sample_);
    }

    const FimAccumulator& accumulator() const { return acc_; }
    Matrix estimate() const { return acc_.estimate(); }

private:
    const Model& model_;
    ParameterVector theta_;
    std::size_t k_;
    FimAccumulator acc_;
    Matrix sample_;
    std::vector<double> row_;
    Vec gbuf_;
};

// ---------------------------------------------------------------------------
// FIM-derived quantities
// ---------------------------------------------------------------------------

// quadratic RER approximation 1/2 eps^T F eps
inline double rer_quadratic(const Perturbation& eps, const Matrix& fim) {
    return 0.5 * quadratic_form(fim, eps.eps);
}

// (F_log)_{ij} = theta_i theta_j F_{ij}
inline Matrix log_scale_fim(const Matrix& fim, const ParameterVector& theta) {
    if (fim.rows() != theta.size() || fim.cols() != theta.size())
        throw std::invalid_argument("log_scale_fim: dimension mismatch");
    if (!theta.all_positive())
        throw std::invalid_argument("log_scale_fim: parameters must be strictly positive");
    Matrix f = fim;
    for (std::size_t i = 0; i < f.rows(); ++i)
        for (std::size_t j = 0; j < f.cols(); ++j) f(i, j) *= theta[i] * theta[j];
    return f;
}

// relative perturbation eps mapped to the original scale, componentwise
inline Perturbation log_scale_perturbation(const Perturbation& eps,
                                           const ParameterVector& theta) {
    if (eps.size() != theta.size())
        throw std::invalid_argument("log_scale_perturbation: dimension mismatch");
    Vec v(eps.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = theta[i] * eps.eps[i];
    return Perturbation(std::move(v), eps.label.empty() ? "" : eps.label + " (log-scale)");
}

}  // namespace pathsens
