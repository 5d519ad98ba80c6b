#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "pathsens/linalg.hpp"

namespace pathsens {

// Compensated summation; runs in this project routinely exceed 1e6 terms.
class KahanSum {
public:
    void add(double x) {
        const double y = x - c_;
        const double t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }
    void merge(const KahanSum& o) {
        add(o.s_);
        add(-o.c_);
    }
    double value() const { return s_ - c_; }

private:
    double s_ = 0.0;
    double c_ = 0.0;
};

// Weighted running mean with a single-pass second moment.  Weights are the
// waiting times for time-averaged CTMC observables and 1 for per-step ones.
class RerAccumulator {
public:
    void add(double sample, double weight = 1.0) {
        if (weight <= 0.0) throw std::invalid_argument("sample weight must be > 0");
        wsum_.add(weight);
        wx_.add(weight * sample);
        wxx_.add(weight * sample * sample);
        ++n_;
    }

    void merge(const RerAccumulator& o) {
        wsum_.merge(o.wsum_);
        wx_.merge(o.wx_);
        wxx_.merge(o.wxx_);
        n_ += o.n_;
    }

    std::size_t count() const { return n_; }
    bool empty() const { return n_ == 0; }
    double weight() const { return wsum_.value(); }

    double estimate() const {
        if (empty()) throw std::runtime_error("no data accumulated");
        return wx_.value() / wsum_.value();
    }

    // weighted population variance of the samples
    double variance() const {
        if (empty()) throw std::runtime_error("no data accumulated");
        const double m = estimate();
        const double v = wxx_.value() / wsum_.value() - m * m;
        return v > 0.0 ? v : 0.0;
    }

private:
    KahanSum wsum_, wx_, wxx_;
    std::size_t n_ = 0;
};

// Running k x k matrix mean, fed either whole matrices or rank-1 outer
// products w * g g^T.  The emitted estimate is symmetrized.
class FimAccumulator {
public:
    explicit FimAccumulator(std::size_t k) : k_(k), sum_(k * k) {}

    std::size_t dim() const { return k_; }
    std::size_t count() const { return n_; }
    bool empty() const { return n_ == 0; }

    void add_outer(std::span<const double> g, double weight = 1.0) {
        if (g.size() != k_) throw std::invalid_argument("FIM sample dimension mismatch");
        for (std::size_t i = 0; i < k_; ++i)
            for (std::size_t j = 0; j < k_; ++j)
                sum_[i * k_ + j].add(weight * g[i] * g[j]);
        wsum_.add(weight);
        ++n_;
    }

    void add_matrix(const Matrix& m, double weight = 1.0) {
        if (m.rows() != k_ || m.cols() != k_)
            throw std::invalid_argument("FIM sample dimension mismatch");
        for (std::size_t i = 0; i < k_; ++i)
            for (std::size_t j = 0; j < k_; ++j)
                sum_[i * k_ + j].add(weight * m(i, j));
        wsum_.add(weight);
        ++n_;
    }

    void merge(const FimAccumulator& o) {
        if (o.k_ != k_) throw std::invalid_argument("FIM accumulator dimension mismatch");
        for (std::size_t i = 0; i < sum_.size(); ++i) sum_[i].merge(o.sum_[i]);
        wsum_.merge(o.wsum_);
        n_ += o.n_;
    }

    Matrix estimate() const {
        if (empty()) throw std::runtime_error("no data accumulated");
        const double w = wsum_.value();
        Matrix m(k_, k_);
        for (std::size_t i = 0; i < k_; ++i)
            for (std::size_t j = 0; j < k_; ++j) m(i, j) = sum_[i * k_ + j].value() / w;
        m.symmetrize();
        return m;
    }

private:
    std::size_t k_;
    std::vector<KahanSum> sum_;
    KahanSum wsum_;
    std::size_t n_ = 0;
};

// Non-overlapping batch means for autocorrelated streams.  A fixed number of
// batches is kept; when all are full, adjacent pairs are collapsed and the
// per-batch capacity doubles.
class BatchMeans {
public:
    explicit BatchMeans(std::size_t n_batches = 32)
        : wx_(n_batches), w_(n_batches) {
        if (n_batches < 2 || n_batches % 2 != 0)
            throw std::invalid_argument("batch count must be even and >= 2");
    }

    void add(double sample, double weight = 1.0) {
        if (fill_ == capacity_) advance_batch();
        wx_[cur_].add(weight * sample);
        w_[cur_].add(weight);
        ++fill_;
    }

    std::size_t batches() const { return wx_.size(); }
    std::size_t filled_batches() const { return cur_ + (fill_ > 0 ? 1 : 0); }

    double mean() const {
        KahanSum wx, w;
        for (std::size_t b = 0; b < wx_.size(); ++b) {
            wx.merge(wx_[b]);
            w.merge(w_[b]);
        }
        if (w.value() <= 0.0) throw std::runtime_error("no data accumulated");
        return wx.value() / w.value();
    }

    // standard error of the mean from batch-to-batch scatter
    double std_error() const {
        const std::size_t nb = filled_batches();
        if (nb < 2) return std::nan("");
        double m = 0.0;
        std::vector<double> bm(nb);
        for (std::size_t b = 0; b < nb; ++b) {
            bm[b] = wx_[b].value() / w_[b].value();
            m += bm[b];
        }
        m /= static_cast<double>(nb);
        double v = 0.0;
        for (double x : bm) v += (x - m) * (x - m);
        v /= static_cast<double>(nb - 1);
        return std::sqrt(v / static_cast<double>(nb));
    }

private:
    void advance_batch() {
        if (cur_ + 1 < wx_.size()) {
            ++cur_;
            fill_ = 0;
            return;
        }
        // collapse pairs, double capacity
        const std::size_t nb = wx_.size();
        for (std::size_t b = 0; b < nb / 2; ++b) {
            wx_[b] = wx_[2 * b];
            wx_[b].merge(wx_[2 * b + 1]);
            w_[b] = w_[2 * b];
            w_[b].merge(w_[2 * b + 1]);
        }
        for (std::size_t b = nb / 2; b < nb; ++b) {
            wx_[b] = KahanSum{};
            w_[b] = KahanSum{};
        }
        cur_ = nb / 2;
        fill_ = 0;
        capacity_ *= 2;
    }

    std::vector<KahanSum> wx_, w_;
    std::size_t cur_ = 0;
    std::size_t fill_ = 0;
    std::size_t capacity_ = 1;
};

// (time/steps, running estimate) pairs at geometrically spaced checkpoints.
class ConvergenceTrace {
public:
    struct Point {
        double abscissa;
        double estimate;
    };

    explicit ConvergenceTrace(double growth = 1.2, double first = 1.0)
        : next_(first), growth_(growth) {}

    template <class EstimateFn>
    void maybe_record(double abscissa, EstimateFn&& est) {
        if (abscissa < next_) return;
        points_.push_back({abscissa, est()});
        while (next_ <= abscissa) next_ *= growth_;
    }

    const std::vector<Point>& points() const { return points_; }

private:
    std::vector<Point> points_;
    double next_;
    double growth_;
};

}  // namespace pathsens
