#pragma once

#include <cmath>
#include <cstddef>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pathsens/linalg.hpp"

// Exact small-system oracles: stationary laws, RER/FIM by direct summation,
// brute-force path-space relative entropy, and the time-periodic and
// semi-Markov generalizations.  Everything here is deliberately dense and
// desk-scale; the estimators are validated against these routines.

namespace pathsens::exact {

struct SupportViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline void check_square(const Matrix& m, const char* what) {
    if (m.rows() != m.cols() || m.rows() == 0)
        throw std::invalid_argument(std::string(what) + ": square matrix required");
}

// ---------------------------------------------------------------------------
// Stationary laws
// ---------------------------------------------------------------------------

// mu P = mu for a row-stochastic P, by dense solve with a normalization row.
inline Vec finite_stationary(const Matrix& p) {
    check_square(p, "finite_stationary");
    const std::size_t n = p.rows();
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (p(i, j) < 0.0 || p(i, j) > 1.0 + 1e-12)
                throw std::invalid_argument("finite_stationary: probabilities outside [0,1]");
            row += p(i, j);
        }
        if (std::abs(row - 1.0) > 1e-12)
            throw std::invalid_argument("finite_stationary: rows must sum to 1");
    }
    // (P^T - I) mu = 0 with last equation replaced by sum(mu) = 1
    Matrix a(n, n);
    Vec b(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = p(j, i) - (i == j ? 1.0 : 0.0);
    for (std::size_t j = 0; j < n; ++j) a(n - 1, j) = 1.0;
    b[n - 1] = 1.0;
    Vec mu;
    try {
        mu = solve_dense(a, b);
    } catch (const std::runtime_error&) {
        throw std::runtime_error("finite_stationary: chain appears reducible (singular system)");
    }
    for (double& x : mu) {
        if (x < -1e-9)
            throw std::runtime_error("finite_stationary: negative mass, chain reducible?");
        if (x < 0.0) x = 0.0;
    }
    return mu;
}

// mu C = 0 for a rate matrix with zero diagonal (generator rebuilt internally).
inline Vec finite_stationary_ctmc(const Matrix& c) {
    check_square(c, "finite_stationary_ctmc");
    const std::size_t n = c.rows();
    Matrix a(n, n);
    Vec b(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double lam = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            if (c(i, j) < 0.0) throw std::invalid_argument("finite_stationary_ctmc: negative rate");
            lam += c(i, j);
        }
        for (std::size_t j = 0; j < n; ++j)
            a(j, i) = (i == j) ? -lam : c(i, j);  // note transpose: a(j,i) = Q(i,j)
    }
    // replace last row with normalization
    for (std::size_t j = 0; j < n; ++j) a(n - 1, j) = 1.0;
    b[n - 1] = 1.0;
    Vec mu;
    try {
        mu = solve_dense(a, b);
    } catch (const std::runtime_error&) {
        throw std::runtime_error("finite_stationary_ctmc: chain appears reducible");
    }
    for (double& x : mu)
        if (x < 0.0 && x > -1e-9) x = 0.0;
    return mu;
}

struct BirthDeathResult {
    Vec mu;            // mu[x], x = 0..x_max
    std::size_t x_max;
};

// Detailed-balance recursion mu(x+1) = mu(x) b(x) / d(x+1), log-space.
// The cutoff is auto-extended until the discarded tail mass is < 1e-12.
inline BirthDeathResult birth_death_stationary(
    const std::function<double(std::size_t)>& birth,
    const std::function<double(std::size_t)>& death,
    std::size_t x_max = 200, bool auto_extend = true,
    std::size_t hard_limit = 1u << 22) {
    constexpr double kTailTol = 1e-12;
    std::vector<double> logmu;
    for (;;) {
        logmu.assign(x_max + 1, 0.0);
        for (std::size_t x = 0; x < x_max; ++x) {
            const double b = birth(x);
            const double d = death(x + 1);
            if (b <= 0.0 || d <= 0.0)
                throw std::invalid_argument("birth_death_stationary: interior rates must be positive");
            logmu[x + 1] = logmu[x] + std::log(b) - std::log(d);
        }
        double mx = logmu[0];
        for (double v : logmu) mx = std::max(mx, v);
        Vec mu(x_max + 1);
        double total = 0.0;
        for (std::size_t x = 0; x <= x_max; ++x) {
            mu[x] = std::exp(logmu[x] - mx);
            total += mu[x];
        }
        // tail estimate: geometric continuation from the last ratio
        const double r = mu[x_max] / mu[x_max - 1];
        const double tail = (r < 1.0) ? mu[x_max] * r / (1.0 - r) : total;  // divergent-looking tail fails
        if (tail / (total + tail) < kTailTol) {
            for (double& v : mu) v /= total;
            return {std::move(mu), x_max};
        }
        if (!auto_extend || x_max >= hard_limit)
            throw std::runtime_error(
                "birth_death_stationary: tail mass above 1e-12 at x_max=" +
                std::to_string(x_max) + "; increase the cutoff");
        x_max *= 2;
    }
}

// ---------------------------------------------------------------------------
// Relative entropy and exact RER/FIM sums
// ---------------------------------------------------------------------------

// R(mu | nu) = sum mu log(mu/nu)
inline double relative_entropy(const Vec& mu, const Vec& nu) {
    if (mu.size() != nu.size()) throw std::invalid_argument("relative_entropy: size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        if (mu[i] == 0.0) continue;
        if (nu[i] <= 0.0)
            throw SupportViolation("relative_entropy: nu vanishes on the support of mu at state " +
                                   std::to_string(i));
        s += mu[i] * std::log(mu[i] / nu[i]);
    }
    return s;
}

// E_mu[ sum_j p log(p/p~) ] for discrete-time chains.
inline double exact_rer_chain(const Matrix& p, const Matrix& pp, const Vec& mu) {
    check_square(p, "exact_rer_chain");
    const std::size_t n = p.rows();
    if (pp.rows() != n || mu.size() != n)
        throw std::invalid_argument("exact_rer_chain: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (mu[i] == 0.0) continue;
        double inner = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (p(i, j) == 0.0) continue;
            if (pp(i, j) <= 0.0)
                throw SupportViolation("exact_rer_chain: perturbed probability vanishes on transition " +
                                       std::to_string(i) + "->" + std::to_string(j));
            inner += p(i, j) * std::log(p(i, j) / pp(i, j));
        }
        s += mu[i] * inner;
    }
    return s;
}

// E_mu[ sum_j c log(c/c~) - (lambda - lambda~) ] for jump chains.
inline double exact_rer_ctmc(const Matrix& c, const Matrix& cp, const Vec& mu) {
    check_square(c, "exact_rer_ctmc");
    const std::size_t n = c.rows();
    if (cp.rows() != n || mu.size() != n)
        throw std::invalid_argument("exact_rer_ctmc: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (mu[i] == 0.0) continue;
        double inner = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const double r = c(i, j);
            const double rp = cp(i, j);
            if (r > 0.0 && rp <= 0.0)
                throw SupportViolation("exact_rer_ctmc: perturbed rate vanishes on transition " +
                                       std::to_string(i) + "->" + std::to_string(j));
            if (r > 0.0) inner += r * std::log(r / rp);
            inner -= r - rp;
        }
        s += mu[i] * inner;
    }
    return s;
}

// grads[k](i,j) = d p(i,j) / d theta_k (or d c(i,j) / d theta_k)
inline Matrix exact_fim_chain(const Matrix& p, const std::vector<Matrix>& grads, const Vec& mu) {
    check_square(p, "exact_fim_chain");
    const std::size_t n = p.rows();
    const std::size_t k = grads.size();
    Matrix f(k, k);
    Vec g(k);
    for (std::size_t i = 0; i < n; ++i) {
        if (mu[i] == 0.0) continue;
        for (std::size_t j = 0; j < n; ++j) {
            if (p(i, j) <= 0.0) continue;
            for (std::size_t a = 0; a < k; ++a) g[a] = grads[a](i, j) / p(i, j);
            const double w = mu[i] * p(i, j);
            for (std::size_t a = 0; a < k; ++a)
                for (std::size_t b = 0; b < k; ++b) f(a, b) += w * g[a] * g[b];
        }
    }
    f.symmetrize();
    return f;
}

inline Matrix exact_fim_ctmc(const Matrix& c, const std::vector<Matrix>& grads, const Vec& mu) {
    check_square(c, "exact_fim_ctmc");
    const std::size_t n = c.rows();
    const std::size_t k = grads.size();
    Matrix f(k, k);
    Vec g(k);
    for (std::size_t i = 0; i < n; ++i) {
        if (mu[i] == 0.0) continue;
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j || c(i, j) <= 0.0) continue;
            for (std::size_t a = 0; a < k; ++a) g[a] = grads[a](i, j) / c(i, j);
            const double w = mu[i] * c(i, j);
            for (std::size_t a = 0; a < k; ++a)
                for (std::size_t b = 0; b < k; ++b) f(a, b) += w * g[a] * g[b];
        }
    }
    f.symmetrize();
    return f;
}

// ---------------------------------------------------------------------------
// Brute-force path-space relative entropy
// ---------------------------------------------------------------------------

// Enumerates every path sigma_0..sigma_M and sums Q log(Q/Q~) exactly, with
// both chains started from their own stationary laws.
inline double brute_force_path_re(const Matrix& p, const Matrix& pp, std::size_t m_horizon) {
    check_square(p, "brute_force_path_re");
    const std::size_t n = p.rows();
    double paths = 1.0;
    for (std::size_t i = 0; i <= m_horizon; ++i) {
        paths *= static_cast<double>(n);
        if (paths > 1e7)
            throw std::invalid_argument("brute_force_path_re: enumeration bound S^(M+1) <= 1e7 exceeded");
    }
    const Vec mu = finite_stationary(p);
    const Vec mup = finite_stationary(pp);

    double total = 0.0;
    std::vector<std::size_t> path(m_horizon + 1, 0);
    const auto n_paths = static_cast<std::size_t>(paths);
    for (std::size_t idx = 0; idx < n_paths; ++idx) {
        std::size_t rem = idx;
        for (std::size_t t = 0; t <= m_horizon; ++t) {
            path[t] = rem % n;
            rem /= n;
        }
        double q = mu[path[0]];
        double qp = mup[path[0]];
        for (std::size_t t = 0; t < m_horizon; ++t) {
            q *= p(path[t], path[t + 1]);
            qp *= pp(path[t], path[t + 1]);
        }
        if (q == 0.0) continue;
        if (qp <= 0.0)
            throw SupportViolation("brute_force_path_re: perturbed path probability vanishes");
        total += q * std::log(q / qp);
    }
    return total;
}

// ---------------------------------------------------------------------------
// Time-periodic chains
// ---------------------------------------------------------------------------

struct PeriodicChain {
    std::vector<Matrix> phase;  // phase[m] = p(.,.;m), m = 0..zeta-1

    std::size_t period() const { return phase.size(); }
    std::size_t states() const { return phase.empty() ? 0 : phase.front().rows(); }
};

// Stationary law of the one-period composed map started at phase m.
inline Vec periodic_phase_stationary(const PeriodicChain& c, std::size_t m) {
    const std::size_t zeta = c.period();
    Matrix composed = c.phase[m % zeta];
    for (std::size_t i = 1; i < zeta; ++i) composed = composed * c.phase[(m + i) % zeta];
    return finite_stationary(composed);
}

// Phase-averaged RER; the phase-m weight is the phase-m stationary law.
inline double periodic_rer(const PeriodicChain& c, const PeriodicChain& cp) {
    const std::size_t zeta = c.period();
    if (zeta == 0 || cp.period() != zeta)
        throw std::invalid_argument("periodic_rer: period mismatch");
    double s = 0.0;
    for (std::size_t m = 0; m < zeta; ++m) {
        const Vec mu = periodic_phase_stationary(c, m);
        s += exact_rer_chain(c.phase[m], cp.phase[m], mu);
    }
    return s / static_cast<double>(zeta);
}

inline Matrix periodic_fim(const PeriodicChain& c,
                           const std::vector<std::vector<Matrix>>& grads_per_phase) {
    const std::size_t zeta = c.period();
    if (grads_per_phase.size() != zeta)
        throw std::invalid_argument("periodic_fim: gradient phase count mismatch");
    const std::size_t k = grads_per_phase.front().size();
    Matrix f(k, k);
    for (std::size_t m = 0; m < zeta; ++m) {
        const Vec mu = periodic_phase_stationary(c, m);
        f += exact_fim_chain(c.phase[m], grads_per_phase[m], mu);
    }
    f *= 1.0 / static_cast<double>(zeta);
    return f;
}

// ---------------------------------------------------------------------------
// Semi-Markov processes
// ---------------------------------------------------------------------------

// Kernel density q(sigma, sigma'; t) with int_0^inf q(i,j,t) dt = p(i,j),
// the embedded transition matrix.
struct SemiMarkovKernel {
    std::size_t n_states = 0;
    std::function<double(std::size_t, std::size_t, double)> density;
};

inline Vec make_geometric_grid(double t_min, double t_max, std::size_t nodes = 2000) {
    if (t_min <= 0.0 || t_max <= t_min || nodes < 2)
        throw std::invalid_argument("make_geometric_grid: bad parameters");
    Vec g(nodes);
    const double r = std::log(t_max / t_min) / static_cast<double>(nodes - 1);
    for (std::size_t i = 0; i < nodes; ++i) g[i] = t_min * std::exp(r * static_cast<double>(i));
    return g;
}

namespace detail {

template <class Integrand>
double trapezoid(const Vec& grid, Integrand&& f) {
    // close the initial segment [0, grid[0]] with a rectangle; grid[0] is
    // expected to be small enough that the integrand is flat there
    double prev = f(grid[0]);
    double s = prev * grid[0];
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double cur = f(grid[i]);
        s += 0.5 * (prev + cur) * (grid[i] - grid[i - 1]);
        prev = cur;
    }
    return s;
}

struct SemiMarkovContext {
    Matrix p;        // embedded chain
    Vec mu;          // its stationary law
    double m_hat;    // mean sojourn under mu
};

inline SemiMarkovContext semi_markov_context(const SemiMarkovKernel& q, const Vec& grid) {
    const std::size_t n = q.n_states;
    Matrix p(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            p(i, j) = trapezoid(grid, [&](double t) { return q.density(i, j, t); });
    // renormalize rows; the pre-normalization defect is the tail bound
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j) row += p(i, j);
        if (std::abs(row - 1.0) > 1e-8)
            throw std::runtime_error(
                "semi_markov: kernel mass on the grid deviates from 1 by more than 1e-8; "
                "extend the time grid");
        for (std::size_t j = 0; j < n; ++j) p(i, j) /= row;
    }
    const Vec mu = finite_stationary(p);
    double m_hat = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double sojourn = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            sojourn += trapezoid(grid, [&](double t) { return t * q.density(i, j, t); });
        m_hat += mu[i] * sojourn;
    }
    if (!(m_hat > 0.0) || !std::isfinite(m_hat))
        throw std::runtime_error("semi_markov: mean sojourn time not positive and finite");
    return {std::move(p), mu, m_hat};
}

}  // namespace detail

// (1/m^) int sum_ij mu(i) q(i,j,s) log(q/q~) ds by trapezoid quadrature.
inline double semi_markov_rer(const SemiMarkovKernel& q, const SemiMarkovKernel& qp,
                              const Vec& grid) {
    if (q.n_states != qp.n_states)
        throw std::invalid_argument("semi_markov_rer: state count mismatch");
    const auto ctx = detail::semi_markov_context(q, grid);
    const std::size_t n = q.n_states;
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (ctx.mu[i] == 0.0) continue;
        for (std::size_t j = 0; j < n; ++j) {
            s += ctx.mu[i] * detail::trapezoid(grid, [&](double t) {
                const double a = q.density(i, j, t);
                if (a <= 0.0) return 0.0;
                const double b = qp.density(i, j, t);
                if (b <= 0.0)
                    throw SupportViolation("semi_markov_rer: perturbed kernel vanishes on support");
                return a * std::log(a / b);
            });
        }
    }
    return s / ctx.m_hat;
}

// grad(i, j, t) returns the k-vector d q(i,j,t) / d theta.
inline Matrix semi_markov_fim(
    const SemiMarkovKernel& q,
    const std::function<Vec(std::size_t, std::size_t, double)>& grad, std::size_t k,
    const Vec& grid) {
    const auto ctx = detail::semi_markov_context(q, grid);
    const std::size_t n = q.n_states;
    Matrix f(k, k);
    for (std::size_t i = 0; i < n; ++i) {
        if (ctx.mu[i] == 0.0) continue;
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t a = 0; a < k; ++a)
                for (std::size_t b = a; b < k; ++b) {
                    const double val = ctx.mu[i] * detail::trapezoid(grid, [&](double t) {
                        const double d = q.density(i, j, t);
                        if (d <= 0.0) return 0.0;
                        const Vec g = grad(i, j, t);
                        return g[a] * g[b] / d;
                    });
                    f(a, b) += val;
                    if (a != b) f(b, a) += val;
                }
    }
    f *= 1.0 / ctx.m_hat;
    return f;
}

// ---------------------------------------------------------------------------
// Plain-text matrix ingestion (whitespace-separated rows)
// ---------------------------------------------------------------------------

inline Matrix load_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open matrix file: " + path);
    std::vector<Vec> rows;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        Vec row;
        double x;
        while (ls >> x) row.push_back(x);
        if (row.empty()) continue;
        if (!rows.empty() && row.size() != rows.front().size())
            throw std::runtime_error("ragged rows in matrix file: " + path);
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::runtime_error("empty matrix file: " + path);
    Matrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
    return m;
}

}  // namespace pathsens::exact
