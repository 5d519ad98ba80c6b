#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "pathsens/linalg.hpp"

// Spectral post-processing of estimated Fisher matrices: eigendecomposition,
// optimality scalars, and parameter-plane sweeps.

namespace pathsens {

struct EigenReport {
    Vec values;                   // descending
    std::vector<Vec> vectors;     // vectors[i] pairs with values[i], unit norm
    std::vector<bool> degenerate; // gap to a neighbor below tolerance
};

// Cyclic Jacobi for symmetric matrices.  Convergence: off-diagonal norm below
// 1e-12 * ||F||_F.  Input asymmetry beyond 1e-8 * ||F||_F is rejected.
inline EigenReport eigen_sym(const Matrix& f) {
    const std::size_t n = f.rows();
    if (f.cols() != n || n == 0)
        throw std::invalid_argument("eigen_sym: square matrix required");
    const double scale = f.frobenius_norm();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(f(i, j) - f(j, i)) > 1e-8 * std::max(scale, 1e-300))
                throw std::invalid_argument("eigen_sym: matrix is not symmetric");

    Matrix a = f;
    a.symmetrize();
    Matrix v = Matrix::identity(n);
    const double tol = 1e-12 * std::max(scale, 1e-300);

    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) s += a(i, j) * a(i, j);
        return std::sqrt(2.0 * s);
    };

    for (int sweep = 0; sweep < 100 && off_norm() > tol; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                if (a(p, q) == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t i = 0; i < n; ++i) {
                    const double aip = a(i, p), aiq = a(i, q);
                    a(i, p) = c * aip - s * aiq;
                    a(i, q) = s * aip + c * aiq;
                }
                for (std::size_t j = 0; j < n; ++j) {
                    const double apj = a(p, j), aqj = a(q, j);
                    a(p, j) = c * apj - s * aqj;
                    a(q, j) = s * apj + c * aqj;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double vip = v(i, p), viq = v(i, q);
                    v(i, p) = c * vip - s * viq;
                    v(i, q) = s * vip + c * viq;
                }
            }
    }
    if (off_norm() > tol) throw std::runtime_error("eigen_sym: Jacobi did not converge");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });

    EigenReport rep;
    rep.values.resize(n);
    rep.vectors.assign(n, Vec(n));
    rep.degenerate.assign(n, false);
    for (std::size_t r = 0; r < n; ++r) {
        const std::size_t col = order[r];
        rep.values[r] = a(col, col);
        Vec& vec = rep.vectors[r];
        std::size_t imax = 0;
        for (std::size_t i = 0; i < n; ++i) {
            vec[i] = v(i, col);
            if (std::abs(vec[i]) > std::abs(vec[imax])) imax = i;
        }
        // sign convention: largest-magnitude component positive
        if (vec[imax] < 0.0)
            for (double& x : vec) x = -x;
    }
    const double gap_tol = 1e-8 * std::max(scale, 1e-300);
    for (std::size_t r = 0; r + 1 < n; ++r)
        if (std::abs(rep.values[r] - rep.values[r + 1]) < gap_tol)
            rep.degenerate[r] = rep.degenerate[r + 1] = true;
    return rep;
}

// product of eigenvalues (equals det(F) for symmetric F)
inline double a_optimality(const EigenReport& rep) {
    double p = 1.0;
    for (double v : rep.values) p *= v;
    return p;
}

inline double angle_between(const Vec& a, const Vec& b) {
    const double na = std::sqrt(dot(a, a)), nb = std::sqrt(dot(b, b));
    if (na == 0.0 || nb == 0.0)
        throw std::invalid_argument("angle_between: zero vector");
    double c = std::abs(dot(a, b)) / (na * nb);  // direction, not orientation
    c = std::min(c, 1.0);
    return std::acos(c);
}

// ---------------------------------------------------------------------------
// Parameter-plane sweep
// ---------------------------------------------------------------------------

struct PhasePoint {
    double p1 = 0.0, p2 = 0.0;
    double eval_max = 0.0, eval_min = 0.0;
    Vec evec_max, evec_min;
    bool valid = false;
    std::string error;
};

struct PhaseDiagram {
    std::vector<double> grid1, grid2;
    std::vector<PhasePoint> points;  // row-major over (grid1, grid2)

    const PhasePoint& at(std::size_t i, std::size_t j) const {
        return points[i * grid2.size() + j];
    }
};

inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
    if (n < 2 || !(hi > lo)) throw std::invalid_argument("linspace: bad parameters");
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i)
        g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return g;
}

// fim_at(p1, p2) -> 2x2 FIM; a throwing evaluation marks the point invalid
// instead of aborting the sweep.
inline PhaseDiagram phase_diagram(const std::vector<double>& grid1,
                                  const std::vector<double>& grid2,
                                  const std::function<Matrix(double, double)>& fim_at) {
    PhaseDiagram out;
    out.grid1 = grid1;
    out.grid2 = grid2;
    out.points.resize(grid1.size() * grid2.size());
    for (std::size_t i = 0; i < grid1.size(); ++i)
        for (std::size_t j = 0; j < grid2.size(); ++j) {
            PhasePoint& pt = out.points[i * grid2.size() + j];
            pt.p1 = grid1[i];
            pt.p2 = grid2[j];
            try {
                const EigenReport rep = eigen_sym(fim_at(pt.p1, pt.p2));
                pt.eval_max = rep.values.front();
                pt.eval_min = rep.values.back();
                pt.evec_max = rep.vectors.front();
                pt.evec_min = rep.vectors.back();
                pt.valid = true;
            } catch (const std::exception& e) {
                pt.error = e.what();
            }
        }
    return out;
}

inline void write_phase_diagram_csv(const PhaseDiagram& d, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << "p1,p2,evec_max_x,evec_max_y,eval_max,evec_min_x,evec_min_y,eval_min,valid\n";
    out.precision(17);
    for (const PhasePoint& pt : d.points) {
        if (pt.valid)
            out << pt.p1 << ',' << pt.p2 << ',' << pt.evec_max[0] << ',' << pt.evec_max[1]
                << ',' << pt.eval_max << ',' << pt.evec_min[0] << ',' << pt.evec_min[1]
                << ',' << pt.eval_min << ",1\n";
        else
            out << pt.p1 << ',' << pt.p2 << ",0,0,0,0,0,0,0\n";
    }
}

}  // namespace pathsens
