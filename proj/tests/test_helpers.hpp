#pragma once

// Shared oracles and utilities for the test binaries. Everything here is
// deliberately implemented by a different route than the library code it
// checks (characteristic-polynomial bisection instead of an eigensolver,
// monotone-chain hulls instead of LP membership, Kronecker solves instead of
// iteration), so agreement is meaningful.

#include <algorithm>
#include <array>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "clf/random.hpp"
#include "clf/types.hpp"

namespace testutil {

inline std::string problems_path(const std::string& name) {
    return std::string(CLF_PROBLEMS_DIR) + "/" + name;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

/// Smallest eigenvalue of a symmetric matrix by sign-scanning and bisecting
/// the characteristic polynomial det(M - lambda*I) (LU determinants only; no
/// eigensolver involved). Requires the two smallest eigenvalues to be
/// separated by more than the scan step, which random test matrices satisfy.
inline double lambda_min_charpoly(const clf::Matrix& m, int scan_steps = 20000) {
    const clf::Index n = m.rows();
    if (n == 1) return m(0, 0);
    const clf::Matrix sym = 0.5 * (m + m.transpose());
    double radius = 0.0;  // Gershgorin: all eigenvalues within the max row sum
    for (clf::Index i = 0; i < n; ++i) radius = std::max(radius, sym.row(i).cwiseAbs().sum());
    radius += 1.0;
    const auto f = [&](double lam) {
        return (sym - lam * clf::Matrix::Identity(n, n)).partialPivLu().determinant();
    };
    double lo = -radius;
    double flo = f(lo);
    if (!(flo > 0.0)) throw std::runtime_error("charpoly oracle: bad lower bracket");
    const double step = 2.0 * radius / scan_steps;
    double hi = lo;
    bool bracketed = false;
    for (int i = 1; i <= scan_steps; ++i) {
        hi = -radius + i * step;
        const double fhi = f(hi);
        if (fhi <= 0.0) {
            bracketed = true;
            break;
        }
        lo = hi;
    }
    if (!bracketed) throw std::runtime_error("charpoly oracle: no sign change found");
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

/// Indices of the strict convex-hull vertices of a 2-D point cloud via the
/// Andrew monotone chain (collinear interior points are dropped).
inline std::set<std::size_t> hull_vertices_2d(const std::vector<std::array<double, 2>>& pts) {
    const std::size_t n = pts.size();
    if (n <= 2) {
        std::set<std::size_t> all;
        for (std::size_t i = 0; i < n; ++i) all.insert(i);
        return all;
    }
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (pts[a][0] != pts[b][0]) return pts[a][0] < pts[b][0];
        return pts[a][1] < pts[b][1];
    });
    const auto cross = [&](std::size_t o, std::size_t a, std::size_t b) {
        return (pts[a][0] - pts[o][0]) * (pts[b][1] - pts[o][1]) -
               (pts[a][1] - pts[o][1]) * (pts[b][0] - pts[o][0]);
    };
    std::vector<std::size_t> chain;
    const auto build = [&](auto begin, auto end) {
        const std::size_t base = chain.size();
        for (auto it = begin; it != end; ++it) {
            while (chain.size() >= base + 2 &&
                   cross(chain[chain.size() - 2], chain[chain.size() - 1], *it) <= 0.0)
                chain.pop_back();
            chain.push_back(*it);
        }
        chain.pop_back();  // endpoint repeats as the next chain's start
    };
    build(order.begin(), order.end());
    build(order.rbegin(), order.rend());
    return {chain.begin(), chain.end()};
}

/// Solves A'PA - P = -Q for symmetric Q via the n^2 x n^2 Kronecker system
/// (I - kron(A', A')) vec(P) = vec(Q); small n only.
inline clf::Matrix dlyap(const clf::Matrix& a, const clf::Matrix& q) {
    const clf::Index n = a.rows();
    const clf::Index nn = n * n;
    const clf::Matrix at = a.transpose();
    clf::Matrix kron(nn, nn);  // kron(A', A'), column-major vec convention
    for (clf::Index bi = 0; bi < n; ++bi)
        for (clf::Index bj = 0; bj < n; ++bj)
            kron.block(bi * n, bj * n, n, n) = at(bi, bj) * at;
    const clf::Matrix lhs = clf::Matrix::Identity(nn, nn) - kron;
    const clf::Vector vq = Eigen::Map<const clf::Vector>(q.data(), nn);
    const clf::Vector vp = lhs.partialPivLu().solve(vq);
    clf::Matrix p = Eigen::Map<const clf::Matrix>(vp.data(), n, n);
    return 0.5 * (p + p.transpose());
}

inline double uniform01(std::mt19937_64& rng) { return clf::rnd::uniform(rng, 0.0, 1.0); }

inline clf::Matrix random_matrix(std::mt19937_64& rng, clf::Index rows, clf::Index cols,
                                 double scale = 1.0) {
    clf::Matrix m(rows, cols);
    for (clf::Index j = 0; j < cols; ++j)
        for (clf::Index i = 0; i < rows; ++i) m(i, j) = scale * clf::rnd::gaussian(rng);
    return m;
}

inline clf::SymMatrix random_sym(std::mt19937_64& rng, clf::Index n, double scale = 1.0) {
    return clf::SymMatrix(random_matrix(rng, n, n, scale));
}

/// Random SPD matrix with eigenvalues drawn uniformly in [lo, hi]: Q D Q'
/// with Q from the QR factorization of a Gaussian matrix.
inline clf::SymMatrix random_spd(std::mt19937_64& rng, clf::Index n, double lo, double hi) {
    const clf::Matrix g = random_matrix(rng, n, n);
    const clf::Matrix q = Eigen::HouseholderQR<clf::Matrix>(g).householderQ();
    clf::Vector d(n);
    for (clf::Index i = 0; i < n; ++i) d(i) = clf::rnd::uniform(rng, lo, hi);
    return clf::SymMatrix(q * d.asDiagonal() * q.transpose());
}

/// Report JSON with the wall-clock section removed, for byte comparisons.
inline std::string strip_timings(const std::string& report_json) {
    auto j = nlohmann::ordered_json::parse(report_json);
    j.erase("timings");
    return j.dump(2);
}

}  // namespace testutil
