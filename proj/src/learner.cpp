#include "clf/learner.hpp"

#include <algorithm>
#include <cmath>

#include "clf/errors.hpp"
#include "clf/lmi_solver.hpp"
#include "clf/spectral.hpp"

namespace clf {

using spectral::inverse_spd;
using spectral::lambda_min;

namespace {

/// Variable layout: lower-triangle of X column-major, then W row-major,
/// then the margin t last.
struct Layout {
    Index n, m;
    Index x_count() const { return n * (n + 1) / 2; }
    Index w_count() const { return m * n; }
    Index total() const { return x_count() + w_count() + 1; }
    int x_var(Index i, Index j) const {  // requires i >= j
        return static_cast<int>(j * n - j * (j - 1) / 2 + (i - j));
    }
    int w_var(Index i, Index j) const { return static_cast<int>(x_count() + i * n + j); }
    int t_var() const { return static_cast<int>(total() - 1); }

    Matrix x_basis(Index i, Index j) const {  // symmetric unit basis element
        Matrix s = Matrix::Zero(n, n);
        s(i, j) = 1.0;
        s(j, i) = 1.0;
        return s;
    }
    SymMatrix extract_x(const Vector& v) const {
        Matrix x(n, n);
        for (Index j = 0; j < n; ++j)
            for (Index i = j; i < n; ++i) x(i, j) = x(j, i) = v(x_var(i, j));
        return SymMatrix(x);
    }
    Matrix extract_w(const Vector& v) const {
        Matrix w(m, n);
        for (Index i = 0; i < m; ++i)
            for (Index j = 0; j < n; ++j) w(i, j) = v(w_var(i, j));
        return w;
    }
};

void check_problem(const LearnerProblem& pb) {
    if (pb.n <= 0 || pb.m <= 0) throw ConfigError("learner dimensions must be positive");
    if (pb.vertices.empty()) throw ConfigError("learner needs at least one vertex");
    if (!(pb.eps > 0.0) || !(pb.eta >= pb.eps)) throw ConfigError("learner needs eta >= eps > 0");
    if (!(pb.w_max > 0.0)) throw ConfigError("learner needs w_max > 0");
    for (const auto& [a, b] : pb.vertices) {
        if (a.rows() != pb.n || a.cols() != pb.n || b.rows() != pb.n || b.cols() != pb.m)
            throw ConfigError("learner vertex shape mismatch");
        require_finite(a, "learner vertex A");
        require_finite(b, "learner vertex B");
    }
}

}  // namespace

SymMatrix feasibility_block(const SymMatrix& x, const Eigen::Ref<const Matrix>& w,
                            const Eigen::Ref<const Matrix>& a, const Eigen::Ref<const Matrix>& b) {
    const Index n = x.order();
    if (a.rows() != n || a.cols() != n || b.rows() != n || w.cols() != n || w.rows() != b.cols())
        throw DimensionError("feasibility_block: dimension mismatch");
    Matrix blk(2 * n, 2 * n);
    const Matrix cross = x.mat() * a.transpose() + w.transpose() * b.transpose();
    blk.topLeftCorner(n, n) = x.mat();
    blk.topRightCorner(n, n) = cross;
    blk.bottomLeftCorner(n, n) = cross.transpose();
    blk.bottomRightCorner(n, n) = x.mat();
    return SymMatrix(blk);
}

double feasibility_tolerance(double eta) { return 1e-7 * std::max(1.0, eta); }

LearnerSolution solve(const LearnerProblem& pb) {
    check_problem(pb);
    const Layout lay{pb.n, pb.m};
    const Index n = pb.n, m = pb.m;

    std::vector<lmi::Block> blocks;
    // One block per vertex: feasibility_block(X, W) - t*I >= 0.
    for (const auto& [a, b] : pb.vertices) {
        lmi::Block blk;
        blk.f0 = Matrix::Zero(2 * n, 2 * n);
        for (Index j = 0; j < n; ++j)
            for (Index i = j; i < n; ++i) {
                const Matrix s = lay.x_basis(i, j);
                Matrix coeff(2 * n, 2 * n);
                const Matrix cross = s * a.transpose();
                coeff.topLeftCorner(n, n) = s;
                coeff.topRightCorner(n, n) = cross;
                coeff.bottomLeftCorner(n, n) = cross.transpose();
                coeff.bottomRightCorner(n, n) = s;
                blk.terms.push_back({lay.x_var(i, j), std::move(coeff)});
            }
        for (Index i = 0; i < m; ++i)
            for (Index j = 0; j < n; ++j) {
                Matrix d = Matrix::Zero(m, n);
                d(i, j) = 1.0;
                Matrix coeff = Matrix::Zero(2 * n, 2 * n);
                const Matrix cross = d.transpose() * b.transpose();
                coeff.topRightCorner(n, n) = cross;
                coeff.bottomLeftCorner(n, n) = cross.transpose();
                blk.terms.push_back({lay.w_var(i, j), std::move(coeff)});
            }
        blk.terms.push_back({lay.t_var(), -Matrix::Identity(2 * n, 2 * n)});
        blocks.push_back(std::move(blk));
    }
    {
        // eta*I - X >= 0.
        lmi::Block blk;
        blk.f0 = pb.eta * Matrix::Identity(n, n);
        for (Index j = 0; j < n; ++j)
            for (Index i = j; i < n; ++i) blk.terms.push_back({lay.x_var(i, j), -lay.x_basis(i, j)});
        blocks.push_back(std::move(blk));
    }
    for (Index i = 0; i < m; ++i)
        for (Index j = 0; j < n; ++j) {
            // w_max - W_ij >= 0 and w_max + W_ij >= 0.
            lmi::Block up, dn;
            up.f0 = dn.f0 = Matrix::Constant(1, 1, pb.w_max);
            up.terms.push_back({lay.w_var(i, j), -Matrix::Identity(1, 1)});
            dn.terms.push_back({lay.w_var(i, j), Matrix::Identity(1, 1)});
            blocks.push_back(std::move(up));
            blocks.push_back(std::move(dn));
        }

    // Strictly feasible start: X = (eta/2) I, W = 0, t below the worst block.
    Vector x0 = Vector::Zero(lay.total());
    for (Index i = 0; i < n; ++i) x0(lay.x_var(i, i)) = 0.5 * pb.eta;
    const SymMatrix x_start = lay.extract_x(x0);
    const Matrix w_start = Matrix::Zero(m, n);
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& [a, b] : pb.vertices)
        worst = std::min(worst, lambda_min(feasibility_block(x_start, w_start, a, b)));
    x0(lay.t_var()) = worst - 0.1 * std::max(1.0, std::abs(worst));

    Vector c = Vector::Zero(lay.total());
    c(lay.t_var()) = 1.0;

    lmi::Options opts;
    opts.gap_tol = 1e-9 * std::max(1.0, pb.eta);
    const lmi::Result res = lmi::maximize(c, blocks, x0, opts);

    LearnerSolution sol;
    sol.X = lay.extract_x(res.x);
    sol.W = lay.extract_w(res.x);
    sol.margin = std::numeric_limits<double>::infinity();
    for (const auto& [a, b] : pb.vertices)
        sol.margin = std::min(sol.margin, lambda_min(feasibility_block(sol.X, sol.W, a, b)));
    if (sol.margin >= pb.eps - feasibility_tolerance(pb.eta)) {
        sol.status = LearnerStatus::Feasible;
        sol.P = inverse_spd(sol.X);
        sol.K = sol.W * sol.P.mat();
    } else {
        sol.status = LearnerStatus::Infeasible;
    }
    return sol;
}

Candidate extract_candidate(const LearnerSolution& sol) {
    if (sol.status != LearnerStatus::Feasible)
        throw InvalidState("no candidate available from an infeasible learner round");
    return Candidate{sol.P, sol.K};
}

}  // namespace clf
