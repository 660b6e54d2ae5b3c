#pragma once

#include <utility>
#include <vector>

#include "clf/system.hpp"
#include "clf/types.hpp"

namespace clf {

/// Constraint data for one synthesis round: find X, W with
/// [[X, X*Ah' + W'*Bh'], [*, X]] >= eps*I at every stored vertex (Ah, Bh),
/// X <= eta*I, |W_ij| <= w_max.
struct LearnerProblem {
    std::vector<std::pair<Matrix, Matrix>> vertices;
    double eps = 1e-3;
    double eta = 1e3;
    double w_max = 1e3;
    Index n = 0;
    Index m = 0;
};

enum class LearnerStatus { Feasible, Infeasible };

struct LearnerSolution {
    SymMatrix X;    // n x n
    Matrix W;       // m x n
    double margin;  // min over vertices of lambda_min of the block, recomputed
    SymMatrix P;    // X^-1, populated only when Feasible
    Matrix K;       // W * P, populated only when Feasible
    LearnerStatus status = LearnerStatus::Infeasible;
};

/// The 2n x 2n feasibility block [[X, X*A' + W'*B'], [A*X + B*W, X]] whose
/// uniform eigenvalue lower bound across vertices is the margin.
SymMatrix feasibility_block(const SymMatrix& x, const Eigen::Ref<const Matrix>& w,
                            const Eigen::Ref<const Matrix>& a, const Eigen::Ref<const Matrix>& b);

/// Margin accuracy used for the Feasible/Infeasible decision; relative to the
/// problem's dominant scale eta.
double feasibility_tolerance(double eta);

/// Maximizes the uniform block margin t subject to the box constraints and
/// decides feasibility: Feasible iff the recomputed margin reaches
/// eps - feasibility_tolerance(eta). Throws SolverStalled on numerical
/// failure (never reported as Infeasible) and ConfigError on bad input.
LearnerSolution solve(const LearnerProblem& problem);

/// (P, K) from a Feasible solution; throws InvalidState otherwise.
Candidate extract_candidate(const LearnerSolution& sol);

}  // namespace clf
