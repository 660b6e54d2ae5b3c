#pragma once

#include <vector>

#include "clf/types.hpp"

namespace clf::lmi {

/// One affine term x[var] * coeff inside a block; coeff is symmetric.
struct Term {
    int var;
    Matrix coeff;
};

/// Affine matrix-valued map F(x) = f0 + sum_terms x[var] * coeff, required
/// positive semidefinite by the program.
struct Block {
    Matrix f0;
    std::vector<Term> terms;
    Index order() const { return f0.rows(); }
};

struct Options {
    double gap_tol = 1e-9;  // absolute bound on the final objective gap
    double mu = 20.0;       // path-following growth factor per stage
    int max_newton = 120;   // damped Newton steps per centering stage
    int max_stages = 64;
};

struct Result {
    Vector x;
    double objective;  // c'x at the returned point
    int newton_steps = 0;
    int stages = 0;
};

/// Maximizes c'x subject to every block being positive semidefinite, by
/// log-det barrier path following from the strictly feasible start x0.
/// The returned point is within opts.gap_tol of the optimum in objective
/// value. Throws SolverStalled if a centering stage fails to converge and
/// InvalidState if x0 is not strictly feasible.
Result maximize(const Vector& c, const std::vector<Block>& blocks, const Vector& x0,
                const Options& opts = {});

}  // namespace clf::lmi
