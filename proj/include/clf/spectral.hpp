#pragma once

#include "clf/types.hpp"

namespace clf::spectral {

/// Smallest eigenvalue of a symmetric matrix.
double lambda_min(const SymMatrix& m);

/// Largest eigenvalue of a symmetric matrix.
double lambda_max(const SymMatrix& m);

/// l2-induced operator norm (largest singular value).
double op_norm(const Eigen::Ref<const Matrix>& m);

/// The Schur-complement block matrix [[P, A_cl^T P], [P A_cl, P]] whose
/// positive semidefiniteness is equivalent to the quadratic decrease
/// condition of the closed loop A_cl under V(x) = x^T P x.
SymMatrix xi(const SymMatrix& p, const Eigen::Ref<const Matrix>& a_cl);

/// True iff lambda_min(m) >= -tol.
bool is_psd(const SymMatrix& m, double tol);

/// |lambda_min(k) - lambda_min(k + l)|. Bounded by op_norm(l) (Weyl).
double weyl_gap(const SymMatrix& k, const SymMatrix& l);

/// Inverse of a symmetric positive definite matrix. Throws NotSPD otherwise.
/// The result satisfies op_norm(m * inv - I) <= 1e-10 * order.
SymMatrix inverse_spd(const SymMatrix& m);

/// Smallest eigenvalue with its (unit) eigenvector and the gap to the
/// second-smallest eigenvalue. Used by the sensitivity-based verifier.
struct SmallestEig {
    double value = 0.0;
    Vector vector;
    double gap = 0.0;  // lambda_2 - lambda_1, 0 for 1x1 matrices
};
SmallestEig smallest_eig(const SymMatrix& m);

}  // namespace clf::spectral
