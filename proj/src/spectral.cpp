#include "clf/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace clf::spectral {

double lambda_min(const SymMatrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m.mat(), Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

double lambda_max(const SymMatrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m.mat(), Eigen::EigenvaluesOnly);
    return es.eigenvalues()(m.order() - 1);
}

double op_norm(const Eigen::Ref<const Matrix>& m) {
    require_finite(m, "op_norm");
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues()(0);
}

SymMatrix xi(const SymMatrix& p, const Eigen::Ref<const Matrix>& a_cl) {
    const Index n = p.order();
    if (a_cl.rows() != n || a_cl.cols() != n)
        throw DimensionError("xi: A_cl must be square of the same order as P");
    require_finite(a_cl, "xi");
    const Matrix pa = p.mat() * a_cl;
    Matrix out(2 * n, 2 * n);
    out.topLeftCorner(n, n) = p.mat();
    out.topRightCorner(n, n) = pa.transpose();
    out.bottomLeftCorner(n, n) = pa;
    out.bottomRightCorner(n, n) = p.mat();
    return SymMatrix(out);
}

bool is_psd(const SymMatrix& m, double tol) {
    return lambda_min(m) >= -tol;
}

double weyl_gap(const SymMatrix& k, const SymMatrix& l) {
    if (k.order() != l.order()) throw DimensionError("weyl_gap: order mismatch");
    const SymMatrix sum(k.mat() + l.mat());
    return std::abs(lambda_min(k) - lambda_min(sum));
}

SymMatrix inverse_spd(const SymMatrix& m) {
    const Index n = m.order();
    Eigen::LLT<Matrix> llt(m.mat());
    if (llt.info() != Eigen::Success || lambda_min(m) <= 0.0)
        throw NotSPD("inverse_spd: matrix is not positive definite");
    Matrix inv = llt.solve(Matrix::Identity(n, n));
    // One step of Newton refinement when the factorization residual is at
    // the tolerance edge (ill-conditioned inputs near kappa ~ 1e12).
    const double tol = 1e-10 * static_cast<double>(n);
    for (int it = 0; it < 3; ++it) {
        const Matrix resid = m.mat() * inv - Matrix::Identity(n, n);
        if (op_norm(resid) <= 0.25 * tol) break;
        inv = inv - inv * resid;
    }
    return SymMatrix(inv);
}

SmallestEig smallest_eig(const SymMatrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m.mat());
    SmallestEig out;
    out.value = es.eigenvalues()(0);
    out.vector = es.eigenvectors().col(0);
    out.gap = m.order() > 1 ? es.eigenvalues()(1) - es.eigenvalues()(0) : 0.0;
    return out;
}

}  // namespace clf::spectral
