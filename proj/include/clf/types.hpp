#pragma once

#include <Eigen/Dense>

#include "clf/errors.hpp"

namespace clf {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Dense symmetric matrix, symmetric by construction: the constructor
/// averages its argument with its transpose, so entries(i,j) == entries(j,i)
/// holds exactly afterwards. Non-finite input is rejected.
class SymMatrix {
public:
    SymMatrix() = default;

    explicit SymMatrix(const Eigen::Ref<const Matrix>& m) {
        if (m.rows() != m.cols())
            throw DimensionError("SymMatrix: input is " + std::to_string(m.rows()) + "x" +
                                 std::to_string(m.cols()) + ", expected square");
        if (!m.allFinite()) throw InvalidMatrix("SymMatrix: non-finite entries");
        entries_ = 0.5 * (m + m.transpose());
    }

    static SymMatrix identity(Index n) { return SymMatrix(Matrix::Identity(n, n)); }

    Index order() const { return entries_.rows(); }
    const Matrix& mat() const { return entries_; }
    double operator()(Index i, Index j) const { return entries_(i, j); }

    bool operator==(const SymMatrix& other) const { return entries_ == other.entries_; }

private:
    Matrix entries_;
};

inline void require_finite(const Eigen::Ref<const Matrix>& m, const char* what) {
    if (!m.allFinite()) throw InvalidMatrix(std::string(what) + ": non-finite entries");
}

}  // namespace clf
