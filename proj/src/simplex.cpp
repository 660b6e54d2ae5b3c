#include "clf/simplex.hpp"

#include <vector>

namespace clf::simplex {
namespace {

constexpr double kPivotTol = 1e-11;

}  // namespace

std::optional<Vector> feasible_point(const Matrix& e, const Vector& f, double tol) {
    const Index rows = e.rows();
    const Index cols = e.cols();
    if (f.size() != rows) throw DimensionError("feasible_point: rhs length mismatch");

    // Row scaling keeps the pivot tolerance meaningful across problem scales.
    Matrix a = e;
    Vector b = f;
    for (Index i = 0; i < rows; ++i) {
        double s = std::max(a.row(i).cwiseAbs().maxCoeff(), std::abs(b(i)));
        if (s > 0.0) {
            a.row(i) /= s;
            b(i) /= s;
        }
        if (b(i) < 0.0) {
            a.row(i) = -a.row(i);
            b(i) = -b(i);
        }
    }

    // Phase-1 tableau: columns [w | artificials | rhs], basis starts artificial.
    const Index total = cols + rows;
    Matrix t(rows, total + 1);
    t.leftCols(cols) = a;
    t.middleCols(cols, rows) = Matrix::Identity(rows, rows);
    t.col(total) = b;
    std::vector<Index> basis(rows);
    for (Index i = 0; i < rows; ++i) basis[i] = cols + i;

    // Reduced costs for min sum(artificials): z_j - c_j = sum of rows for
    // artificial basis; maintained explicitly.
    Eigen::RowVectorXd cost = Eigen::RowVectorXd::Zero(total + 1);
    for (Index i = 0; i < rows; ++i) cost -= t.row(i);
    for (Index i = 0; i < rows; ++i) cost(cols + i) = 0.0;

    const Index max_pivots = 200 * (rows + cols + 1);
    for (Index pivots = 0; pivots < max_pivots; ++pivots) {
        // Bland: lowest-index column with negative reduced cost.
        Index enter = -1;
        for (Index j = 0; j < total; ++j) {
            if (cost(j) < -kPivotTol) {
                enter = j;
                break;
            }
        }
        if (enter < 0) break;

        Index leave = -1;
        double best_ratio = 0.0;
        for (Index i = 0; i < rows; ++i) {
            if (t(i, enter) > kPivotTol) {
                const double ratio = t(i, total) / t(i, enter);
                if (leave < 0 || ratio < best_ratio - kPivotTol ||
                    (ratio < best_ratio + kPivotTol && basis[i] < basis[leave])) {
                    leave = i;
                    best_ratio = ratio;
                }
            }
        }
        if (leave < 0) break;  // unbounded direction; phase-1 cannot improve

        t.row(leave) /= t(leave, enter);
        for (Index i = 0; i < rows; ++i) {
            if (i != leave && std::abs(t(i, enter)) > 0.0) t.row(i) -= t(i, enter) * t.row(leave);
        }
        cost -= cost(enter) * t.row(leave);
        basis[leave] = enter;
    }

    double infeas = 0.0;
    for (Index i = 0; i < rows; ++i) {
        if (basis[i] >= cols) infeas += t(i, total);
    }
    if (infeas > tol) return std::nullopt;

    Vector w = Vector::Zero(cols);
    for (Index i = 0; i < rows; ++i) {
        if (basis[i] < cols) w(basis[i]) = std::max(0.0, t(i, total));
    }
    return w;
}

bool in_convex_hull(const Matrix& points, const Vector& q, double tol, Vector* weights) {
    const Index d = points.rows();
    const Index m = points.cols();
    if (q.size() != d) throw DimensionError("in_convex_hull: dimension mismatch");
    Matrix e(d + 1, m);
    e.topRows(d) = points;
    e.row(d).setOnes();
    Vector f(d + 1);
    f.head(d) = q;
    f(d) = 1.0;
    auto w = feasible_point(e, f, tol);
    if (!w) return false;
    if (weights) *weights = *w;
    return true;
}

}  // namespace clf::simplex
