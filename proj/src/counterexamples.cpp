#include "clf/counterexamples.hpp"

#include <cmath>

#include "clf/errors.hpp"
#include "clf/simplex.hpp"

namespace clf {

using simplex::in_convex_hull;

CounterexampleSet::CounterexampleSet(Index n, Index m) : n_(n), m_(m) {
    if (n <= 0 || m <= 0) throw DimensionError("counterexample set needs positive dimensions");
}

Vector CounterexampleSet::vectorize(const Eigen::Ref<const Matrix>& a,
                                    const Eigen::Ref<const Matrix>& b) const {
    if (a.rows() != n_ || a.cols() != n_ || b.rows() != n_ || b.cols() != m_)
        throw DimensionError("vectorize: pair shape mismatch");
    Vector v(vec_dim());
    v.head(n_ * n_) = Eigen::Map<const Vector>(a.data(), a.size());
    v.tail(n_ * m_) = Eigen::Map<const Vector>(b.data(), b.size());
    return v;
}

void CounterexampleSet::add(const Matrix& a, const Matrix& b, double dedup_tol) {
    if (a.rows() != n_ || a.cols() != n_ || b.rows() != n_ || b.cols() != m_)
        throw DimensionError("add: pair shape mismatch");
    require_finite(a, "counterexample A");
    require_finite(b, "counterexample B");
    for (const auto& [ea, eb] : items_) {
        const double dist = std::max((ea - a).cwiseAbs().maxCoeff(), (eb - b).cwiseAbs().maxCoeff());
        if (dist <= dedup_tol)
            throw DuplicateCounterexample("counterexample already recorded within tolerance");
    }
    items_.emplace_back(a, b);
}

bool CounterexampleSet::in_hull(const Eigen::Ref<const Matrix>& a,
                                const Eigen::Ref<const Matrix>& b, double tol) const {
    if (items_.empty()) return false;
    Matrix points(vec_dim(), static_cast<Index>(items_.size()));
    for (Index k = 0; k < points.cols(); ++k) {
        const auto& [ea, eb] = items_[static_cast<std::size_t>(k)];
        points.col(k) = vectorize(ea, eb);
    }
    return in_convex_hull(points, vectorize(a, b), tol);
}

std::vector<std::size_t> CounterexampleSet::hull_vertex_indices(double tol) const {
    if (items_.empty()) throw InvalidState("hull of an empty counterexample set");
    const auto count = items_.size();
    std::vector<std::size_t> keep;
    if (count == 1) return {0};
    Matrix points(vec_dim(), static_cast<Index>(count));
    for (Index k = 0; k < points.cols(); ++k) {
        const auto& [ea, eb] = items_[static_cast<std::size_t>(k)];
        points.col(k) = vectorize(ea, eb);
    }
    Matrix others(vec_dim(), static_cast<Index>(count) - 1);
    for (std::size_t j = 0; j < count; ++j) {
        Index w = 0;
        for (Index k = 0; k < points.cols(); ++k)
            if (k != static_cast<Index>(j)) others.col(w++) = points.col(k);
        if (!in_convex_hull(others, points.col(static_cast<Index>(j)), tol))
            keep.push_back(j);
    }
    // Degenerate all-duplicates cloud: keep the first point so the learner
    // always has at least one constraint.
    if (keep.empty()) keep.push_back(0);
    return keep;
}

std::vector<std::pair<Matrix, Matrix>> CounterexampleSet::hull_vertices(double tol) const {
    std::vector<std::pair<Matrix, Matrix>> out;
    for (std::size_t j : hull_vertex_indices(tol)) out.push_back(items_[j]);
    return out;
}

}  // namespace clf
