#pragma once

#include <utility>
#include <vector>

#include "clf/types.hpp"

namespace clf {

/// Ordered collection of sampled (A, B) pairs driving the learner. Pairs are
/// kept pairwise distinct; near-duplicates indicate a stalled search and are
/// rejected loudly.
class CounterexampleSet {
public:
    CounterexampleSet(Index n, Index m);

    Index state_dim() const { return n_; }
    Index input_dim() const { return m_; }
    Index vec_dim() const { return n_ * n_ + n_ * m_; }
    std::size_t size() const { return items_.size(); }
    bool empty() const { return items_.empty(); }
    const std::vector<std::pair<Matrix, Matrix>>& items() const { return items_; }
    const std::pair<Matrix, Matrix>& operator[](std::size_t k) const { return items_[k]; }

    /// Stacks [vec(A); vec(B)] column-major.
    Vector vectorize(const Eigen::Ref<const Matrix>& a, const Eigen::Ref<const Matrix>& b) const;

    /// Appends a pair. Throws DuplicateCounterexample if an existing item is
    /// within dedup_tol entrywise, DimensionError on shape mismatch.
    void add(const Matrix& a, const Matrix& b, double dedup_tol);

    /// True iff the vectorized pair lies in the convex hull of the stored
    /// items (LP membership test); false on an empty set.
    bool in_hull(const Eigen::Ref<const Matrix>& a, const Eigen::Ref<const Matrix>& b,
                 double tol = 1e-9) const;

    /// Indices of items that are vertices of the convex hull of the
    /// vectorized set: item j is dropped iff it is a convex combination of
    /// the others. Order preserved.
    std::vector<std::size_t> hull_vertex_indices(double tol = 1e-9) const;

    /// The vertex items themselves, in stored order.
    std::vector<std::pair<Matrix, Matrix>> hull_vertices(double tol = 1e-9) const;

private:
    Index n_, m_;
    std::vector<std::pair<Matrix, Matrix>> items_;
};

}  // namespace clf
