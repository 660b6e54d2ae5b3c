#pragma once

#include <optional>

#include "clf/types.hpp"

namespace clf::simplex {

/// Phase-1 feasibility of {w >= 0 : E w = f} by dense primal simplex with
/// Bland's rule. Returns a feasible w, or nullopt when the phase-1 optimum
/// stays above tol (relative to the scale of f).
std::optional<Vector> feasible_point(const Matrix& e, const Vector& f, double tol);

/// Convex-combination membership: is q in conv{columns of points}?
/// Optionally returns the weights.
bool in_convex_hull(const Matrix& points, const Vector& q, double tol, Vector* weights = nullptr);

}  // namespace clf::simplex
