#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <utility>
#include <variant>
#include <vector>

#include "clf/types.hpp"

namespace clf {

/// Entrywise interval uncertainty on A and B; an entry with lo == hi is fixed.
struct IntervalAB {
    Matrix A_lo, A_hi, B_lo, B_hi;
};

/// {A : (vec(A) - c)^T Q (vec(A) - c) - 1 <= 0} with fixed B. vec() stacks
/// columns, so c has length n^2.
struct EllipsoidA {
    Vector c;
    SymMatrix Q;
    Matrix B_fixed;
};

/// Convex hull of an explicit list of (A, B) vertex pairs.
struct PolytopeVerts {
    std::vector<std::pair<Matrix, Matrix>> vertices;
};

using UncertaintySet = std::variant<IntervalAB, EllipsoidA, PolytopeVerts>;

Index state_dim(const UncertaintySet& omega);
Index input_dim(const UncertaintySet& omega);

/// Structural checks (bounds ordered, Q positive definite, nonempty vertex
/// list, consistent shapes). Throws ConfigError.
void validate(const UncertaintySet& omega);

/// Membership up to tol. Interval: entrywise bounds. Ellipsoid: quadratic
/// form <= 1 + tol and B == B_fixed. Polytope: convex-combination LP.
bool contains(const UncertaintySet& omega, const Eigen::Ref<const Matrix>& a,
              const Eigen::Ref<const Matrix>& b, double tol);

/// Deterministic default initial sample: interval midpoints, ellipsoid
/// center, first polytope vertex.
std::pair<Matrix, Matrix> representative(const UncertaintySet& omega);

/// Largest absolute entry reachable in the set (bounding-box magnitude).
double magnitude_scale(const UncertaintySet& omega);

/// Uniform draw from the set: uniform per entry on intervals, uniform in
/// volume on the ellipsoid, Dirichlet(1,...,1) vertex weights on polytopes.
std::pair<Matrix, Matrix> sample(const UncertaintySet& omega, std::mt19937_64& rng);

/// Affine box parameterization of the set for the global optimizer:
/// decode(z) = (a0 + sum_j z_j dA_j, b0 + sum_j z_j dB_j) over z in [lo, hi],
/// with decoded membership characterized by constraint(z) <= 0. For interval
/// sets only the strictly uncertain entries appear as coordinates and the
/// constraint is identically -1; for ellipsoids the box is the tight
/// axis-aligned bounding box (half-widths sqrt((Q^-1)_jj)); for polytopes the
/// coordinates are vertex weights in [0,1]^M constrained by |sum w - 1| - tol.
struct BoxParam {
    Vector lo, hi;
    Matrix a0, b0;
    std::vector<std::pair<Matrix, Matrix>> basis;  // d(A,B)/dz_j, constant
    std::function<double(const Vector&)> constraint;
    std::function<Vector(const Vector&)> project;  // nearest in-set point
    std::function<Vector(const Matrix&, const Matrix&)> encode;  // member -> z
    double constraint_grad_scale = 1.0;

    Index dim() const { return lo.size(); }
    std::pair<Matrix, Matrix> decode(const Vector& z) const;
};

BoxParam box_param(const UncertaintySet& omega, double poly_tol = 1e-9);

/// Lazy Gray-code enumeration of all 2^q vertices of an interval set, q the
/// number of strictly uncertain entries. Consecutive vertices differ in one
/// entry. Guarded at q <= 40.
class VertexStream {
public:
    explicit VertexStream(const IntervalAB& s);

    std::uint64_t count() const { return count_; }
    void reset() { seek(0); }
    void seek(std::uint64_t k);

    /// Writes the next vertex into (a, b); returns false when exhausted.
    bool next(Matrix& a, Matrix& b);

private:
    struct Coord {
        bool in_b;
        Index row, col;
        double lo, hi;
    };
    std::vector<Coord> coords_;
    Matrix a_, b_;  // current vertex state
    std::uint64_t count_ = 0;
    std::uint64_t pos_ = 0;
    std::uint64_t gray_ = 0;
};

inline VertexStream vertex_stream(const IntervalAB& s) { return VertexStream(s); }

}  // namespace clf
