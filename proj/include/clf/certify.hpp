#pragma once

#include <cstdint>
#include <utility>

#include "clf/system.hpp"
#include "clf/types.hpp"
#include "clf/uncertainty.hpp"

namespace clf {

struct CertifyOutcome {
    bool pass = false;
    double worst = 0.0;          // lowest objective value encountered
    Matrix a_star, b_star;       // where it occurred
    std::uint64_t checked = 0;   // points evaluated
};

/// Exhaustive vertex check: evaluates the objective at every vertex of an
/// interval set (streamed, memory O(1)) or every explicit polytope vertex;
/// pass iff the minimum is >= -tol. By convexity of the condition this
/// certifies the whole set. Ellipsoids have no vertices: ConfigError.
CertifyOutcome certify_vertices(const Candidate& cand, const UncertaintySet& omega, double tol);

/// Monte-Carlo check over n_samples in-set draws; pass iff the sampled
/// minimum is >= -tol. Deterministic for a fixed seed regardless of the
/// worker-thread count.
CertifyOutcome certify_sampled(const Candidate& cand, const UncertaintySet& omega,
                               std::uint64_t n_samples, std::uint64_t seed, double tol);

/// Brute-force minimum over a uniform grid on the box parameterization
/// (feasible points only); ground truth for verifier tests. Each axis is
/// tiled from its lower edge with round(width / resolution) points, so the
/// step is as close to `resolution` as divides the width evenly. Guarded to
/// search dimension <= 4.
std::pair<double, std::pair<Matrix, Matrix>> grid_oracle(const Candidate& cand,
                                                         const UncertaintySet& omega,
                                                         double resolution);

/// Diagonal of one grid_oracle cell at this resolution, in box coordinates
/// (the natural comparison scale for verifier-vs-oracle bounds).
double grid_cell_diameter(const UncertaintySet& omega, double resolution);

}  // namespace clf
