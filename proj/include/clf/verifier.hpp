#pragma once

#include <cstdint>
#include <random>
#include <utility>

#include "clf/system.hpp"
#include "clf/types.hpp"
#include "clf/uncertainty.hpp"

namespace clf {

enum class VerifyMethod { Global, Sensitivity };

struct VerifierResult {
    double lambda_hat = 0.0;            // best (lowest) objective value found
    Matrix a_star, b_star;              // where it was attained
    VerifyMethod method = VerifyMethod::Global;
    std::uint64_t evaluations = 0;
    bool certified = false;             // full global budget ran, nothing below threshold
    // Largest unexplored cell half-diagonal of the global partition, in box
    // coordinates from global_minimize; verify() scales it by ell_ab.
    double lipschitz_gap = 0.0;
};

/// Lipschitz constants implied by the learner bounds: ell_cl bounds the
/// objective's variation per unit operator-norm change of the closed-loop
/// matrix, ell_ab per unit change of (A, B) jointly, and safe_radius is the
/// closed-loop-distance ball around a counter-example inside which no new
/// counter-example can appear.
struct LipschitzBudget {
    double ell_cl;
    double ell_ab;
    double safe_radius;
};

/// lambda_min of [[P, (A+BK)'P], [P(A+BK), P]]; negative values witness a
/// Lyapunov-decrease violation somewhere on the unit sphere.
double objective(const Candidate& cand, const Eigen::Ref<const Matrix>& a,
                 const Eigen::Ref<const Matrix>& b);

LipschitzBudget lipschitz_budget(const Candidate& cand, const ProblemSpec& spec);

/// DIRECT-style deterministic global minimization of the objective over
/// omega. Stops early with a counter-example as soon as any point scores
/// below threshold; otherwise runs the full budget, polishes the best point
/// by local descent, and reports certified = (lambda_hat >= threshold).
VerifierResult global_minimize(const Candidate& cand, const UncertaintySet& omega,
                               std::uint64_t budget, double threshold);

struct RefineResult {
    std::pair<Matrix, Matrix> point;
    double value;
    std::uint64_t evaluations = 0;
};

/// Projected local descent from start (must lie in omega): analytic
/// eigenvalue gradient chained through the box parameterization, central
/// finite differences near eigenvalue coalescence. Never returns a value
/// worse than the start's.
RefineResult sensitivity_refine(const Candidate& cand, const UncertaintySet& omega,
                                const std::pair<Matrix, Matrix>& start, int max_steps);

/// Gradient of the objective in the box coordinates of `bp` at z — the same
/// computation the refiner uses (eigenvector chain rule when the smallest
/// eigenvalue is simple, central differences otherwise).
Vector objective_box_gradient(const Candidate& cand, const BoxParam& bp, const Vector& z);

/// Up to spec.n_t local-descent attempts from random starts (cheap
/// counter-example hunt), then the full global search; rng drives only the
/// start points.
VerifierResult verify(const Candidate& cand, const ProblemSpec& spec, std::mt19937_64& rng);

}  // namespace clf
