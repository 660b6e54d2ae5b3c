#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "clf/types.hpp"
#include "clf/uncertainty.hpp"

namespace clf {

/// Quadratic-function / linear-feedback candidate: V(x) = x'Px, u = Kx.
struct Candidate {
    SymMatrix P;
    Matrix K;
};

/// Full synthesis problem: the uncertain system, feasibility bounds, and
/// search configuration. `accept_threshold` is the verifier's pass bar
/// (0 for the strict variant, up to eps/2 for the faster one).
struct ProblemSpec {
    Index n = 0;
    Index m = 0;
    UncertaintySet omega;
    double eps = 1e-3;
    double eta = 1e3;
    double w_max = 1e3;
    std::optional<std::pair<Matrix, Matrix>> initial_sample;
    double accept_threshold = 0.5e-3;  // eps / 2
    int max_iters = 100;
    std::uint64_t verifier_budget = 0;  // 0 = auto: min(2000 * search dim, 1e6)
    int n_t = 3;
    std::uint64_t seed = 0;

    /// Budget actually used for a search space of the given dimension.
    std::uint64_t resolved_budget(Index dim) const;
};

/// Structural and semantic checks; throws ConfigError with a field-specific
/// message. Also validates omega and the initial sample's membership.
void validate(const ProblemSpec& spec);

/// A + B*K.
Matrix closed_loop(const Eigen::Ref<const Matrix>& a, const Eigen::Ref<const Matrix>& b,
                   const Eigen::Ref<const Matrix>& k);

/// x'((A+BK)' P (A+BK) - P) x — the one-step change of V along the closed
/// loop; negative values mean decrease.
double lyapunov_decrease(const SymMatrix& p, const Eigen::Ref<const Matrix>& a,
                         const Eigen::Ref<const Matrix>& b, const Eigen::Ref<const Matrix>& k,
                         const Eigen::Ref<const Vector>& x);

}  // namespace clf
