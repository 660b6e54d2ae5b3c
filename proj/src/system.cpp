#include "clf/system.hpp"

#include <algorithm>
#include <cmath>

#include "clf/errors.hpp"

namespace clf {

std::uint64_t ProblemSpec::resolved_budget(Index dim) const {
    if (verifier_budget > 0) return verifier_budget;
    const std::uint64_t d = static_cast<std::uint64_t>(std::max<Index>(dim, 1));
    return std::min<std::uint64_t>(2000 * d, 1000000);
}

void validate(const ProblemSpec& spec) {
    if (spec.n <= 0 || spec.m <= 0) throw ConfigError("state and input dimensions must be positive");
    validate(spec.omega);
    if (state_dim(spec.omega) != spec.n || input_dim(spec.omega) != spec.m)
        throw ConfigError("uncertainty set dimensions disagree with n, m");
    if (!(spec.eps > 0.0) || !std::isfinite(spec.eps)) throw ConfigError("eps must be positive");
    if (!(spec.eta >= spec.eps) || !std::isfinite(spec.eta))
        throw ConfigError("eta must be finite and at least eps");
    if (!(spec.w_max > 0.0) || !std::isfinite(spec.w_max)) throw ConfigError("w_max must be positive");
    if (spec.accept_threshold < 0.0 || spec.accept_threshold > 0.5 * spec.eps)
        throw ConfigError("accept_threshold must lie in [0, eps/2]");
    if (spec.max_iters < 1) throw ConfigError("max_iters must be at least 1");
    if (spec.n_t < 0) throw ConfigError("n_t must be nonnegative");
    if (spec.initial_sample) {
        const auto& [a, b] = *spec.initial_sample;
        if (!contains(spec.omega, a, b, 1e-9))
            throw ConfigError("initial sample is not a member of the uncertainty set");
    }
}

Matrix closed_loop(const Eigen::Ref<const Matrix>& a, const Eigen::Ref<const Matrix>& b,
                   const Eigen::Ref<const Matrix>& k) {
    const Index n = a.rows();
    if (a.cols() != n) throw DimensionError("closed_loop: A must be square");
    if (b.rows() != n) throw DimensionError("closed_loop: B row count mismatch");
    if (k.rows() != b.cols() || k.cols() != n) throw DimensionError("closed_loop: K shape mismatch");
    return a + b * k;
}

double lyapunov_decrease(const SymMatrix& p, const Eigen::Ref<const Matrix>& a,
                         const Eigen::Ref<const Matrix>& b, const Eigen::Ref<const Matrix>& k,
                         const Eigen::Ref<const Vector>& x) {
    const Matrix acl = closed_loop(a, b, k);
    if (p.order() != acl.rows() || x.size() != acl.rows())
        throw DimensionError("lyapunov_decrease: dimension mismatch");
    const Vector xp = acl * x;
    return xp.dot(p.mat() * xp) - x.dot(p.mat() * x);
}

}  // namespace clf
