#include "clf/lmi_solver.hpp"

#include <cmath>
#include <optional>

#include <Eigen/Cholesky>

#include "clf/errors.hpp"

namespace clf::lmi {
namespace {

Matrix block_value(const Block& blk, const Vector& x) {
    Matrix f = blk.f0;
    for (const auto& t : blk.terms) f += x(t.var) * t.coeff;
    return f;
}

/// Barrier value -tau*c'x - sum_k log det F_k(x); empty when some block is
/// not positive definite at x.
std::optional<double> barrier_value(const Vector& c, const std::vector<Block>& blocks,
                                    const Vector& x, double tau) {
    double val = -tau * c.dot(x);
    for (const auto& blk : blocks) {
        Eigen::LLT<Matrix> llt(block_value(blk, x));
        if (llt.info() != Eigen::Success) return std::nullopt;
        const Matrix l = llt.matrixL();
        double logdet = 0.0;
        for (Index i = 0; i < l.rows(); ++i) {
            if (!(l(i, i) > 0.0)) return std::nullopt;
            logdet += std::log(l(i, i));
        }
        val -= 2.0 * logdet;
    }
    return val;
}

void gradient_hessian(const Vector& c, const std::vector<Block>& blocks, const Vector& x,
                      double tau, Vector& g, Matrix& h) {
    const Index nv = x.size();
    g = -tau * c;
    h = Matrix::Zero(nv, nv);
    std::vector<Matrix> s;
    for (const auto& blk : blocks) {
        Eigen::LLT<Matrix> llt(block_value(blk, x));
        if (llt.info() != Eigen::Success)
            throw InvalidState("barrier derivatives requested at an infeasible point");
        const auto nt = blk.terms.size();
        s.clear();
        s.reserve(nt);
        for (const auto& t : blk.terms) s.push_back(llt.solve(t.coeff));
        for (std::size_t i = 0; i < nt; ++i) {
            const int vi = blk.terms[i].var;
            g(vi) -= s[i].trace();
            for (std::size_t j = i; j < nt; ++j) {
                const int vj = blk.terms[j].var;
                const double hij = (s[i].array() * s[j].transpose().array()).sum();
                h(vi, vj) += hij;
                if (vi != vj) h(vj, vi) += hij;
            }
        }
    }
}

}  // namespace

Result maximize(const Vector& c, const std::vector<Block>& blocks, const Vector& x0,
                const Options& opts) {
    if (c.size() != x0.size()) throw DimensionError("objective/start length mismatch");
    for (const auto& blk : blocks) {
        if (blk.f0.rows() != blk.f0.cols()) throw DimensionError("block constant must be square");
        for (const auto& t : blk.terms) {
            if (t.var < 0 || t.var >= c.size()) throw DimensionError("block term variable out of range");
            if (t.coeff.rows() != blk.f0.rows() || t.coeff.cols() != blk.f0.cols())
                throw DimensionError("block term coefficient shape mismatch");
        }
    }

    double nu = 0.0;  // total barrier parameter = sum of block orders
    for (const auto& blk : blocks) nu += static_cast<double>(blk.order());
    if (nu == 0.0) return {x0, c.dot(x0), 0, 0};

    Result res;
    res.x = x0;
    if (!barrier_value(c, blocks, res.x, 0.0))
        throw InvalidState("barrier start point is not strictly feasible");

    constexpr double kCenterTol = 1e-10;  // Newton-decrement^2 / 2 threshold
    // When rounding noise stops the iteration from moving, a decrement of
    // lambda <= 0.14 (lambda^2/2 <= 1e-2) still keeps the point inside the
    // quadratic-convergence region, where the objective gap is within a
    // factor (1 + lambda/sqrt(nu)) of the ideal nu/tau.
    constexpr double kNoiseCenterTol = 1e-2;
    constexpr double kArmijo = 0.01;
    double tau = 1.0;
    Vector g;
    Matrix h;
    for (int stage = 0; stage < opts.max_stages; ++stage) {
        ++res.stages;
        int iter = 0;
        for (; iter < opts.max_newton; ++iter) {
            gradient_hessian(c, blocks, res.x, tau, g, h);
            Vector d;
            double ridge = 0.0;
            for (int attempt = 0; attempt < 6; ++attempt) {
                Matrix hr = h;
                if (ridge > 0.0) hr.diagonal().array() += ridge;
                Eigen::LDLT<Matrix> ldlt(hr);
                if (ldlt.info() == Eigen::Success) {
                    d = ldlt.solve(-g);
                    if (d.allFinite() && -g.dot(d) >= 0.0) break;
                }
                d.resize(0);
                ridge = (ridge == 0.0) ? 1e-12 * (1.0 + h.trace() / static_cast<double>(h.rows()))
                                       : ridge * 100.0;
            }
            if (d.size() == 0) throw SolverStalled("barrier Hessian solve failed");

            const double lambda2 = -g.dot(d);  // Newton decrement squared
            if (0.5 * lambda2 <= kCenterTol) break;

            // At the floating-point noise floor the decrement stops being
            // meaningful: a step below ~1 ulp of x cannot re-center further,
            // it only chases rounding noise in the log-det values.
            if (d.cwiseAbs().maxCoeff() <= 1e-13 * (1.0 + res.x.cwiseAbs().maxCoeff())) {
                if (0.5 * lambda2 <= kNoiseCenterTol) break;  // numerically centered
                throw SolverStalled("barrier step vanished away from the central path");
            }

            const double phi0 = *barrier_value(c, blocks, res.x, tau);
            double step = 1.0;
            bool moved = false;
            bool measurable = false;
            while (step >= 1e-14) {
                const Vector cand = res.x + step * d;
                const auto phi = barrier_value(c, blocks, cand, tau);
                if (phi && *phi <= phi0 + kArmijo * step * g.dot(d)) {
                    // Once the sufficient-decrease margin kArmijo*step*g'd drops
                    // below one ulp of phi0, acceptance no longer implies the
                    // barrier value went down at all.
                    measurable = *phi < phi0;
                    res.x = cand;
                    moved = true;
                    break;
                }
                step *= 0.5;
            }
            ++res.newton_steps;
            if (!moved) {
                if (0.5 * lambda2 <= kNoiseCenterTol) break;  // numerically centered
                throw SolverStalled("barrier line search failed away from the central path");
            }
            if (!measurable) {
                // The objective value is frozen at the rounding noise floor;
                // further iterations would revisit the same bits.
                if (0.5 * lambda2 <= kNoiseCenterTol) break;  // numerically centered
                throw SolverStalled("barrier made no measurable progress away from the central path");
            }
        }
        if (iter == opts.max_newton)
            throw SolverStalled("barrier centering exceeded the Newton iteration cap");
        if (nu / tau <= opts.gap_tol) break;
        tau *= opts.mu;
    }
    if (nu / tau > opts.gap_tol)
        throw SolverStalled("barrier path following exceeded the stage cap");

    res.objective = c.dot(res.x);
    return res;
}

}  // namespace clf::lmi
