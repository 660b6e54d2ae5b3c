#include "clf/cegis.hpp"

#include <algorithm>
#include <chrono>
#include <random>

#include "clf/counterexamples.hpp"
#include "clf/errors.hpp"

namespace clf {
namespace {

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

CegisReport run(const ProblemSpec& spec) {
    validate(spec);
    const auto t_start = std::chrono::steady_clock::now();

    CegisReport report;
    report.config = spec;
    std::mt19937_64 rng(spec.seed);

    const double dedup_tol = 1e-12 * std::max(1.0, magnitude_scale(spec.omega));
    CounterexampleSet samples(spec.n, spec.m);
    {
        const auto [a0, b0] = spec.initial_sample ? *spec.initial_sample : representative(spec.omega);
        samples.add(a0, b0, dedup_tol);
        report.samples.emplace_back(a0, b0);
    }

    for (int iter = 1; iter <= spec.max_iters; ++iter) {
        IterationRecord rec;
        rec.iteration = iter;

        LearnerProblem lp;
        lp.vertices = samples.hull_vertices();
        lp.eps = spec.eps;
        lp.eta = spec.eta;
        lp.w_max = spec.w_max;
        lp.n = spec.n;
        lp.m = spec.m;
        rec.hull_size = lp.vertices.size();

        const auto t_learn = std::chrono::steady_clock::now();
        LearnerSolution sol;
        try {
            sol = solve(lp);
        } catch (const SolverStalled& e) {
            report.timings.learner_s += seconds_since(t_learn);
            report.status = CegisStatus::Stalled;
            report.stall_reason = e.what();
            report.trace.push_back(std::move(rec));
            report.iterations = iter;
            report.timings.total_s = seconds_since(t_start);
            return report;
        }
        report.timings.learner_s += seconds_since(t_learn);
        rec.margin = sol.margin;
        rec.learner_status = sol.status;

        if (sol.status == LearnerStatus::Infeasible) {
            report.status = CegisStatus::Infeasible;
            report.margin_deficit = spec.eps - sol.margin;
            report.trace.push_back(std::move(rec));
            report.iterations = iter;
            report.timings.total_s = seconds_since(t_start);
            return report;
        }

        const Candidate cand = extract_candidate(sol);
        rec.candidate = cand;

        const auto t_verify = std::chrono::steady_clock::now();
        const VerifierResult vr = verify(cand, spec, rng);
        report.timings.verifier_s += seconds_since(t_verify);
        rec.verifier = vr;
        report.trace.push_back(std::move(rec));
        report.iterations = iter;

        if (vr.certified) {
            report.status = CegisStatus::Certified;
            report.candidate = cand;
            report.timings.total_s = seconds_since(t_start);
            return report;
        }

        try {
            samples.add(vr.a_star, vr.b_star, dedup_tol);
            report.samples.emplace_back(vr.a_star, vr.b_star);
        } catch (const DuplicateCounterexample& e) {
            report.status = CegisStatus::Stalled;
            report.stall_reason = e.what();
            report.timings.total_s = seconds_since(t_start);
            return report;
        }
    }

    report.status = CegisStatus::BudgetExhausted;
    report.timings.total_s = seconds_since(t_start);
    return report;
}

std::vector<TraceEntry> iteration_trace(const CegisReport& report) {
    std::vector<TraceEntry> out;
    for (const auto& rec : report.trace) {
        if (!rec.verifier) continue;
        out.push_back({rec.margin, rec.verifier->lambda_hat,
                       rec.verifier->method == VerifyMethod::Global ? "global" : "sensitivity"});
    }
    return out;
}

}  // namespace clf
