#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "clf/learner.hpp"
#include "clf/system.hpp"
#include "clf/verifier.hpp"

namespace clf {

enum class CegisStatus { Certified, Infeasible, BudgetExhausted, Stalled };

struct IterationRecord {
    int iteration = 0;          // 1-based
    std::size_t hull_size = 0;  // sample-hull vertices handed to the learner
    double margin = 0.0;        // learner margin t*
    LearnerStatus learner_status = LearnerStatus::Infeasible;
    std::optional<Candidate> candidate;
    std::optional<VerifierResult> verifier;  // absent when the learner failed
};

struct CegisTimings {
    double learner_s = 0.0;
    double verifier_s = 0.0;
    double total_s = 0.0;
};

struct CegisReport {
    CegisStatus status = CegisStatus::BudgetExhausted;
    int iterations = 0;
    std::optional<Candidate> candidate;               // present iff Certified
    std::vector<std::pair<Matrix, Matrix>> samples;   // initial point + counter-examples, in order
    std::vector<IterationRecord> trace;
    double margin_deficit = 0.0;  // eps - t* on Infeasible: how far feasibility was missed
    std::string stall_reason;     // populated on Stalled
    ProblemSpec config;           // echo of the resolved configuration
    CegisTimings timings;
};

/// The full learner/verifier loop: starts from the problem's initial sample
/// (or the set's representative), alternates LMI synthesis over the sample
/// hull with global falsification, and stops on certification, learner
/// infeasibility, the iteration cap, or a stall (duplicate counter-example /
/// solver breakdown).
CegisReport run(const ProblemSpec& spec);

struct TraceEntry {
    double margin;
    double lambda_hat;
    std::string method;  // "global" or "sensitivity"
};

/// Chronological (margin, verifier estimate, method) triples for the
/// iterations that reached the verifier.
std::vector<TraceEntry> iteration_trace(const CegisReport& report);

}  // namespace clf
