#pragma once

#include <string>

#include "clf/cegis.hpp"
#include "clf/certify.hpp"
#include "clf/system.hpp"
#include "clf/verifier.hpp"

namespace clf::io {

/// Parses the JSON problem schema:
///   {n, m, uncertainty: {type: "interval"|"ellipsoid"|"polytope", ...},
///    eps, eta, w_max, n_t, accept_threshold, max_iters, verifier_budget,
///    seed, initial_sample?}
/// Matrices are row-major nested arrays; the ellipsoid center may be given
/// either flat ("c", column-stacked) or as the matrix "A_centroid".
/// Malformed JSON / wrong types -> ParseError; semantic violations ->
/// ConfigError. All defaults are applied.
ProblemSpec parse_problem(const std::string& text);

/// Canonical serialization; parse_problem(serialize_problem(s)) reproduces s
/// (and re-serializes byte-identically).
std::string serialize_problem(const ProblemSpec& spec);

/// {"P": [[...]], "K": [[...]]} with shape checks against (n, m).
Candidate parse_candidate(const std::string& text, Index n, Index m);
std::string serialize_candidate(const Candidate& cand);

/// Full run report. All wall-clock data sits under the single "timings" key
/// so reports from identical (problem, seed) runs are byte-identical after
/// dropping it.
std::string report_to_json(const CegisReport& report);

std::string verifier_to_json(const VerifierResult& vr, double elapsed_s);

std::string certify_to_json(const CertifyOutcome& oc, const std::string& mode, double tol,
                            double elapsed_s);

}  // namespace clf::io
