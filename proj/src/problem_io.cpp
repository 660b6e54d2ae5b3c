#include "clf/problem_io.hpp"

#include <set>
#include <utility>

#include "json.hpp"

#include "clf/errors.hpp"

namespace clf::io {
namespace {

using Json = nlohmann::ordered_json;

Json mat_to_json(const Eigen::Ref<const Matrix>& m) {
    Json rows = Json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix json_to_mat(const Json& j, const std::string& field) {
    if (!j.is_array() || j.empty()) throw ParseError(field + ": expected a nonempty nested array");
    const Index rows = static_cast<Index>(j.size());
    if (!j[0].is_array() || j[0].empty())
        throw ParseError(field + ": expected rows to be nonempty arrays");
    const Index cols = static_cast<Index>(j[0].size());
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        const auto& row = j[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Index>(row.size()) != cols)
            throw ParseError(field + ": ragged rows");
        for (Index k = 0; k < cols; ++k) {
            const auto& cell = row[static_cast<std::size_t>(k)];
            if (!cell.is_number()) throw ParseError(field + ": non-numeric entry");
            m(i, k) = cell.get<double>();
        }
    }
    return m;
}

Matrix json_to_mat_shaped(const Json& j, const std::string& field, Index rows, Index cols) {
    const Matrix m = json_to_mat(j, field);
    if (m.rows() != rows || m.cols() != cols)
        throw ParseError(field + ": expected " + std::to_string(rows) + "x" + std::to_string(cols) +
                         ", got " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    return m;
}

double get_number(const Json& j, const std::string& field) {
    if (!j.is_number()) throw ParseError(field + ": expected a number");
    return j.get<double>();
}

void reject_unknown_keys(const Json& obj, const std::set<std::string>& known,
                         const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (!known.count(key)) throw ParseError(where + ": unknown field '" + key + "'");
    }
}

UncertaintySet parse_uncertainty(const Json& j, Index n, Index m) {
    if (!j.is_object()) throw ParseError("uncertainty: expected an object");
    if (!j.contains("type") || !j["type"].is_string())
        throw ParseError("uncertainty.type: expected a string");
    const std::string type = j["type"].get<std::string>();
    if (type == "interval") {
        reject_unknown_keys(j, {"type", "A_lo", "A_hi", "B_lo", "B_hi", "B"}, "uncertainty");
        if (!j.contains("A_lo") || !j.contains("A_hi"))
            throw ParseError("uncertainty: interval needs A_lo and A_hi");
        IntervalAB s;
        s.A_lo = json_to_mat_shaped(j["A_lo"], "uncertainty.A_lo", n, n);
        s.A_hi = json_to_mat_shaped(j["A_hi"], "uncertainty.A_hi", n, n);
        if (j.contains("B")) {
            if (j.contains("B_lo") || j.contains("B_hi"))
                throw ParseError("uncertainty: give either B or B_lo/B_hi, not both");
            s.B_lo = s.B_hi = json_to_mat_shaped(j["B"], "uncertainty.B", n, m);
        } else {
            if (!j.contains("B_lo") || !j.contains("B_hi"))
                throw ParseError("uncertainty: interval needs B_lo/B_hi (or fixed B)");
            s.B_lo = json_to_mat_shaped(j["B_lo"], "uncertainty.B_lo", n, m);
            s.B_hi = json_to_mat_shaped(j["B_hi"], "uncertainty.B_hi", n, m);
        }
        return s;
    }
    if (type == "ellipsoid") {
        reject_unknown_keys(j, {"type", "c", "A_centroid", "Q", "B"}, "uncertainty");
        EllipsoidA s;
        if (j.contains("c")) {
            if (j.contains("A_centroid"))
                throw ParseError("uncertainty: give either c or A_centroid, not both");
            const auto& c = j["c"];
            if (!c.is_array() || static_cast<Index>(c.size()) != n * n)
                throw ParseError("uncertainty.c: expected a flat array of length n*n");
            s.c.resize(n * n);
            for (Index i = 0; i < n * n; ++i) {
                const auto& cell = c[static_cast<std::size_t>(i)];
                if (!cell.is_number()) throw ParseError("uncertainty.c: non-numeric entry");
                s.c(i) = cell.get<double>();
            }
        } else if (j.contains("A_centroid")) {
            const Matrix a0 = json_to_mat_shaped(j["A_centroid"], "uncertainty.A_centroid", n, n);
            s.c = Eigen::Map<const Vector>(a0.data(), a0.size());
        } else {
            throw ParseError("uncertainty: ellipsoid needs c or A_centroid");
        }
        if (!j.contains("Q")) throw ParseError("uncertainty: ellipsoid needs Q");
        s.Q = SymMatrix(json_to_mat_shaped(j["Q"], "uncertainty.Q", n * n, n * n));
        if (!j.contains("B")) throw ParseError("uncertainty: ellipsoid needs B");
        s.B_fixed = json_to_mat_shaped(j["B"], "uncertainty.B", n, m);
        return s;
    }
    if (type == "polytope") {
        reject_unknown_keys(j, {"type", "vertices"}, "uncertainty");
        if (!j.contains("vertices") || !j["vertices"].is_array() || j["vertices"].empty())
            throw ParseError("uncertainty.vertices: expected a nonempty array");
        PolytopeVerts s;
        for (const auto& v : j["vertices"]) {
            if (!v.is_object() || !v.contains("A") || !v.contains("B"))
                throw ParseError("uncertainty.vertices: each entry needs A and B");
            reject_unknown_keys(v, {"A", "B"}, "uncertainty.vertices entry");
            s.vertices.emplace_back(json_to_mat_shaped(v["A"], "vertex A", n, n),
                                    json_to_mat_shaped(v["B"], "vertex B", n, m));
        }
        return s;
    }
    throw ParseError("uncertainty.type: expected interval, ellipsoid, or polytope");
}

Json uncertainty_to_json(const UncertaintySet& omega) {
    Json j;
    if (const auto* s = std::get_if<IntervalAB>(&omega)) {
        j["type"] = "interval";
        j["A_lo"] = mat_to_json(s->A_lo);
        j["A_hi"] = mat_to_json(s->A_hi);
        j["B_lo"] = mat_to_json(s->B_lo);
        j["B_hi"] = mat_to_json(s->B_hi);
    } else if (const auto* e = std::get_if<EllipsoidA>(&omega)) {
        j["type"] = "ellipsoid";
        Json c = Json::array();
        for (Index i = 0; i < e->c.size(); ++i) c.push_back(e->c(i));
        j["c"] = std::move(c);
        j["Q"] = mat_to_json(e->Q.mat());
        j["B"] = mat_to_json(e->B_fixed);
    } else {
        const auto& p = std::get<PolytopeVerts>(omega);
        j["type"] = "polytope";
        Json verts = Json::array();
        for (const auto& [a, b] : p.vertices) {
            Json v;
            v["A"] = mat_to_json(a);
            v["B"] = mat_to_json(b);
            verts.push_back(std::move(v));
        }
        j["vertices"] = std::move(verts);
    }
    return j;
}

Json problem_to_json_obj(const ProblemSpec& spec) {
    Json j;
    j["n"] = spec.n;
    j["m"] = spec.m;
    j["uncertainty"] = uncertainty_to_json(spec.omega);
    j["eps"] = spec.eps;
    j["eta"] = spec.eta;
    j["w_max"] = spec.w_max;
    j["n_t"] = spec.n_t;
    j["accept_threshold"] = spec.accept_threshold;
    j["max_iters"] = spec.max_iters;
    j["verifier_budget"] = spec.verifier_budget;
    j["seed"] = spec.seed;
    if (spec.initial_sample) {
        Json s;
        s["A"] = mat_to_json(spec.initial_sample->first);
        s["B"] = mat_to_json(spec.initial_sample->second);
        j["initial_sample"] = std::move(s);
    }
    return j;
}

Json candidate_to_json_obj(const Candidate& cand) {
    Json j;
    j["P"] = mat_to_json(cand.P.mat());
    j["K"] = mat_to_json(cand.K);
    return j;
}

}  // namespace

ProblemSpec parse_problem(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("problem: expected a JSON object");
    reject_unknown_keys(j,
                        {"n", "m", "uncertainty", "eps", "eta", "w_max", "n_t", "accept_threshold",
                         "max_iters", "verifier_budget", "seed", "initial_sample"},
                        "problem");
    if (!j.contains("n") || !j["n"].is_number_integer() || j["n"].get<long long>() <= 0)
        throw ParseError("n: expected a positive integer");
    if (!j.contains("m") || !j["m"].is_number_integer() || j["m"].get<long long>() <= 0)
        throw ParseError("m: expected a positive integer");

    ProblemSpec spec;
    spec.n = j["n"].get<Index>();
    spec.m = j["m"].get<Index>();
    if (!j.contains("uncertainty")) throw ParseError("uncertainty: missing");
    spec.omega = parse_uncertainty(j["uncertainty"], spec.n, spec.m);

    if (j.contains("eps")) spec.eps = get_number(j["eps"], "eps");
    if (j.contains("eta")) spec.eta = get_number(j["eta"], "eta");
    if (j.contains("w_max")) spec.w_max = get_number(j["w_max"], "w_max");
    if (j.contains("n_t")) {
        if (!j["n_t"].is_number_integer()) throw ParseError("n_t: expected an integer");
        spec.n_t = j["n_t"].get<int>();
    }
    spec.accept_threshold = 0.5 * spec.eps;
    if (j.contains("accept_threshold"))
        spec.accept_threshold = get_number(j["accept_threshold"], "accept_threshold");
    if (j.contains("max_iters")) {
        if (!j["max_iters"].is_number_integer()) throw ParseError("max_iters: expected an integer");
        spec.max_iters = j["max_iters"].get<int>();
    }
    if (j.contains("verifier_budget")) {
        if (!j["verifier_budget"].is_number_integer() || j["verifier_budget"].get<long long>() < 0)
            throw ParseError("verifier_budget: expected a nonnegative integer");
        spec.verifier_budget = j["verifier_budget"].get<std::uint64_t>();
    }
    if (j.contains("seed")) {
        if (!j["seed"].is_number_integer() || j["seed"].get<long long>() < 0)
            throw ParseError("seed: expected a nonnegative integer");
        spec.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("initial_sample")) {
        const auto& s = j["initial_sample"];
        if (!s.is_object() || !s.contains("A") || !s.contains("B"))
            throw ParseError("initial_sample: expected an object with A and B");
        reject_unknown_keys(s, {"A", "B"}, "initial_sample");
        spec.initial_sample = {json_to_mat_shaped(s["A"], "initial_sample.A", spec.n, spec.n),
                               json_to_mat_shaped(s["B"], "initial_sample.B", spec.n, spec.m)};
    }
    validate(spec);
    return spec;
}

std::string serialize_problem(const ProblemSpec& spec) { return problem_to_json_obj(spec).dump(2); }

Candidate parse_candidate(const std::string& text, Index n, Index m) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("P") || !j.contains("K"))
        throw ParseError("candidate: expected an object with P and K");
    reject_unknown_keys(j, {"P", "K"}, "candidate");
    Candidate cand;
    cand.P = SymMatrix(json_to_mat_shaped(j["P"], "candidate.P", n, n));
    cand.K = json_to_mat_shaped(j["K"], "candidate.K", m, n);
    return cand;
}

std::string serialize_candidate(const Candidate& cand) {
    return candidate_to_json_obj(cand).dump(2);
}

std::string report_to_json(const CegisReport& report) {
    Json j;
    switch (report.status) {
        case CegisStatus::Certified: j["status"] = "certified"; break;
        case CegisStatus::Infeasible: j["status"] = "infeasible"; break;
        case CegisStatus::BudgetExhausted: j["status"] = "budget_exhausted"; break;
        case CegisStatus::Stalled: j["status"] = "stalled"; break;
    }
    j["iterations"] = report.iterations;
    j["candidate"] = report.candidate ? candidate_to_json_obj(*report.candidate) : Json(nullptr);
    Json trace = Json::array();
    for (const auto& rec : report.trace) {
        Json t;
        t["iteration"] = rec.iteration;
        t["hull_size"] = rec.hull_size;
        t["margin"] = rec.margin;
        t["learner_status"] =
            rec.learner_status == LearnerStatus::Feasible ? "feasible" : "infeasible";
        if (rec.verifier) {
            t["lambda_hat"] = rec.verifier->lambda_hat;
            t["method"] = rec.verifier->method == VerifyMethod::Global ? "global" : "sensitivity";
            t["evaluations"] = rec.verifier->evaluations;
            t["certified"] = rec.verifier->certified;
            t["lipschitz_gap"] = rec.verifier->lipschitz_gap;
        }
        trace.push_back(std::move(t));
    }
    j["trace"] = std::move(trace);
    Json cxs = Json::array();
    for (const auto& [a, b] : report.samples) {
        Json c;
        c["A"] = mat_to_json(a);
        c["B"] = mat_to_json(b);
        cxs.push_back(std::move(c));
    }
    j["counterexamples"] = std::move(cxs);
    if (report.status == CegisStatus::Infeasible) {
        Json hint;
        hint["margin_deficit"] = report.margin_deficit;
        hint["suggestion"] =
            "relax the problem: decrease eps, increase eta, or widen the gain box w_max";
        j["restart_hint"] = std::move(hint);
    }
    if (report.status == CegisStatus::Stalled) j["stall_reason"] = report.stall_reason;
    j["config"] = problem_to_json_obj(report.config);
    Json tm;
    tm["learner_s"] = report.timings.learner_s;
    tm["verifier_s"] = report.timings.verifier_s;
    tm["total_s"] = report.timings.total_s;
    j["timings"] = std::move(tm);
    return j.dump(2);
}

std::string verifier_to_json(const VerifierResult& vr, double elapsed_s) {
    Json j;
    j["lambda_hat"] = vr.lambda_hat;
    Json mn;
    mn["A"] = mat_to_json(vr.a_star);
    mn["B"] = mat_to_json(vr.b_star);
    j["minimizer"] = std::move(mn);
    j["method"] = vr.method == VerifyMethod::Global ? "global" : "sensitivity";
    j["evaluations"] = vr.evaluations;
    j["certified"] = vr.certified;
    j["lipschitz_gap"] = vr.lipschitz_gap;
    Json tm;
    tm["total_s"] = elapsed_s;
    j["timings"] = std::move(tm);
    return j.dump(2);
}

std::string certify_to_json(const CertifyOutcome& oc, const std::string& mode, double tol,
                            double elapsed_s) {
    Json j;
    j["mode"] = mode;
    j["pass"] = oc.pass;
    j["worst"] = oc.worst;
    Json arg;
    arg["A"] = mat_to_json(oc.a_star);
    arg["B"] = mat_to_json(oc.b_star);
    j["argmin"] = std::move(arg);
    j["checked"] = oc.checked;
    j["tol"] = tol;
    Json tm;
    tm["total_s"] = elapsed_s;
    j["timings"] = std::move(tm);
    return j.dump(2);
}

}  // namespace clf::io
