#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <initializer_list>
#include <string>
#include <vector>

#include "json.hpp"

#include "clf/cegis.hpp"
#include "clf/cli.hpp"
#include "clf/errors.hpp"
#include "clf/problem_io.hpp"
#include "clf/uncertainty.hpp"
#include "test_helpers.hpp"

using namespace clf;

namespace {

int run_cli(std::initializer_list<std::string> args) {
    std::vector<std::string> owned{"clf-synth"};
    owned.insert(owned.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& s : owned) argv.push_back(s.c_str());
    return cli::run_main(static_cast<int>(argv.size()), argv.data());
}

Matrix scalar(double v) {
    Matrix m(1, 1);
    m << v;
    return m;
}

/// A problem whose first iteration is doomed by a corner-pinned initial
/// sample but which certifies after a counter-example or two.
const char* kClimbingProblem = R"({
  "n": 1, "m": 1,
  "uncertainty": {"type": "interval",
                  "A_lo": [[1.0]], "A_hi": [[2.0]],
                  "B_lo": [[0.9]], "B_hi": [[1.1]]},
  "eps": 0.001, "eta": 1.0,
  "initial_sample": {"A": [[1.0]], "B": [[1.1]]}
})";

const char* kInfeasibleProblem = R"({
  "n": 2, "m": 1,
  "uncertainty": {"type": "interval",
                  "A_lo": [[2.0, 0.0], [0.0, 0.5]],
                  "A_hi": [[2.0, 0.0], [0.0, 0.5]],
                  "B": [[0.0], [1.0]]},
  "eps": 0.001, "eta": 1.0
})";

}  // namespace

TEST_CASE("the minimal bundled problem exposes every default") {
    const ProblemSpec spec =
        io::parse_problem(testutil::read_file(testutil::problems_path("scalar_minimal.json")));
    CHECK(spec.n == 1);
    CHECK(spec.m == 1);
    const auto& s = std::get<IntervalAB>(spec.omega);
    CHECK(s.A_lo(0, 0) == 0.3);
    CHECK(s.A_hi(0, 0) == 0.7);
    CHECK(s.B_lo(0, 0) == 1.0);
    CHECK(s.B_hi(0, 0) == 1.0);
    CHECK(spec.eps == 1e-3);
    CHECK(spec.eta == 1e3);
    CHECK(spec.w_max == 1e3);
    CHECK(spec.n_t == 3);
    CHECK(spec.accept_threshold == 0.5e-3);
    CHECK(spec.max_iters == 100);
    CHECK(spec.verifier_budget == 0);
    CHECK(spec.resolved_budget(1) == 2000);
    CHECK(spec.seed == 0);
    CHECK_FALSE(spec.initial_sample.has_value());
}

TEST_CASE("the 4-state interval problem parses to the expected bounds") {
    const ProblemSpec spec =
        io::parse_problem(testutil::read_file(testutil::problems_path("polytopic_4x4.json")));
    CHECK(spec.n == 4);
    CHECK(spec.m == 1);
    const auto& s = std::get<IntervalAB>(spec.omega);
    CHECK(s.A_lo(0, 0) == -0.6685);
    CHECK(s.A_hi(0, 0) == -0.6295);
    CHECK(s.A_lo(3, 3) == 0.1618);
    CHECK(s.A_hi(3, 3) == 0.1718);
    CHECK(s.B_lo == s.B_hi);  // fixed input matrix
    CHECK(s.B_lo(3, 0) == 1.0);
    CHECK(s.B_lo(0, 0) == 0.0);
    CHECK(box_param(spec.omega).dim() == 16);  // every A entry uncertain, B fixed
}

TEST_CASE("the 2-state ellipsoid problem stacks its center column-major") {
    const ProblemSpec spec =
        io::parse_problem(testutil::read_file(testutil::problems_path("spherical_2x2.json")));
    CHECK(spec.n == 2);
    CHECK(spec.m == 1);
    const auto& e = std::get<EllipsoidA>(spec.omega);
    REQUIRE(e.c.size() == 4);
    CHECK(e.c(0) == 0.6458);
    CHECK(e.c(1) == -1.4651);  // (2,1) entry: columns stack first
    CHECK(e.c(2) == 0.3852);
    CHECK(e.c(3) == 1.1183);
    CHECK(e.Q.mat() == (5.0 * Matrix::Identity(4, 4)));
    CHECK(e.B_fixed(0, 0) == 0.0);
    CHECK(e.B_fixed(1, 0) == 1.0);
}

TEST_CASE("serialization is a fixed point of parse-then-serialize") {
    for (const char* name : {"scalar_minimal.json", "polytopic_4x4.json", "spherical_2x2.json"}) {
        const std::string text = testutil::read_file(testutil::problems_path(name));
        const std::string once = io::serialize_problem(io::parse_problem(text));
        const std::string twice = io::serialize_problem(io::parse_problem(once));
        CHECK(once == twice);
    }

    // Same for an in-code spec exercising the polytope and initial-sample paths.
    ProblemSpec spec;
    spec.n = 1;
    spec.m = 1;
    PolytopeVerts poly;
    poly.vertices = {{scalar(0.25), scalar(1.0)}, {scalar(0.75), scalar(1.0)}};
    spec.omega = poly;
    spec.eta = 2.0;
    spec.initial_sample = std::make_pair(scalar(0.5), scalar(1.0));
    const std::string once = io::serialize_problem(spec);
    const ProblemSpec back = io::parse_problem(once);
    CHECK(io::serialize_problem(back) == once);
    REQUIRE(back.initial_sample.has_value());
    CHECK(back.initial_sample->first(0, 0) == 0.5);
    CHECK(std::get<PolytopeVerts>(back.omega).vertices.size() == 2);
}

TEST_CASE("candidates survive a round trip with exact doubles") {
    std::mt19937_64 rng(17);
    Candidate cand;
    cand.P = testutil::random_spd(rng, 3, 0.1, 7.0);
    cand.K = testutil::random_matrix(rng, 2, 3, 1.7);
    const Candidate back = io::parse_candidate(io::serialize_candidate(cand), 3, 2);
    CHECK(back.P == cand.P);
    CHECK(back.K == cand.K);

    CHECK_THROWS_AS(io::parse_candidate(io::serialize_candidate(cand), 3, 1), ParseError);
    CHECK_THROWS_AS(io::parse_candidate("{\"P\": [[1]]}", 1, 1), ParseError);
    CHECK_THROWS_AS(io::parse_candidate("{\"P\": [[1]], \"K\": [[0]], \"X\": 1}", 1, 1),
                    ParseError);
}

TEST_CASE("malformed problems raise ParseError with the offending field") {
    auto parse = [](const std::string& text) { return io::parse_problem(text); };
    CHECK_THROWS_AS(parse("not json at all"), ParseError);
    CHECK_THROWS_AS(parse("[1, 2, 3]"), ParseError);
    CHECK_THROWS_AS(parse(R"({"m": 1, "uncertainty": {}})"), ParseError);          // n missing
    CHECK_THROWS_AS(parse(R"({"n": 0, "m": 1, "uncertainty": {}})"), ParseError);  // n <= 0
    CHECK_THROWS_AS(parse(R"({"n": 1.5, "m": 1, "uncertainty": {}})"), ParseError);

    const std::string ok_unc = R"("uncertainty": {"type": "interval",
        "A_lo": [[0.0]], "A_hi": [[0.5]], "B": [[1.0]]})";
    CHECK_THROWS_AS(parse(R"({"n": 1, "m": 1, "surprise": 1, )" + ok_unc + "}"), ParseError);
    CHECK_THROWS_AS(parse(R"({"n": 1, "m": 1, "eps": "small", )" + ok_unc + "}"), ParseError);
    CHECK_THROWS_AS(parse(R"({"n": 1, "m": 1, "seed": -4, )" + ok_unc + "}"), ParseError);

    auto with_unc = [](const std::string& unc) {
        return R"({"n": 1, "m": 1, "uncertainty": )" + unc + "}";
    };
    CHECK_THROWS_AS(parse(with_unc(R"({"type": "wedge"})")), ParseError);
    CHECK_THROWS_AS(parse(with_unc(R"({"type": "interval", "A_lo": [[0]]})")), ParseError);
    CHECK_THROWS_AS(parse(with_unc(R"({"type": "interval", "A_lo": [[0]], "A_hi": [[1]],
        "B": [[1]], "B_lo": [[1]], "B_hi": [[1]]})")), ParseError);
    CHECK_THROWS_AS(parse(with_unc(R"({"type": "interval", "A_lo": [[0, 1], [2]],
        "A_hi": [[1]], "B": [[1]]})")), ParseError);
    CHECK_THROWS_AS(parse(with_unc(R"({"type": "interval", "A_lo": [["x"]],
        "A_hi": [[1]], "B": [[1]]})")), ParseError);
    CHECK_THROWS_AS(parse(with_unc(R"({"type": "interval", "A_lo": [[0, 0]],
        "A_hi": [[1, 1]], "B": [[1]]})")), ParseError);  // shape vs n
    CHECK_THROWS_AS(parse(with_unc(R"({"type": "ellipsoid", "c": [0.0],
        "A_centroid": [[0.0]], "Q": [[1.0]], "B": [[1.0]]})")), ParseError);
    CHECK_THROWS_AS(parse(with_unc(R"({"type": "ellipsoid", "c": [0.0, 0.0],
        "Q": [[1.0]], "B": [[1.0]]})")), ParseError);  // c length != n*n
    CHECK_THROWS_AS(parse(with_unc(R"({"type": "polytope", "vertices": []})")), ParseError);
    CHECK_THROWS_AS(parse(with_unc(R"({"type": "polytope",
        "vertices": [{"A": [[0.5]], "B": [[1.0]], "label": "v0"}]})")), ParseError);
}

TEST_CASE("semantically invalid problems raise ConfigError") {
    auto parse = [](const std::string& text) { return io::parse_problem(text); };
    CHECK_THROWS_AS(parse(R"({"n": 1, "m": 1, "eps": 0.1, "eta": 0.01,
        "uncertainty": {"type": "interval", "A_lo": [[0]], "A_hi": [[1]], "B": [[1]]}})"),
                    ConfigError);
    CHECK_THROWS_AS(parse(R"({"n": 1, "m": 1,
        "uncertainty": {"type": "interval", "A_lo": [[1]], "A_hi": [[0]], "B": [[1]]}})"),
                    ConfigError);  // bounds out of order
    CHECK_THROWS_AS(parse(R"({"n": 1, "m": 1, "accept_threshold": 0.9,
        "uncertainty": {"type": "interval", "A_lo": [[0]], "A_hi": [[1]], "B": [[1]]}})"),
                    ConfigError);  // above eps/2
    CHECK_THROWS_AS(parse(R"({"n": 1, "m": 1,
        "uncertainty": {"type": "interval", "A_lo": [[0]], "A_hi": [[1]], "B": [[1]]},
        "initial_sample": {"A": [[5.0]], "B": [[1.0]]}})"),
                    ConfigError);  // sample outside the set
}

TEST_CASE("run reports carry the expected sections") {
    const ProblemSpec spec =
        io::parse_problem(testutil::read_file(testutil::problems_path("scalar_minimal.json")));
    const CegisReport report = run(spec);
    REQUIRE(report.status == CegisStatus::Certified);
    const auto j = nlohmann::ordered_json::parse(io::report_to_json(report));
    CHECK(j.at("status") == "certified");
    CHECK(j.at("iterations").get<int>() >= 1);
    CHECK(j.at("candidate").is_object());
    CHECK(j.at("trace").is_array());
    CHECK(j.at("counterexamples").is_array());
    CHECK(j.at("config").is_object());
    CHECK(j.at("timings").contains("total_s"));
    // The reported candidate reproduces the in-memory one exactly.
    const Candidate cand = io::parse_candidate(j.at("candidate").dump(), spec.n, spec.m);
    CHECK(cand.P == report.candidate->P);
    CHECK(cand.K == report.candidate->K);
}

TEST_CASE("command line: synth, verify, and certify round trip on disk") {
    const std::string problem = testutil::problems_path("scalar_minimal.json");
    const std::string report_path = "tmp_io_report.json";
    const std::string cand_path = "tmp_io_candidate.json";

    CHECK(run_cli({"synth", problem, "--out", report_path}) == 0);
    const auto report = nlohmann::ordered_json::parse(testutil::read_file(report_path));
    CHECK(report.at("status") == "certified");
    testutil::write_file(cand_path, report.at("candidate").dump(2));

    CHECK(run_cli({"verify", problem, "--candidate", cand_path, "--out", "tmp_io_verify.json"}) == 0);
    const auto vj = nlohmann::ordered_json::parse(testutil::read_file("tmp_io_verify.json"));
    CHECK(vj.at("certified").get<bool>());

    CHECK(run_cli({"certify", problem, "--candidate", cand_path, "--out", "tmp_io_certify.json"}) == 0);
    const auto cj = nlohmann::ordered_json::parse(testutil::read_file("tmp_io_certify.json"));
    CHECK(cj.at("mode") == "vertices");
    CHECK(cj.at("pass").get<bool>());

    CHECK(run_cli({"certify", problem, "--candidate", cand_path, "--samples", "500",
               "--out", "tmp_io_certify_mc.json"}) == 0);
    const auto mc = nlohmann::ordered_json::parse(testutil::read_file("tmp_io_certify_mc.json"));
    CHECK(mc.at("mode") == "sampled");
    CHECK(mc.at("checked").get<int>() == 500);

    // A destabilizing gain fails certification (exit 1).
    testutil::write_file("tmp_io_bad_candidate.json", R"({"P": [[1.0]], "K": [[1.0]]})");
    CHECK(run_cli({"certify", problem, "--candidate", "tmp_io_bad_candidate.json"}) == 1);

    for (const char* f : {"tmp_io_report.json", "tmp_io_candidate.json", "tmp_io_verify.json",
                          "tmp_io_certify.json", "tmp_io_certify_mc.json",
                          "tmp_io_bad_candidate.json"})
        std::remove(f);
}

TEST_CASE("command line: seed override lands in the echoed config") {
    const std::string problem = testutil::problems_path("scalar_minimal.json");
    CHECK(run_cli({"synth", problem, "--seed", "42", "--out", "tmp_io_seeded.json"}) == 0);
    const auto j = nlohmann::ordered_json::parse(testutil::read_file("tmp_io_seeded.json"));
    CHECK(j.at("config").at("seed").get<int>() == 42);
    std::remove("tmp_io_seeded.json");
}

TEST_CASE("command line: infeasible and budget-exhausted exit codes") {
    testutil::write_file("tmp_io_infeasible.json", kInfeasibleProblem);
    CHECK(run_cli({"synth", "tmp_io_infeasible.json"}) == 1);
    std::remove("tmp_io_infeasible.json");

    testutil::write_file("tmp_io_climbing.json", kClimbingProblem);
    CHECK(run_cli({"synth", "tmp_io_climbing.json", "--max-iters", "1"}) == 2);
    std::remove("tmp_io_climbing.json");
}

TEST_CASE("command line: usage and input errors exit 3, help exits 0") {
    CHECK(run_cli({}) == 3);                                   // missing subcommand
    CHECK(run_cli({"synth"}) == 3);                            // missing problem path
    CHECK(run_cli({"synth", "no_such_file.json"}) == 3);       // unreadable file
    CHECK(run_cli({"synth", "x.json", "--frobnicate"}) == 3);  // unknown flag
    CHECK(run_cli({"verify", testutil::problems_path("scalar_minimal.json")}) == 3);  // no candidate

    testutil::write_file("tmp_io_garbage.json", "{ not json");
    CHECK(run_cli({"synth", "tmp_io_garbage.json"}) == 3);
    std::remove("tmp_io_garbage.json");

    CHECK(run_cli({"--help"}) == 0);
    CHECK(run_cli({"synth", "--help"}) == 0);
}
