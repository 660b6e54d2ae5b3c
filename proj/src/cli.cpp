#include "clf/cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "clf/cegis.hpp"
#include "clf/certify.hpp"
#include "clf/errors.hpp"
#include "clf/problem_io.hpp"

namespace clf::cli {
namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void emit(const std::string& json, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << json << "\n";
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw ConfigError("cannot write file: " + out_path);
    out << json << "\n";
}

int exit_code(CegisStatus status) {
    switch (status) {
        case CegisStatus::Certified: return 0;
        case CegisStatus::Infeasible: return 1;
        default: return 2;
    }
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int run_main(int argc, const char* const* argv) {
    CLI::App app{"Quadratic Lyapunov function and feedback-gain synthesis for "
                 "uncertain discrete-time linear systems"};
    app.require_subcommand(1);

    std::string problem_path, out_path, candidate_path;
    std::optional<std::uint64_t> seed_override;
    std::optional<int> max_iters_override;
    std::uint64_t samples = 0;
    double tol = 1e-7;

    CLI::App* synth = app.add_subcommand("synth", "Run the full synthesis loop");
    synth->add_option("problem", problem_path, "Problem JSON file")->required();
    synth->add_option("--out", out_path, "Write the report here instead of stdout");
    synth->add_option("--seed", seed_override, "Override the problem's seed");
    synth->add_option("--max-iters", max_iters_override, "Override the iteration cap");

    CLI::App* verify_cmd = app.add_subcommand("verify", "One verifier pass on a given candidate");
    verify_cmd->add_option("problem", problem_path, "Problem JSON file")->required();
    verify_cmd->add_option("--candidate", candidate_path, "Candidate JSON file (P, K)")->required();
    verify_cmd->add_option("--out", out_path, "Write the result here instead of stdout");
    verify_cmd->add_option("--seed", seed_override, "Override the problem's seed");

    CLI::App* certify_cmd =
        app.add_subcommand("certify", "A-posteriori certification of a given candidate");
    certify_cmd->add_option("problem", problem_path, "Problem JSON file")->required();
    certify_cmd->add_option("--candidate", candidate_path, "Candidate JSON file (P, K)")->required();
    certify_cmd->add_option("--samples", samples,
                            "Use Monte-Carlo with this many samples (default: vertex sweep for "
                            "interval/polytope sets, 100000 samples for ellipsoids)");
    certify_cmd->add_option("--tol", tol, "Pass tolerance on the worst value (default 1e-7)");
    certify_cmd->add_option("--seed", seed_override, "Override the problem's seed");
    certify_cmd->add_option("--out", out_path, "Write the result here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 3;  // --help exits cleanly
    }

    try {
        ProblemSpec spec = io::parse_problem(read_file(problem_path));
        if (seed_override) spec.seed = *seed_override;
        if (max_iters_override) spec.max_iters = *max_iters_override;
        validate(spec);

        if (synth->parsed()) {
            const CegisReport report = run(spec);
            emit(io::report_to_json(report), out_path);
            return exit_code(report.status);
        }

        const Candidate cand = io::parse_candidate(read_file(candidate_path), spec.n, spec.m);

        if (verify_cmd->parsed()) {
            const auto t0 = std::chrono::steady_clock::now();
            std::mt19937_64 rng(spec.seed);
            const VerifierResult vr = verify(cand, spec, rng);
            emit(io::verifier_to_json(vr, seconds_since(t0)), out_path);
            return vr.certified ? 0 : 1;
        }

        // certify
        const bool sampled = samples > 0 || std::holds_alternative<EllipsoidA>(spec.omega);
        const std::uint64_t n_samples = samples > 0 ? samples : 100000;
        const auto t0 = std::chrono::steady_clock::now();
        const CertifyOutcome oc =
            sampled ? certify_sampled(cand, spec.omega, n_samples, spec.seed, tol)
                    : certify_vertices(cand, spec.omega, tol);
        emit(io::certify_to_json(oc, sampled ? "sampled" : "vertices", tol, seconds_since(t0)),
             out_path);
        return oc.pass ? 0 : 1;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const SolverStalled& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace clf::cli
