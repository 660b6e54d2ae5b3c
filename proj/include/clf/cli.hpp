#pragma once

namespace clf::cli {

/// Entry point behind the executable. Subcommands: synth, verify, certify.
/// Exit codes: 0 certified/pass, 1 infeasible/fail, 2 budget exhausted or
/// stalled, 3 usage/configuration error.
int run_main(int argc, const char* const* argv);

}  // namespace clf::cli
