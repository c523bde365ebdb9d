#ifndef MICROSHELL_CLI_COMMANDS_HPP
#define MICROSHELL_CLI_COMMANDS_HPP

#include <ostream>
#include <string>

#include "microshell/cli/config.hpp"
#include "microshell/cli/report.hpp"
#include "microshell/error.hpp"

namespace microshell::cli {

enum ExitCode : int {
    kExitSuccess = 0,
    kExitInternal = 1,
    kExitConfig = 2,
    kExitInfeasibleEnergy = 3,
    kExitSamplerFailure = 4,
    kExitVerificationFailure = 5,
};

ExitCode exit_code_for(ErrorKind kind);

/// ensemble mean -> beta fit -> comparison at config.energy.
ReportDocument run_analyze(const RunConfig& config);

/// Time average plus ergodicity check at config.energy. When `trajectory`
/// is given, every recorded state is written to it as CSV (step,p_1..p_N).
ReportDocument run_walk(const RunConfig& config, std::ostream* trajectory = nullptr);

/// CSV over config.energies; header only for an empty grid.
std::string run_sweep(const RunConfig& config);

/// Scaling-study CSV with a '#'-prefixed summary footer.
std::string run_scaling(const RunConfig& config);

/// Renders analyze/walk documents in the configured format.
std::string render(const ReportDocument& doc, OutputFormat format);

}  // namespace microshell::cli

#endif
