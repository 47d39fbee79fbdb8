#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pathwise/report.hpp"

namespace pathwise::cli {

enum class Command {
    kGenerate,
    kPartition,
    kLocaltime,
    kConverge,
    kIdentity,
    kOccupation,
    kIntegrate,
    kAudit,
    kMontecarlo,
};

std::string to_string(Command command);
Command command_from_string(const std::string& name);

/// Everything a subcommand needs. Defaults are the documented CLI defaults.
struct RunConfig {
    Command command = Command::kGenerate;
    std::optional<std::string> path_file;  ///< read the path from CSV instead of generating
    std::string generator = "brownian";    ///< brownian | tent | linear | constant
    std::uint64_t seed = 7;
    int seeds = 1;
    double horizon = 1.0;
    double dt = kDefaultBrownianStep;
    int level_min = 4;
    int level_max = 8;
    std::optional<double> T;  ///< defaults to the path horizon
    std::optional<double> t;  ///< defaults to T
    double u = 0.0;
    double alpha = 0.4;
    std::optional<double> p;
    std::optional<double> q;
    double K = 4.0;
    double tolerance = 1e-6;
    std::string function = "square";  ///< square | cube | sine | abs | positive
    double shift = 0.0;               ///< the a of |x - a| and (x - a)^+
    std::vector<std::pair<double, double>> sets;  ///< occupation set A
    std::optional<std::string> output;
    int jobs = 0;  ///< 0 keeps the OpenMP default
};

Json to_json(const RunConfig& config);
RunConfig config_from_json(const Json& json);

/// Executes one subcommand. Reports go to `config.output` (relative paths are
/// resolved against $PATHWISE_OUT_DIR when set) or to `out`.
/// Exit codes: 0 success or typical; 1 flagged (audit: atypical path,
/// montecarlo: frequency above the bound); 2 vacuous bound; 3 error.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv with one subcommand per study and calls run().
int main(int argc, char** argv);

}  // namespace pathwise::cli
