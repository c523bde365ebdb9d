#ifndef MICROSHELL_CLI_CONFIG_HPP
#define MICROSHELL_CLI_CONFIG_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "microshell/canonical.hpp"
#include "microshell/ensemble.hpp"
#include "microshell/walk.hpp"

namespace microshell::cli {

enum class OutputFormat { Table, Json, Csv };

std::string_view to_string(OutputFormat format);
OutputFormat parse_output_format(std::string_view token);

struct ScalingParams {
    std::size_t n_min = 3;
    std::size_t n_max = 8;
    std::size_t trials = 30;
    double quantile = 0.25;
    std::size_t threads = 1;

    bool operator==(const ScalingParams&) const = default;
};

/// Everything a subcommand needs. Mirrors the JSON config file one-to-one;
/// command-line flags are applied on top of a parsed file.
struct RunConfig {
    std::vector<double> levels;
    std::optional<double> energy;
    /// Energy grid for `sweep`.
    std::vector<double> energies;
    MeasureSpec measure;
    SamplerConfig sampler;
    WalkConfig walk;
    ScalingParams scaling;
    OutputFormat format = OutputFormat::Table;
    double fit_tolerance = kDefaultFitTolerance;

    bool operator==(const RunConfig&) const = default;
};

/// Throws Error(Config) on unknown keys, wrong types or invalid values.
RunConfig parse_run_config(const nlohmann::json& doc);
RunConfig load_run_config(const std::string& path);
nlohmann::json to_json(const RunConfig& config);

/// Comma-separated reals, e.g. "0,5,8".
std::vector<double> parse_real_list(std::string_view text);

}  // namespace microshell::cli

#endif
