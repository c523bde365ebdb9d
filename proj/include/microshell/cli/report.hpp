#ifndef MICROSHELL_CLI_REPORT_HPP
#define MICROSHELL_CLI_REPORT_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "microshell/canonical.hpp"
#include "microshell/cli/config.hpp"
#include "microshell/discrepancy.hpp"
#include "microshell/ensemble.hpp"
#include "microshell/walk.hpp"

namespace microshell::cli {

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr int kSignificantDigits = 10;

/// Shortest locale-independent text for x at 10 significant digits.
std::string format_number(double x);
/// x rounded to 10 significant digits (so that format_number is lossless).
double quantize(double x);
std::vector<double> quantize(std::span<const double> xs);

struct MicroBlock {
    std::vector<double> mean;
    std::vector<double> std_error;
    std::uint64_t samples_used = 0;
    std::string measure;
    bool exact = false;

    bool operator==(const MicroBlock&) const = default;
};

struct FitBlock {
    double beta = 0.0;
    double log_partition = 0.0;
    std::vector<double> probabilities;
    double residual = 0.0;
    bool negative_beta = false;

    bool operator==(const FitBlock&) const = default;
};

struct DiscrepancyBlock {
    std::vector<double> abs_diff;
    std::vector<double> rel_diff;
    double max_rel_diff = 0.0;
    double total_variation = 0.0;
    double kl_divergence = 0.0;

    bool operator==(const DiscrepancyBlock&) const = default;
};

struct WalkBlock {
    std::vector<double> time_mean;
    std::vector<double> std_error;
    double acceptance_ratio = 0.0;
    std::uint64_t recorded_points = 0;
    std::vector<double> combined_std_error;
    double max_abs_diff = 0.0;
    /// Time mean against the ensemble mean.
    DiscrepancyBlock comparison;
    bool pass = false;

    bool operator==(const WalkBlock&) const = default;
};

struct Provenance {
    std::uint64_t seed = 0;
    std::string measure;
    std::uint64_t samples = 0;
    std::optional<std::uint64_t> walk_seed;
    std::optional<std::uint64_t> walk_steps;

    bool operator==(const Provenance&) const = default;
};

struct ReportDocument {
    std::string tool_version = kToolVersion;
    std::string command;
    RunConfig input;
    std::optional<MicroBlock> micro;
    std::optional<FitBlock> fit;
    std::optional<DiscrepancyBlock> discrepancy;
    std::optional<WalkBlock> walk;
    Provenance provenance;

    bool operator==(const ReportDocument&) const = default;
};

MicroBlock make_micro_block(const EnsembleMean& mean);
FitBlock make_fit_block(const CanonicalFit& fit);
DiscrepancyBlock make_discrepancy_block(const DiscrepancyReport& report);
WalkBlock make_walk_block(const ErgodicityReport& report);

nlohmann::json to_json(const ReportDocument& doc);
ReportDocument report_from_json(const nlohmann::json& doc);

/// Human-readable rendering.
std::string render_table(const ReportDocument& doc);

/// CSV header for analyze/sweep rows over n levels.
std::string sweep_csv_header(std::size_t n);
std::string sweep_csv_row(const SweepRow& row, std::size_t n);

}  // namespace microshell::cli

#endif
