#ifndef MICROSHELL_DISCREPANCY_HPP
#define MICROSHELL_DISCREPANCY_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "microshell/canonical.hpp"
#include "microshell/ensemble.hpp"
#include "microshell/spectrum.hpp"

namespace microshell {

/// Distances of a microcanonical mean from canonical probabilities. The
/// relative and KL terms are directional: micro measured against canon.
struct DiscrepancyReport {
    std::vector<double> abs_diff;
    /// |micro - canon| / canon.
    std::vector<double> rel_diff;
    double max_rel_diff = 0.0;
    /// 0.5 * sum abs_diff.
    double total_variation = 0.0;
    /// sum micro ln(micro / canon), nats, with 0 ln 0 = 0.
    double kl_divergence = 0.0;
};

DiscrepancyReport compare(std::span<const double> micro, std::span<const double> canon);
DiscrepancyReport compare(const EnsembleMean& micro, const CanonicalFit& fit);

struct SweepOutcome {
    EnsembleMean micro;
    CanonicalFit fit;
    DiscrepancyReport report;
};

struct SweepRow {
    double energy = 0.0;
    /// Empty when the energy is not strictly inside (E_1, E_N) or the
    /// pipeline failed; `error` then says why.
    std::optional<SweepOutcome> outcome;
    std::string error;

    bool feasible() const noexcept { return outcome.has_value(); }
};

/// Mean, fit and comparison at a single energy.
SweepOutcome analyze_shell(const EnergyShell& shell, MeasureSpec measure,
                           const SamplerConfig& sampler,
                           double fit_tol = kDefaultFitTolerance);

/// One row per energy in input order. Every row uses sampler.seed, so a row
/// matches a standalone analyze_shell() run at that energy.
std::vector<SweepRow> energy_sweep(const EnergySpectrum& spectrum,
                                   std::span<const double> energies, MeasureSpec measure,
                                   const SamplerConfig& sampler,
                                   double fit_tol = kDefaultFitTolerance);

struct ScalingStudyRow {
    std::size_t n_levels = 0;
    std::size_t trial = 0;
    std::uint64_t spectrum_seed = 0;
    double energy_quantile = 0.0;
    double max_rel_diff = 0.0;
    double total_variation = 0.0;

    bool operator==(const ScalingStudyRow&) const = default;
};

struct ScalingStudyConfig {
    std::size_t n_min = 3;
    std::size_t n_max = 8;
    std::size_t trials = 30;
    double energy_quantile = 0.25;
    MeasureSpec measure;
    /// samples/method/thinning apply per row; the seed is derived per row.
    SamplerConfig sampler;
    std::uint64_t seed = 1;
    /// Worker threads; rows are emitted in (n, trial) order regardless.
    std::size_t threads = 1;

    void validate() const;
};

using SpectrumGenerator = std::function<EnergySpectrum(std::size_t n, std::uint64_t seed)>;

/// N independent uniform [0, 1) draws, sorted and rescaled to span [0, 10].
EnergySpectrum random_spectrum(std::size_t n, std::uint64_t seed);

std::uint64_t scaling_spectrum_seed(std::uint64_t study_seed, std::size_t n, std::size_t trial);

std::vector<ScalingStudyRow> level_scaling_study(const ScalingStudyConfig& config,
                                                 const SpectrumGenerator& generator = random_spectrum);

struct ScalingSummary {
    struct Level {
        std::size_t n_levels = 0;
        double median_max_rel_diff = 0.0;
        double median_total_variation = 0.0;
    };
    std::vector<Level> levels;
    /// Median max_rel_diff never increases from one N to the next.
    bool monotone_non_increasing = true;
    /// Median at the largest N is <= median at the smallest N.
    bool last_not_above_first = true;
};

ScalingSummary summarize_scaling(std::span<const ScalingStudyRow> rows);

double median(std::vector<double> values);

}  // namespace microshell

#endif
