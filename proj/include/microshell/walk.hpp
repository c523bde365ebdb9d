#ifndef MICROSHELL_WALK_HPP
#define MICROSHELL_WALK_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "microshell/discrepancy.hpp"
#include "microshell/ensemble.hpp"
#include "microshell/random.hpp"
#include "microshell/spectrum.hpp"

namespace microshell {

/// Stochastic equal-energy transitions modeled as a random-walk Metropolis
/// chain in the free-coordinate chart.
struct WalkConfig {
    std::uint64_t steps = 1'000'000;
    /// Half-width of the uniform proposal cube in free coordinates.
    double step_scale = 0.05;
    std::uint64_t burn_in = 10'000;
    std::uint64_t seed = 20100303;
    std::uint64_t record_every = 10;

    void validate() const;
    bool operator==(const WalkConfig&) const = default;
};

struct TrajectoryStats {
    OccupationVector time_mean;
    std::vector<double> std_error;
    double acceptance_ratio = 0.0;
    std::uint64_t recorded_points = 0;
};

struct StepResult {
    OccupationVector state;
    bool accepted = false;
};

/// Holds the walker state as free coordinates; the dependent pair is
/// re-solved from scratch at every step, so no constraint drift accumulates.
class ShellWalker {
public:
    ShellWalker(const EnergyShell& shell, MeasureSpec measure, double step_scale,
                const OccupationVector& start);

    /// One proposal + accept/reject. Returns whether the move was accepted.
    bool step(Rng& rng);

    OccupationVector state() const;
    std::span<const double> free() const noexcept { return free_; }
    /// Whether the last proposal satisfied the shell constraints.
    bool last_proposal_feasible() const noexcept { return last_feasible_; }

private:
    EnergyShell shell_;
    MeasureSpec measure_;
    double step_scale_;
    FreeChart chart_;
    std::vector<double> free_;
    std::vector<double> proposal_;
    bool last_feasible_ = false;
};

/// Single transition from `current`. Throws InvalidInput unless current is a
/// shell member at 1e-9.
StepResult walk_step(const EnergyShell& shell, const OccupationVector& current,
                     MeasureSpec measure, const WalkConfig& config, Rng& rng);

using TrajectoryObserver = std::function<void(std::uint64_t step, const OccupationVector&)>;

/// Burn-in, then config.steps transitions from the vertex centroid; every
/// record_every-th state enters the time average (and the observer, if any).
TrajectoryStats time_average(const EnergyShell& shell, MeasureSpec measure,
                             const WalkConfig& config,
                             const TrajectoryObserver& observer = {});

struct ErgodicityReport {
    TrajectoryStats time;
    EnsembleMean ensemble;
    /// time mean measured against the ensemble mean.
    DiscrepancyReport discrepancy;
    /// sqrt(se_time^2 + se_ensemble^2) per component.
    std::vector<double> combined_std_error;
    double max_abs_diff = 0.0;
    /// Every |time - ensemble| < 3 * combined_std_error.
    bool pass = false;
};

ErgodicityReport ergodicity_check(const EnergyShell& shell, MeasureSpec measure,
                                  const WalkConfig& walk, const SamplerConfig& sampler,
                                  const TrajectoryObserver& observer = {});

}  // namespace microshell

#endif
