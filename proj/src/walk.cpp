#include "microshell/walk.hpp"

#include <algorithm>
#include <cmath>

#include "microshell/batch_means.hpp"
#include "microshell/error.hpp"

namespace microshell {

namespace {

void require_walkable(const EnergyShell& shell)
{
    if (shell.size() < 3)
        throw Error(ErrorKind::InvalidInput, "walk needs at least 3 levels");
    if (shell.degenerate())
        throw Error(ErrorKind::DegenerateShell, "degenerate shell: nowhere to walk");
}

}  // namespace

void WalkConfig::validate() const
{
    if (steps < 1) throw Error(ErrorKind::Config, "walk: steps must be >= 1");
    if (!(step_scale > 0.0) || !std::isfinite(step_scale))
        throw Error(ErrorKind::Config, "walk: step_scale must be positive");
    if (record_every < 1) throw Error(ErrorKind::Config, "walk: record_every must be >= 1");
    if (steps < record_every)
        throw Error(ErrorKind::Config, "walk: steps must cover at least one recorded point");
}

ShellWalker::ShellWalker(const EnergyShell& shell, MeasureSpec measure, double step_scale,
                         const OccupationVector& start)
    : shell_(shell),
      measure_(measure),
      step_scale_(step_scale),
      chart_(free_chart(shell))
{
    require_walkable(shell_);
    if (start.size() != shell_.size())
        throw Error(ErrorKind::LengthMismatch, "walker start has the wrong length");
    const std::size_t d = shell_.free_dimension();
    free_.assign(start.values().begin(), start.values().begin() + static_cast<std::ptrdiff_t>(d));
    proposal_.resize(d);
}

bool ShellWalker::step(Rng& rng)
{
    for (std::size_t i = 0; i < free_.size(); ++i)
        proposal_[i] = free_[i] + step_scale_ * (2.0 * uniform01(rng) - 1.0);

    last_feasible_ = std::all_of(proposal_.begin(), proposal_.end(), [](double x) { return x >= 0.0; });
    if (last_feasible_) {
        const auto [lower, upper] = chart_.dependent(proposal_);
        last_feasible_ = lower >= 0.0 && upper >= 0.0;
    }
    if (!last_feasible_) return false;

    if (measure_.kind == MeasureKind::AmplitudeCoordinate) {
        double log_ratio = 0.0;
        for (std::size_t i = 0; i < free_.size(); ++i) {
            if (!(proposal_[i] > 0.0)) return false;
            log_ratio += 0.5 * (std::log(free_[i]) - std::log(proposal_[i]));
        }
        if (log_ratio < 0.0 && std::log(uniform01(rng)) >= log_ratio) return false;
    }
    free_.swap(proposal_);
    return true;
}

OccupationVector ShellWalker::state() const
{
    return occupation_from_free(shell_, free_);
}

StepResult walk_step(const EnergyShell& shell, const OccupationVector& current,
                     MeasureSpec measure, const WalkConfig& config, Rng& rng)
{
    if (!(config.step_scale > 0.0))
        throw Error(ErrorKind::Config, "walk: step_scale must be positive");
    require_walkable(shell);
    if (!is_member(shell, current, kEnergyTolerance))
        throw Error(ErrorKind::InvalidInput, "walk_step: current state is not on the shell");

    ShellWalker walker(shell, measure, config.step_scale, current);
    StepResult result;
    result.accepted = walker.step(rng);
    result.state = result.accepted ? walker.state() : current;
    return result;
}

TrajectoryStats time_average(const EnergyShell& shell, MeasureSpec measure,
                             const WalkConfig& config, const TrajectoryObserver& observer)
{
    config.validate();
    require_walkable(shell);

    ShellWalker walker(shell, measure, config.step_scale, vertex_centroid(shell));
    Rng rng(config.seed);
    for (std::uint64_t i = 0; i < config.burn_in; ++i) walker.step(rng);

    const std::uint64_t recorded = config.steps / config.record_every;
    BatchMeans stats(shell.size(), recorded);
    std::uint64_t accepted = 0;
    for (std::uint64_t s = 1; s <= config.steps; ++s) {
        if (walker.step(rng)) ++accepted;
        if (s % config.record_every == 0) {
            const OccupationVector p = walker.state();
            stats.add(p.values());
            if (observer) observer(s, p);
        }
    }

    TrajectoryStats out;
    out.time_mean = OccupationVector(stats.mean());
    out.std_error = stats.std_error();
    out.acceptance_ratio = static_cast<double>(accepted) / static_cast<double>(config.steps);
    out.recorded_points = stats.count();
    return out;
}

ErgodicityReport ergodicity_check(const EnergyShell& shell, MeasureSpec measure,
                                  const WalkConfig& walk, const SamplerConfig& sampler,
                                  const TrajectoryObserver& observer)
{
    require_walkable(shell);
    ErgodicityReport r;
    r.time = time_average(shell, measure, walk, observer);
    r.ensemble = ensemble_mean(shell, measure, sampler);
    r.discrepancy = compare(r.time.time_mean.values(), r.ensemble.mean.values());

    r.pass = true;
    r.combined_std_error.resize(shell.size());
    for (std::size_t k = 0; k < shell.size(); ++k) {
        const double a = r.time.std_error[k];
        const double b = r.ensemble.std_error[k];
        r.combined_std_error[k] = std::sqrt(a * a + b * b);
        const double diff = std::abs(r.time.time_mean[k] - r.ensemble.mean[k]);
        r.max_abs_diff = std::max(r.max_abs_diff, diff);
        if (!(diff < 3.0 * r.combined_std_error[k])) r.pass = false;
    }
    return r;
}

}  // namespace microshell
