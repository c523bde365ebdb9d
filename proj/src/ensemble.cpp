#include "microshell/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "microshell/batch_means.hpp"
#include "microshell/error.hpp"

namespace microshell {

namespace {

constexpr std::uint64_t kMaxConsecutiveRejections = 10'000'000;
constexpr std::size_t kRejectionMaxLevels = 6;
// Auto mode falls back to hit-and-run when a pilot run of the rejection
// sampler accepts less often than this.
constexpr std::uint64_t kPilotProposals = 4000;
constexpr double kMinPilotAcceptance = 0.02;

void require_samplable(const EnergyShell& shell)
{
    if (shell.size() < 3)
        throw Error(ErrorKind::InvalidInput, "sampling needs at least 3 levels");
    if (shell.degenerate())
        throw Error(ErrorKind::DegenerateShell,
                    "shell energy sits on a spectrum bound; the shell is a single point");
}

}  // namespace

std::string_view to_string(MeasureKind kind)
{
    return kind == MeasureKind::AmplitudeCoordinate ? "amplitude" : "flat";
}

MeasureSpec parse_measure(std::string_view token)
{
    if (token == "amplitude") return {MeasureKind::AmplitudeCoordinate};
    if (token == "flat") return {MeasureKind::FlatOccupation};
    throw Error(ErrorKind::Config, "unknown measure '" + std::string(token) +
                                       "' (expected amplitude or flat)");
}

std::string_view to_string(SamplerMethod method)
{
    switch (method) {
    case SamplerMethod::Auto: return "auto";
    case SamplerMethod::Rejection: return "rejection";
    case SamplerMethod::HitAndRun: return "hit-and-run";
    }
    return "auto";
}

SamplerMethod parse_sampler_method(std::string_view token)
{
    if (token == "auto") return SamplerMethod::Auto;
    if (token == "rejection") return SamplerMethod::Rejection;
    if (token == "hit-and-run") return SamplerMethod::HitAndRun;
    throw Error(ErrorKind::Config, "unknown sampler method '" + std::string(token) + "'");
}

void SamplerConfig::validate() const
{
    if (samples < 1) throw Error(ErrorKind::Config, "sampler: samples must be >= 1");
    if (thinning < 1) throw Error(ErrorKind::Config, "sampler: thinning must be >= 1");
}

OccupationVector exact_mean_3(const EnergyShell& shell)
{
    if (shell.size() != 3)
        throw Error(ErrorKind::InvalidInput, "exact_mean_3 requires exactly 3 levels");
    if (shell.degenerate())
        throw Error(ErrorKind::DegenerateShell,
                    "degenerate shell has no interior; use its single vertex");

    const FeasibleInterval interval = feasible_interval_3(shell);
    const double a = std::sqrt(interval.lo);
    const double b = std::sqrt(interval.hi);
    // (b^3 - a^3) / (3 (b - a)) without the cancellation.
    const double mean_p1 = (a * a + a * b + b * b) / 3.0;
    const double free[] = {mean_p1};
    return occupation_from_free(shell, free);
}

ShellSampler::ShellSampler(const EnergyShell& shell, MeasureSpec measure,
                           const SamplerConfig& config)
    : shell_(shell),
      measure_(measure),
      method_(config.method),
      thinning_(config.thinning),
      rng_(config.seed)
{
    require_samplable(shell_);
    config.validate();
    chart_ = free_chart(shell_);
    const std::size_t d = shell_.free_dimension();

    // The free-block projection of the polytope is bounded by the coordinate
    // extremes over its vertices.
    box_lo_.assign(d, 1.0);
    box_hi_.assign(d, 0.0);
    for (const auto& v : shell_vertices(shell_)) {
        for (std::size_t i = 0; i < d; ++i) {
            box_lo_[i] = std::min(box_lo_[i], v[i]);
            box_hi_[i] = std::max(box_hi_[i], v[i]);
        }
    }
    if (measure_.kind == MeasureKind::AmplitudeCoordinate) {
        for (std::size_t i = 0; i < d; ++i) {
            box_lo_[i] = std::sqrt(box_lo_[i]);
            box_hi_[i] = std::sqrt(box_hi_[i]);
        }
    }

    proposal_.resize(d);
    direction_.resize(d);
    if (method_ == SamplerMethod::Auto) {
        method_ = SamplerMethod::HitAndRun;
        if (shell_.size() <= kRejectionMaxLevels &&
            pilot_acceptance(derive_seed(config.seed, 0x9170)) >= kMinPilotAcceptance)
            method_ = SamplerMethod::Rejection;
    }
    if (method_ == SamplerMethod::HitAndRun) {
        const OccupationVector start = vertex_centroid(shell_);
        state_.assign(start.values().begin(), start.values().begin() + static_cast<std::ptrdiff_t>(d));
        const auto [lower, upper] = chart_.dependent(state_);
        const double slack = std::min({lower, upper, *std::min_element(state_.begin(), state_.end())});
        if (!(slack > 0.0))
            throw Error(ErrorKind::SamplerFailure,
                        "no interior starting point; the shell is (nearly) degenerate");
        const std::uint64_t burn_in =
            config.burn_in.value_or(10 * shell_.size() * thinning_);
        for (std::uint64_t i = 0; i < burn_in; ++i) hit_and_run_move();
    }
}

double ShellSampler::pilot_acceptance(std::uint64_t seed)
{
    Rng pilot(seed);
    const bool amplitude = measure_.kind == MeasureKind::AmplitudeCoordinate;
    std::uint64_t hits = 0;
    for (std::uint64_t k = 0; k < kPilotProposals; ++k) {
        for (std::size_t i = 0; i < proposal_.size(); ++i) {
            const double x = uniform(pilot, box_lo_[i], box_hi_[i]);
            proposal_[i] = amplitude ? x * x : x;
        }
        if (feasible(proposal_)) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(kPilotProposals);
}

bool ShellSampler::feasible(std::span<const double> free) const
{
    for (double x : free)
        if (!(x >= 0.0)) return false;
    const auto [lower, upper] = chart_.dependent(free);
    return lower >= 0.0 && upper >= 0.0;
}

OccupationVector ShellSampler::next()
{
    return method_ == SamplerMethod::Rejection ? next_rejection() : next_hit_and_run();
}

double ShellSampler::acceptance_ratio() const noexcept
{
    return proposed_ == 0 ? 0.0 : static_cast<double>(accepted_) / static_cast<double>(proposed_);
}

OccupationVector ShellSampler::next_rejection()
{
    const bool amplitude = measure_.kind == MeasureKind::AmplitudeCoordinate;
    for (std::uint64_t attempt = 0; attempt < kMaxConsecutiveRejections; ++attempt) {
        for (std::size_t i = 0; i < proposal_.size(); ++i) {
            const double x = uniform(rng_, box_lo_[i], box_hi_[i]);
            proposal_[i] = amplitude ? x * x : x;
        }
        ++proposed_;
        if (feasible(proposal_)) {
            ++accepted_;
            return occupation_from_free(shell_, proposal_);
        }
    }
    throw Error(ErrorKind::SamplerFailure,
                "rejection sampler found no feasible point; shell is too thin for its bounding box");
}

void ShellSampler::hit_and_run_move()
{
    const std::size_t d = state_.size();
    double norm = 0.0;
    for (double& u : direction_) {
        u = standard_normal(rng_);
        norm += u * u;
    }
    norm = std::sqrt(norm);
    for (double& u : direction_) u /= norm;

    // Chord of the polytope through state_ along direction_: every constraint
    // value + t * rate >= 0.
    double t_min = -std::numeric_limits<double>::infinity();
    double t_max = std::numeric_limits<double>::infinity();
    auto clip = [&](double value, double rate) {
        if (rate > 0.0)
            t_min = std::max(t_min, -value / rate);
        else if (rate < 0.0)
            t_max = std::min(t_max, -value / rate);
    };
    for (std::size_t i = 0; i < d; ++i) clip(state_[i], direction_[i]);
    const auto [lower, upper] = chart_.dependent(state_);
    double lower_rate = 0.0;
    double upper_rate = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        lower_rate += chart_.lower_slope[i] * direction_[i];
        upper_rate += chart_.upper_slope[i] * direction_[i];
    }
    clip(lower, lower_rate);
    clip(upper, upper_rate);

    const double t = uniform(rng_, t_min, t_max);
    for (std::size_t i = 0; i < d; ++i) proposal_[i] = state_[i] + t * direction_[i];

    ++proposed_;
    if (!feasible(proposal_)) return;
    if (measure_.kind == MeasureKind::AmplitudeCoordinate) {
        double log_ratio = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            if (!(proposal_[i] > 0.0)) return;
            log_ratio += 0.5 * (std::log(state_[i]) - std::log(proposal_[i]));
        }
        if (log_ratio < 0.0 && std::log(uniform01(rng_)) >= log_ratio) return;
    }
    ++accepted_;
    state_.swap(proposal_);
}

OccupationVector ShellSampler::next_hit_and_run()
{
    for (std::uint64_t i = 0; i < thinning_; ++i) hit_and_run_move();
    return occupation_from_free(shell_, state_);
}

std::vector<OccupationVector> draw_samples(const EnergyShell& shell, MeasureSpec measure,
                                           const SamplerConfig& config)
{
    ShellSampler sampler(shell, measure, config);
    std::vector<OccupationVector> out;
    out.reserve(config.samples);
    for (std::uint64_t i = 0; i < config.samples; ++i) out.push_back(sampler.next());
    return out;
}

EnsembleMean ensemble_mean(const EnergyShell& shell, MeasureSpec measure,
                           const SamplerConfig& config)
{
    const std::size_t n = shell.size();
    EnsembleMean result;
    result.measure = measure;

    if (n == 2) {
        result.mean = occupation_from_free(shell, {});
        result.std_error.assign(n, 0.0);
        result.exact = true;
        return result;
    }
    if (n == 3 && measure.kind == MeasureKind::AmplitudeCoordinate && !config.force_monte_carlo) {
        result.mean = exact_mean_3(shell);
        result.std_error.assign(n, 0.0);
        result.exact = true;
        return result;
    }

    ShellSampler sampler(shell, measure, config);
    BatchMeans stats(n, config.samples);
    for (std::uint64_t i = 0; i < config.samples; ++i) stats.add(sampler.next().values());
    result.mean = OccupationVector(stats.mean());
    result.std_error = stats.std_error();
    result.samples_used = stats.count();
    return result;
}

}  // namespace microshell
