#ifndef MICROSHELL_ENSEMBLE_HPP
#define MICROSHELL_ENSEMBLE_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "microshell/random.hpp"
#include "microshell/spectrum.hpp"

namespace microshell {

enum class MeasureKind {
    /// Uniform in the amplitudes sqrt(p_i) of the free block; density
    /// proportional to prod_i p_i^{-1/2} in the free coordinates.
    AmplitudeCoordinate,
    /// Lebesgue measure on the (N-2)-dimensional polytope.
    FlatOccupation,
};

struct MeasureSpec {
    MeasureKind kind = MeasureKind::AmplitudeCoordinate;

    bool operator==(const MeasureSpec&) const = default;
};

/// "amplitude" or "flat".
std::string_view to_string(MeasureKind kind);
MeasureSpec parse_measure(std::string_view token);

enum class SamplerMethod { Auto, Rejection, HitAndRun };

std::string_view to_string(SamplerMethod method);
SamplerMethod parse_sampler_method(std::string_view token);

struct SamplerConfig {
    /// Auto picks rejection for N <= 6 unless a short pilot shows the
    /// bounding box accepts under 2% of proposals; hit-and-run otherwise.
    SamplerMethod method = SamplerMethod::Auto;
    std::uint64_t samples = 100'000;
    /// Hit-and-run only; defaults to 10 * N * thinning.
    std::optional<std::uint64_t> burn_in;
    std::uint64_t seed = 20100303;
    /// Hit-and-run only.
    std::uint64_t thinning = 1;
    /// Sample N = 3 under AmplitudeCoordinate instead of using the closed form.
    bool force_monte_carlo = false;

    void validate() const;
    bool operator==(const SamplerConfig&) const = default;
};

struct EnsembleMean {
    OccupationVector mean;
    std::vector<double> std_error;
    std::uint64_t samples_used = 0;
    MeasureSpec measure;
    /// True when produced by the closed form (std_error is identically zero).
    bool exact = false;
};

/// Closed-form mean over a three-level shell under AmplitudeCoordinate:
/// x = sqrt(p_1) uniform on [sqrt(lo), sqrt(hi)], so
/// E[p_1] = (hi^{3/2} - lo^{3/2}) / (3 (sqrt(hi) - sqrt(lo))),
/// and p_2, p_3 follow by linearity of the dependent pair in p_1.
OccupationVector exact_mean_3(const EnergyShell& shell);

/// Deterministic stream of shell points distributed per the measure.
class ShellSampler {
public:
    ShellSampler(const EnergyShell& shell, MeasureSpec measure, const SamplerConfig& config);

    OccupationVector next();

    SamplerMethod method() const noexcept { return method_; }
    /// Rejection: accepted / proposed. Hit-and-run: Metropolis acceptance.
    double acceptance_ratio() const noexcept;

private:
    OccupationVector next_rejection();
    OccupationVector next_hit_and_run();
    void hit_and_run_move();
    bool feasible(std::span<const double> free) const;
    double pilot_acceptance(std::uint64_t seed);

    EnergyShell shell_;
    MeasureSpec measure_;
    SamplerMethod method_;
    std::uint64_t thinning_;
    FreeChart chart_;
    Rng rng_;
    std::vector<double> box_lo_;
    std::vector<double> box_hi_;
    std::vector<double> state_;
    std::vector<double> proposal_;
    std::vector<double> direction_;
    std::uint64_t proposed_ = 0;
    std::uint64_t accepted_ = 0;
};

std::vector<OccupationVector> draw_samples(const EnergyShell& shell, MeasureSpec measure,
                                           const SamplerConfig& config);

/// Microcanonical mean with batch-means standard errors. N = 3 under
/// AmplitudeCoordinate uses exact_mean_3 unless config.force_monte_carlo;
/// N = 2 returns the single shell point.
EnsembleMean ensemble_mean(const EnergyShell& shell, MeasureSpec measure,
                           const SamplerConfig& config);

}  // namespace microshell

#endif
