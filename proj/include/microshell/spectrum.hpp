#ifndef MICROSHELL_SPECTRUM_HPP
#define MICROSHELL_SPECTRUM_HPP

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace microshell {

/// Strictly increasing, finite list of energy levels E_1 < ... < E_N, N >= 2.
class EnergySpectrum {
public:
    explicit EnergySpectrum(std::vector<double> levels);

    std::span<const double> levels() const noexcept { return levels_; }
    std::size_t size() const noexcept { return levels_.size(); }
    double operator[](std::size_t i) const { return levels_[i]; }
    double lowest() const noexcept { return levels_.front(); }
    double highest() const noexcept { return levels_.back(); }

    bool operator==(const EnergySpectrum&) const = default;

private:
    std::vector<double> levels_;
};

/// The set {p >= 0, sum p = 1, sum p E = total_energy}. A shell whose energy
/// sits on E_1 or E_N collapses to a single point and is flagged degenerate.
class EnergyShell {
public:
    EnergyShell(EnergySpectrum spectrum, double total_energy);

    const EnergySpectrum& spectrum() const noexcept { return spectrum_; }
    double total_energy() const noexcept { return total_energy_; }
    bool degenerate() const noexcept { return degenerate_; }
    std::size_t size() const noexcept { return spectrum_.size(); }
    /// Number of free coordinates p_1..p_{N-2}.
    std::size_t free_dimension() const noexcept { return spectrum_.size() - 2; }

private:
    EnergySpectrum spectrum_;
    double total_energy_;
    bool degenerate_;
};

/// Occupation probabilities p_m = |a_m|^2. Unvalidated on its own; shell
/// membership is checked with is_member().
class OccupationVector {
public:
    OccupationVector() = default;
    explicit OccupationVector(std::vector<double> p) : p_(std::move(p)) {}

    std::span<const double> values() const noexcept { return p_; }
    std::size_t size() const noexcept { return p_.size(); }
    double operator[](std::size_t i) const { return p_[i]; }

    bool operator==(const OccupationVector&) const = default;

private:
    std::vector<double> p_;
};

/// Range of p_1 over a three-level shell.
struct FeasibleInterval {
    double lo = 0.0;
    double hi = 0.0;

    double width() const noexcept { return hi - lo; }
    bool contains(double x) const noexcept { return lo <= x && x <= hi; }
};

/// Affine parametrization of the dependent pair (p_{N-1}, p_N) by the free
/// block p_1..p_{N-2}:
///   p_{N-1} = lower_offset + sum_i lower_slope[i] * f_i
///   p_N     = upper_offset + sum_i upper_slope[i] * f_i
struct FreeChart {
    double lower_offset = 0.0;
    double upper_offset = 0.0;
    std::vector<double> lower_slope;
    std::vector<double> upper_slope;

    std::size_t dimension() const noexcept { return lower_slope.size(); }

    /// Dependent pair for a free point, without any feasibility check.
    std::pair<double, double> dependent(std::span<const double> free) const;
};

EnergySpectrum make_spectrum(std::vector<double> levels);
std::pair<double, double> energy_bounds(const EnergySpectrum& spectrum);
EnergyShell make_shell(const EnergySpectrum& spectrum, double total_energy);

FreeChart free_chart(const EnergyShell& shell);

/// Completes p_1..p_{N-2} into a full occupation vector by solving the
/// normalization and energy constraints for (p_{N-1}, p_N).
/// Throws ErrorKind::InfeasiblePoint if any component leaves [0, 1].
OccupationVector occupation_from_free(const EnergyShell& shell,
                                      std::span<const double> free);

FeasibleInterval feasible_interval_3(const EnergyShell& shell);

/// Vertices of the shell polytope. Each one mixes at most two levels.
std::vector<OccupationVector> shell_vertices(const EnergyShell& shell);

/// Componentwise average of the vertices; strictly interior for a
/// non-degenerate shell.
OccupationVector vertex_centroid(const EnergyShell& shell);

bool is_member(const EnergyShell& shell, const OccupationVector& p, double tol);

/// Tolerances bound into the OccupationVector invariants.
inline constexpr double kNormalizationTolerance = 1e-12;
inline constexpr double kEnergyTolerance = 1e-9;

}  // namespace microshell

#endif
