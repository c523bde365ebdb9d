#ifndef MICROSHELL_CANONICAL_HPP
#define MICROSHELL_CANONICAL_HPP

#include <vector>

#include "microshell/spectrum.hpp"

namespace microshell {

inline constexpr double kDefaultFitTolerance = 1e-10;

struct CanonicalFit {
    /// Inverse temperature, in inverse energy units. Negative above the
    /// arithmetic mean of the levels.
    double beta = 0.0;
    double log_partition = 0.0;
    std::vector<double> probabilities;
    /// canonical_mean_energy(beta) - total_energy.
    double residual = 0.0;
};

/// Gibbs weights exp(-beta E_n) / Z, evaluated with a max shift so that large
/// |beta| underflows cleanly instead of overflowing.
std::vector<double> canonical_probabilities(const EnergySpectrum& spectrum, double beta);

/// log Z = log sum_k exp(-beta E_k).
double log_partition(const EnergySpectrum& spectrum, double beta);

double canonical_mean_energy(const EnergySpectrum& spectrum, double beta);

/// Solves canonical_mean_energy(beta) = total_energy. The map is strictly
/// decreasing in beta, so the root is bracketed by doubling [-1, 1] and then
/// bisected to machine resolution. Throws NoFiniteBeta if the energy is not
/// strictly inside (E_1, E_N) or if |residual| >= tol at the root.
CanonicalFit fit_beta(const EnergyShell& shell, double tol = kDefaultFitTolerance);

}  // namespace microshell

#endif
