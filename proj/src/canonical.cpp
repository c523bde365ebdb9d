#include "microshell/canonical.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "microshell/error.hpp"

namespace microshell {

namespace {

void require_finite_beta(double beta)
{
    if (!std::isfinite(beta)) throw Error(ErrorKind::InvalidInput, "beta is not finite");
}

double max_exponent(const EnergySpectrum& spectrum, double beta)
{
    // -beta E_k is largest at E_1 for beta >= 0 and at E_N otherwise.
    return beta >= 0.0 ? -beta * spectrum.lowest() : -beta * spectrum.highest();
}

}  // namespace

std::vector<double> canonical_probabilities(const EnergySpectrum& spectrum, double beta)
{
    require_finite_beta(beta);
    const double shift = max_exponent(spectrum, beta);
    std::vector<double> p(spectrum.size());
    double z = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        p[k] = std::exp(-beta * spectrum[k] - shift);
        z += p[k];
    }
    for (double& x : p) x /= z;
    return p;
}

double log_partition(const EnergySpectrum& spectrum, double beta)
{
    require_finite_beta(beta);
    const double shift = max_exponent(spectrum, beta);
    double z = 0.0;
    for (double e : spectrum.levels()) z += std::exp(-beta * e - shift);
    return shift + std::log(z);
}

double canonical_mean_energy(const EnergySpectrum& spectrum, double beta)
{
    const auto p = canonical_probabilities(spectrum, beta);
    double e = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) e += p[k] * spectrum[k];
    return e;
}

CanonicalFit fit_beta(const EnergyShell& shell, double tol)
{
    const EnergySpectrum& spectrum = shell.spectrum();
    const double target = shell.total_energy();
    if (!(target > spectrum.lowest() && target < spectrum.highest()))
        throw Error(ErrorKind::NoFiniteBeta,
                    "total energy on a spectrum bound has no finite inverse temperature");
    if (!(tol > 0.0)) throw Error(ErrorKind::InvalidInput, "fit tolerance must be positive");

    // g(beta) = <E>_beta - target is strictly decreasing.
    auto g = [&](double beta) { return canonical_mean_energy(spectrum, beta) - target; };

    double lo = -1.0;
    double hi = 1.0;
    constexpr double kBetaLimit = 1e300;
    while (g(lo) < 0.0) {
        hi = lo;
        lo *= 2.0;
        if (-lo > kBetaLimit) throw Error(ErrorKind::NoFiniteBeta, "beta bracket diverged");
    }
    while (g(hi) > 0.0) {
        lo = hi;
        hi *= 2.0;
        if (hi > kBetaLimit) throw Error(ErrorKind::NoFiniteBeta, "beta bracket diverged");
    }

    // Bisect until the bracket cannot shrink further; the tolerance is a
    // contract on the residual, not a stopping rule.
    for (int iter = 0; iter < 2000; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double value = g(mid);
        if (value == 0.0) {
            lo = hi = mid;
            break;
        }
        (value > 0.0 ? lo : hi) = mid;
    }

    const double g_lo = g(lo);
    const double g_hi = g(hi);
    const double beta = std::abs(g_lo) <= std::abs(g_hi) ? lo : hi;

    CanonicalFit fit;
    fit.beta = beta;
    fit.log_partition = log_partition(spectrum, beta);
    fit.probabilities = canonical_probabilities(spectrum, beta);
    fit.residual = beta == lo ? g_lo : g_hi;
    if (!(std::abs(fit.residual) < tol)) {
        std::ostringstream os;
        os << "beta fit residual " << fit.residual << " exceeds tolerance " << tol;
        throw Error(ErrorKind::NoFiniteBeta, os.str());
    }
    return fit;
}

}  // namespace microshell
