#include "microshell/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "microshell/error.hpp"

namespace microshell {

namespace {

// Round-off allowance when completing a point whose dependent coordinates
// land exactly on a facet (e.g. the endpoints of the three-level interval).
constexpr double kFacetSlop = 1e-12;

double energy_scale(const EnergySpectrum& spectrum)
{
    return std::max({1.0, std::abs(spectrum.lowest()), std::abs(spectrum.highest())});
}

}  // namespace

std::string_view to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::InvalidInput: return "invalid-input";
    case ErrorKind::InfeasibleEnergy: return "infeasible-energy";
    case ErrorKind::InfeasiblePoint: return "infeasible-point";
    case ErrorKind::DegenerateShell: return "degenerate-shell";
    case ErrorKind::SamplerFailure: return "sampler-failure";
    case ErrorKind::NoFiniteBeta: return "no-finite-beta";
    case ErrorKind::LengthMismatch: return "length-mismatch";
    case ErrorKind::Config: return "config";
    }
    return "unknown";
}

EnergySpectrum::EnergySpectrum(std::vector<double> levels) : levels_(std::move(levels))
{
    if (levels_.size() < 2)
        throw Error(ErrorKind::InvalidInput, "spectrum needs at least 2 levels");
    for (std::size_t i = 0; i < levels_.size(); ++i) {
        if (!std::isfinite(levels_[i]))
            throw Error(ErrorKind::InvalidInput, "spectrum level is not finite");
        if (i > 0 && !(levels_[i] > levels_[i - 1])) {
            std::ostringstream os;
            os << "spectrum levels must be strictly increasing (level " << i + 1
               << " = " << levels_[i] << " follows " << levels_[i - 1] << ")";
            throw Error(ErrorKind::InvalidInput, os.str());
        }
    }
}

EnergyShell::EnergyShell(EnergySpectrum spectrum, double total_energy)
    : spectrum_(std::move(spectrum)), total_energy_(total_energy)
{
    if (!std::isfinite(total_energy_))
        throw Error(ErrorKind::InfeasibleEnergy, "total energy is not finite");
    if (total_energy_ < spectrum_.lowest() || total_energy_ > spectrum_.highest()) {
        std::ostringstream os;
        os << "total energy " << total_energy_ << " lies outside ["
           << spectrum_.lowest() << ", " << spectrum_.highest() << "]";
        throw Error(ErrorKind::InfeasibleEnergy, os.str());
    }
    degenerate_ = total_energy_ == spectrum_.lowest() || total_energy_ == spectrum_.highest();
}

std::pair<double, double> FreeChart::dependent(std::span<const double> free) const
{
    double lower = lower_offset;
    double upper = upper_offset;
    for (std::size_t i = 0; i < free.size(); ++i) {
        lower += lower_slope[i] * free[i];
        upper += upper_slope[i] * free[i];
    }
    return {lower, upper};
}

EnergySpectrum make_spectrum(std::vector<double> levels)
{
    return EnergySpectrum(std::move(levels));
}

std::pair<double, double> energy_bounds(const EnergySpectrum& spectrum)
{
    return {spectrum.lowest(), spectrum.highest()};
}

EnergyShell make_shell(const EnergySpectrum& spectrum, double total_energy)
{
    return EnergyShell(spectrum, total_energy);
}

FreeChart free_chart(const EnergyShell& shell)
{
    const auto levels = shell.spectrum().levels();
    const std::size_t n = levels.size();
    const double e_lower = levels[n - 2];
    const double e_upper = levels[n - 1];
    const double e = shell.total_energy();
    // Level differences only, so the chart is exactly shift invariant up to
    // the rounding of the differences themselves.
    const double gap = e_upper - e_lower;

    FreeChart chart;
    chart.lower_offset = (e_upper - e) / gap;
    chart.upper_offset = (e - e_lower) / gap;
    chart.lower_slope.resize(n - 2);
    chart.upper_slope.resize(n - 2);
    for (std::size_t i = 0; i + 2 < n; ++i) {
        chart.lower_slope[i] = -(e_upper - levels[i]) / gap;
        chart.upper_slope[i] = -(levels[i] - e_lower) / gap;
    }
    return chart;
}

OccupationVector occupation_from_free(const EnergyShell& shell, std::span<const double> free)
{
    const std::size_t n = shell.size();
    if (free.size() + 2 != n) {
        std::ostringstream os;
        os << "expected " << n - 2 << " free coordinates, got " << free.size();
        throw Error(ErrorKind::LengthMismatch, os.str());
    }

    std::vector<double> p(free.begin(), free.end());
    for (double x : p) {
        if (!(x >= 0.0 && x <= 1.0))
            throw Error(ErrorKind::InfeasiblePoint, "free coordinate outside [0, 1]");
    }

    auto [lower, upper] = free_chart(shell).dependent(free);
    auto settle = [](double x) {
        if (x < -kFacetSlop || x > 1.0 + kFacetSlop || !std::isfinite(x))
            throw Error(ErrorKind::InfeasiblePoint,
                        "dependent occupation leaves [0, 1]; point is off the shell");
        return std::clamp(x, 0.0, 1.0);
    };
    p.push_back(settle(lower));
    p.push_back(settle(upper));
    return OccupationVector(std::move(p));
}

FeasibleInterval feasible_interval_3(const EnergyShell& shell)
{
    if (shell.size() != 3)
        throw Error(ErrorKind::InvalidInput, "feasible_interval_3 requires exactly 3 levels");

    const FreeChart chart = free_chart(shell);
    double lo = 0.0;
    double hi = 1.0;
    // Each dependent coordinate is a + b x and must stay in [0, 1].
    auto restrict = [&](double a, double b) {
        for (double bound : {0.0, 1.0}) {
            const bool lower_bound = bound == 0.0;  // a + b x >= 0, else a + b x <= 1
            const double rhs = bound - a;
            if (b == 0.0) {
                if (lower_bound ? rhs > 0.0 : rhs < 0.0) hi = -1.0;
                continue;
            }
            const double root = rhs / b;
            if ((b > 0.0) == lower_bound)
                lo = std::max(lo, root);
            else
                hi = std::min(hi, root);
        }
    };
    restrict(chart.lower_offset, chart.lower_slope[0]);
    restrict(chart.upper_offset, chart.upper_slope[0]);

    if (lo > hi) {
        if (lo - hi > kFacetSlop)
            throw Error(ErrorKind::InfeasibleEnergy, "three-level shell is empty");
        hi = lo;
    }
    return {lo, hi};
}

std::vector<OccupationVector> shell_vertices(const EnergyShell& shell)
{
    const auto levels = shell.spectrum().levels();
    const std::size_t n = levels.size();
    const double e = shell.total_energy();

    std::vector<OccupationVector> vertices;
    auto seen = [&](const std::vector<double>& p) {
        return std::any_of(vertices.begin(), vertices.end(), [&](const OccupationVector& v) {
            for (std::size_t k = 0; k < n; ++k)
                if (std::abs(v[k] - p[k]) > kFacetSlop) return false;
            return true;
        });
    };

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double gap = levels[j] - levels[i];
            const double pi = (levels[j] - e) / gap;
            const double pj = (e - levels[i]) / gap;
            if (pi < -kFacetSlop || pj < -kFacetSlop) continue;
            std::vector<double> p(n, 0.0);
            p[i] = std::clamp(pi, 0.0, 1.0);
            p[j] = std::clamp(pj, 0.0, 1.0);
            if (!seen(p)) vertices.emplace_back(std::move(p));
        }
    }
    return vertices;
}

OccupationVector vertex_centroid(const EnergyShell& shell)
{
    const auto vertices = shell_vertices(shell);
    std::vector<double> c(shell.size(), 0.0);
    for (const auto& v : vertices)
        for (std::size_t k = 0; k < c.size(); ++k) c[k] += v[k];
    for (double& x : c) x /= static_cast<double>(vertices.size());
    return OccupationVector(std::move(c));
}

bool is_member(const EnergyShell& shell, const OccupationVector& p, double tol)
{
    const auto levels = shell.spectrum().levels();
    if (p.size() != levels.size()) return false;

    double total = 0.0;
    double energy = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        if (!std::isfinite(p[k]) || p[k] < -tol || p[k] > 1.0 + tol) return false;
        total += p[k];
        energy += p[k] * levels[k];
    }
    return std::abs(total - 1.0) <= tol &&
           std::abs(energy - shell.total_energy()) <= tol * energy_scale(shell.spectrum());
}

}  // namespace microshell
