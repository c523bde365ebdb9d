// Independent reference computations for the unit and acceptance tests.
// Nothing here calls into the library's geometry, sampling or fitting code.
#ifndef MICROSHELL_TESTS_ORACLES_HPP
#define MICROSHELL_TESTS_ORACLES_HPP

#include <cmath>
#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

namespace oracle {

/// Trapezoid rule with `points` nodes.
inline double trapezoid(const std::function<double(double)>& f, double a, double b,
                        std::size_t points)
{
    const double h = (b - a) / static_cast<double>(points - 1);
    double sum = 0.5 * (f(a) + f(b));
    for (std::size_t i = 1; i + 1 < points; ++i) sum += f(a + h * static_cast<double>(i));
    return sum * h;
}

/// Plain bisection for a decreasing function, run until the bracket stops
/// shrinking.
inline double bisect_decreasing(const std::function<double(double)>& f, double lo, double hi)
{
    for (int i = 0; i < 400; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        (f(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

/// Inverse temperature from sum_n (E_n - E) exp(-beta (E_n - E_1)) = 0, which
/// never forms the partition function.
inline double beta_root(const std::vector<double>& levels, double energy)
{
    auto g = [&](double beta) {
        double s = 0.0;
        for (double e : levels) s += (e - energy) * std::exp(-beta * (e - levels.front()));
        return s;
    };
    return bisect_decreasing(g, -50.0, 50.0);
}

inline std::vector<double> gibbs(const std::vector<double>& levels, double beta)
{
    std::vector<double> w;
    double z = 0.0;
    for (double e : levels) {
        w.push_back(std::exp(-beta * (e - levels.front())));
        z += w.back();
    }
    for (double& x : w) x /= z;
    return w;
}

/// Solve p_a + p_b = rest, E_a p_a + E_b p_b = energy_rest by Cramer's rule.
inline std::pair<double, double> solve_pair(double ea, double eb, double rest, double energy_rest)
{
    const double det = eb - ea;
    return {(eb * rest - energy_rest) / det, (energy_rest - ea * rest) / det};
}

/// Feasible range of p_1 on a three-level shell, by scanning a uniform grid
/// of `points` values of p_1 in [0, 1].
inline std::pair<double, double> scan_interval_3(const std::vector<double>& e, double energy,
                                                 std::size_t points)
{
    double lo = 2.0, hi = -1.0;
    for (std::size_t i = 0; i < points; ++i) {
        const double x = static_cast<double>(i) / static_cast<double>(points - 1);
        const auto [p2, p3] = solve_pair(e[1], e[2], 1.0 - x, energy - e[0] * x);
        if (p2 >= -1e-12 && p3 >= -1e-12) {
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
    }
    return {lo, hi};
}

struct GridMean {
    std::vector<double> mean;
    std::size_t cells = 0;
};

/// Flat-measure mean over a four-level shell by midpoint-grid integration
/// over the chart (p_a, p_b); the remaining pair is solved exactly. Any
/// choice of chart gives the same mean because charts differ by an affine
/// map with constant Jacobian.
inline GridMean grid_mean_4(const std::vector<double>& e, double energy, std::size_t a,
                            std::size_t b, std::size_t resolution)
{
    std::size_t rest[2];
    std::size_t r = 0;
    for (std::size_t k = 0; k < 4; ++k)
        if (k != a && k != b) rest[r++] = k;

    GridMean out;
    out.mean.assign(4, 0.0);
    const double h = 1.0 / static_cast<double>(resolution);
    for (std::size_t i = 0; i < resolution; ++i) {
        const double x = (static_cast<double>(i) + 0.5) * h;
        for (std::size_t j = 0; j < resolution; ++j) {
            const double y = (static_cast<double>(j) + 0.5) * h;
            if (x + y > 1.0) continue;
            const auto [u, v] =
                solve_pair(e[rest[0]], e[rest[1]], 1.0 - x - y, energy - e[a] * x - e[b] * y);
            if (u < 0.0 || v < 0.0) continue;
            out.mean[a] += x;
            out.mean[b] += y;
            out.mean[rest[0]] += u;
            out.mean[rest[1]] += v;
            ++out.cells;
        }
    }
    for (double& m : out.mean) m /= static_cast<double>(out.cells);
    return out;
}

}  // namespace oracle

#endif
