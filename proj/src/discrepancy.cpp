#include "microshell/discrepancy.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <sstream>
#include <thread>

#include "microshell/error.hpp"
#include "microshell/random.hpp"

namespace microshell {

DiscrepancyReport compare(std::span<const double> micro, std::span<const double> canon)
{
    if (micro.size() != canon.size()) {
        std::ostringstream os;
        os << "compare: length mismatch (" << micro.size() << " vs " << canon.size() << ")";
        throw Error(ErrorKind::LengthMismatch, os.str());
    }

    DiscrepancyReport r;
    r.abs_diff.resize(micro.size());
    r.rel_diff.resize(micro.size());
    for (std::size_t k = 0; k < micro.size(); ++k) {
        if (!(canon[k] > 0.0))
            throw Error(ErrorKind::InvalidInput,
                        "compare: reference probabilities must be strictly positive");
        r.abs_diff[k] = std::abs(micro[k] - canon[k]);
        r.rel_diff[k] = r.abs_diff[k] / canon[k];
        r.max_rel_diff = std::max(r.max_rel_diff, r.rel_diff[k]);
        r.total_variation += 0.5 * r.abs_diff[k];
        if (micro[k] > 0.0) r.kl_divergence += micro[k] * std::log(micro[k] / canon[k]);
    }
    // Rounding can push a KL of identical-up-to-ulp vectors below zero.
    r.kl_divergence = std::max(0.0, r.kl_divergence);
    return r;
}

DiscrepancyReport compare(const EnsembleMean& micro, const CanonicalFit& fit)
{
    return compare(micro.mean.values(), fit.probabilities);
}

SweepOutcome analyze_shell(const EnergyShell& shell, MeasureSpec measure,
                           const SamplerConfig& sampler, double fit_tol)
{
    SweepOutcome out;
    out.micro = ensemble_mean(shell, measure, sampler);
    out.fit = fit_beta(shell, fit_tol);
    out.report = compare(out.micro, out.fit);
    return out;
}

std::vector<SweepRow> energy_sweep(const EnergySpectrum& spectrum,
                                   std::span<const double> energies, MeasureSpec measure,
                                   const SamplerConfig& sampler, double fit_tol)
{
    std::vector<SweepRow> rows;
    rows.reserve(energies.size());
    for (double e : energies) {
        SweepRow row;
        row.energy = e;
        if (!(e > spectrum.lowest() && e < spectrum.highest())) {
            row.error = "infeasible: energy must lie strictly inside the spectrum";
        } else {
            try {
                row.outcome = analyze_shell(make_shell(spectrum, e), measure, sampler, fit_tol);
            } catch (const Error& err) {
                row.error = std::string(to_string(err.kind())) + ": " + err.what();
            }
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

void ScalingStudyConfig::validate() const
{
    if (n_min < 3 || n_max < n_min)
        throw Error(ErrorKind::Config, "scaling study needs 3 <= n_min <= n_max");
    if (trials < 1) throw Error(ErrorKind::Config, "scaling study needs trials >= 1");
    if (threads < 1) throw Error(ErrorKind::Config, "scaling study needs threads >= 1");
    if (!(energy_quantile > 0.0 && energy_quantile < 1.0))
        throw Error(ErrorKind::Config, "energy quantile must lie in (0, 1)");
    sampler.validate();
}

EnergySpectrum random_spectrum(std::size_t n, std::uint64_t seed)
{
    Rng rng(seed);
    for (;;) {
        std::vector<double> x(n);
        for (double& v : x) v = uniform01(rng);
        std::sort(x.begin(), x.end());
        const double lo = x.front();
        const double span = x.back() - lo;
        for (double& v : x) v = (v - lo) / span * 10.0;
        x.front() = 0.0;
        x.back() = 10.0;
        // Ties after rescaling are astronomically rare; redraw from the same
        // stream if one happens.
        if (std::adjacent_find(x.begin(), x.end(), std::greater_equal<>()) == x.end())
            return EnergySpectrum(std::move(x));
    }
}

std::uint64_t scaling_spectrum_seed(std::uint64_t study_seed, std::size_t n, std::size_t trial)
{
    return derive_seed(study_seed, n, trial);
}

std::vector<ScalingStudyRow> level_scaling_study(const ScalingStudyConfig& config,
                                                 const SpectrumGenerator& generator)
{
    config.validate();

    struct Job {
        std::size_t n;
        std::size_t trial;
    };
    std::vector<Job> jobs;
    for (std::size_t n = config.n_min; n <= config.n_max; ++n)
        for (std::size_t t = 0; t < config.trials; ++t) jobs.push_back({n, t});

    std::vector<ScalingStudyRow> rows(jobs.size());
    std::vector<std::exception_ptr> failures(jobs.size());

    auto run = [&](std::size_t index) {
        const Job& job = jobs[index];
        ScalingStudyRow& row = rows[index];
        row.n_levels = job.n;
        row.trial = job.trial;
        row.spectrum_seed = scaling_spectrum_seed(config.seed, job.n, job.trial);
        row.energy_quantile = config.energy_quantile;

        const EnergySpectrum spectrum = generator(job.n, row.spectrum_seed);
        const double energy = spectrum.lowest() +
                              config.energy_quantile * (spectrum.highest() - spectrum.lowest());
        SamplerConfig sampler = config.sampler;
        sampler.seed = derive_seed(row.spectrum_seed, 0x5a);
        const SweepOutcome out = analyze_shell(make_shell(spectrum, energy), config.measure, sampler);
        row.max_rel_diff = out.report.max_rel_diff;
        row.total_variation = out.report.total_variation;
    };

    const std::size_t workers = std::clamp<std::size_t>(config.threads, 1, jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++) {
            try {
                run(i);
            } catch (...) {
                failures[i] = std::current_exception();
            }
        }
    };
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    }

    for (const auto& f : failures)
        if (f) std::rethrow_exception(f);
    return rows;
}

double median(std::vector<double> values)
{
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    const std::size_t m = values.size() / 2;
    return values.size() % 2 == 1 ? values[m] : 0.5 * (values[m - 1] + values[m]);
}

ScalingSummary summarize_scaling(std::span<const ScalingStudyRow> rows)
{
    std::map<std::size_t, std::pair<std::vector<double>, std::vector<double>>> by_n;
    for (const auto& row : rows) {
        by_n[row.n_levels].first.push_back(row.max_rel_diff);
        by_n[row.n_levels].second.push_back(row.total_variation);
    }

    ScalingSummary summary;
    for (auto& [n, metrics] : by_n)
        summary.levels.push_back({n, median(metrics.first), median(metrics.second)});
    for (std::size_t i = 1; i < summary.levels.size(); ++i)
        if (summary.levels[i].median_max_rel_diff > summary.levels[i - 1].median_max_rel_diff)
            summary.monotone_non_increasing = false;
    if (!summary.levels.empty())
        summary.last_not_above_first = summary.levels.back().median_max_rel_diff <=
                                       summary.levels.front().median_max_rel_diff;
    return summary;
}

}  // namespace microshell
