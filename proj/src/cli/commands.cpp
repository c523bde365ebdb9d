#include "microshell/cli/commands.hpp"

#include <sstream>

#include "microshell/discrepancy.hpp"
#include "microshell/walk.hpp"

namespace microshell::cli {

namespace {

EnergyShell shell_from(const RunConfig& config)
{
    if (config.levels.empty()) throw Error(ErrorKind::Config, "no energy levels given (--levels)");
    if (!config.energy) throw Error(ErrorKind::Config, "no total energy given (--energy)");
    return make_shell(make_spectrum(config.levels), *config.energy);
}

ReportDocument base_document(const RunConfig& config, std::string command)
{
    ReportDocument doc;
    doc.command = std::move(command);
    doc.input = config;
    doc.provenance.seed = config.sampler.seed;
    doc.provenance.measure = std::string(to_string(config.measure.kind));
    doc.provenance.samples = config.sampler.samples;
    return doc;
}

}  // namespace

ExitCode exit_code_for(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::Config:
    case ErrorKind::InvalidInput:
    case ErrorKind::LengthMismatch: return kExitConfig;
    case ErrorKind::InfeasibleEnergy:
    case ErrorKind::DegenerateShell:
    case ErrorKind::NoFiniteBeta: return kExitInfeasibleEnergy;
    case ErrorKind::InfeasiblePoint:
    case ErrorKind::SamplerFailure: return kExitSamplerFailure;
    }
    return kExitInternal;
}

ReportDocument run_analyze(const RunConfig& config)
{
    const EnergyShell shell = shell_from(config);
    if (shell.degenerate())
        throw Error(ErrorKind::InfeasibleEnergy,
                    "total energy sits on a spectrum bound; no interior shell to analyze");
    config.sampler.validate();

    const SweepOutcome out = analyze_shell(shell, config.measure, config.sampler, config.fit_tolerance);
    ReportDocument doc = base_document(config, "analyze");
    doc.micro = make_micro_block(out.micro);
    doc.fit = make_fit_block(out.fit);
    doc.discrepancy = make_discrepancy_block(out.report);
    return doc;
}

ReportDocument run_walk(const RunConfig& config, std::ostream* trajectory)
{
    config.walk.validate();
    config.sampler.validate();
    const EnergyShell shell = shell_from(config);

    TrajectoryObserver dump;
    if (trajectory) {
        *trajectory << "step";
        for (std::size_t k = 1; k <= shell.size(); ++k) *trajectory << ",p_" << k;
        *trajectory << '\n';
        dump = [trajectory](std::uint64_t step, const OccupationVector& p) {
            *trajectory << step;
            for (double x : p.values()) *trajectory << ',' << format_number(x);
            *trajectory << '\n';
        };
    }
    const ErgodicityReport r =
        ergodicity_check(shell, config.measure, config.walk, config.sampler, dump);

    ReportDocument doc = base_document(config, "walk");
    doc.micro = make_micro_block(r.ensemble);
    doc.walk = make_walk_block(r);
    doc.provenance.walk_seed = config.walk.seed;
    doc.provenance.walk_steps = config.walk.steps;
    return doc;
}

std::string run_sweep(const RunConfig& config)
{
    if (config.levels.empty()) throw Error(ErrorKind::Config, "no energy levels given (--levels)");
    config.sampler.validate();
    const EnergySpectrum spectrum = make_spectrum(config.levels);
    const auto rows = energy_sweep(spectrum, config.energies, config.measure, config.sampler,
                                   config.fit_tolerance);
    std::string out = sweep_csv_header(spectrum.size());
    for (const auto& row : rows) out += sweep_csv_row(row, spectrum.size());
    return out;
}

std::string run_scaling(const RunConfig& config)
{
    ScalingStudyConfig study;
    study.n_min = config.scaling.n_min;
    study.n_max = config.scaling.n_max;
    study.trials = config.scaling.trials;
    study.energy_quantile = config.scaling.quantile;
    study.threads = config.scaling.threads;
    study.measure = config.measure;
    study.sampler = config.sampler;
    study.seed = config.sampler.seed;

    const auto rows = level_scaling_study(study);
    const ScalingSummary summary = summarize_scaling(rows);

    std::ostringstream os;
    os << "n_levels,trial,spectrum_seed,energy_quantile,max_rel_diff,total_variation\n";
    for (const auto& r : rows)
        os << r.n_levels << ',' << r.trial << ',' << r.spectrum_seed << ','
           << format_number(r.energy_quantile) << ',' << format_number(r.max_rel_diff) << ','
           << format_number(r.total_variation) << '\n';
    for (const auto& level : summary.levels)
        os << "# median n_levels=" << level.n_levels
           << " max_rel_diff=" << format_number(level.median_max_rel_diff)
           << " total_variation=" << format_number(level.median_total_variation) << '\n';
    os << "# trend_non_increasing=" << (summary.monotone_non_increasing ? "true" : "false") << '\n';
    os << "# last_not_above_first=" << (summary.last_not_above_first ? "true" : "false") << '\n';
    return os.str();
}

std::string render(const ReportDocument& doc, OutputFormat format)
{
    switch (format) {
    case OutputFormat::Json: return to_json(doc).dump(2) + '\n';
    case OutputFormat::Table: return render_table(doc);
    case OutputFormat::Csv: break;
    }

    std::ostringstream os;
    if (doc.walk && doc.micro) {
        os << "component,time_mean,time_std_error,ensemble_mean,ensemble_std_error\n";
        for (std::size_t k = 0; k < doc.walk->time_mean.size(); ++k)
            os << k + 1 << ',' << format_number(doc.walk->time_mean[k]) << ','
               << format_number(doc.walk->std_error[k]) << ',' << format_number(doc.micro->mean[k])
               << ',' << format_number(doc.micro->std_error[k]) << '\n';
        return os.str();
    }
    const std::size_t n = doc.input.levels.size();
    os << sweep_csv_header(n);
    if (doc.micro && doc.fit && doc.discrepancy && doc.input.energy) {
        os << format_number(*doc.input.energy);
        for (double p : doc.micro->mean) os << ',' << format_number(p);
        os << ',' << format_number(doc.fit->beta);
        for (double p : doc.fit->probabilities) os << ',' << format_number(p);
        os << ',' << format_number(doc.discrepancy->max_rel_diff) << ','
           << format_number(doc.discrepancy->total_variation) << ','
           << format_number(doc.discrepancy->kl_divergence) << '\n';
    }
    return os.str();
}

}  // namespace microshell::cli
