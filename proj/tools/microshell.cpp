// Command-line front end: analyze, sweep, scaling, walk, verify-paper.

#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "microshell/cli/commands.hpp"
#include "microshell/cli/config.hpp"
#include "microshell/cli/verify.hpp"

using namespace microshell;
using namespace microshell::cli;

namespace {

/// Options of one subcommand. Flags that were given on the command line are
/// applied on top of the --config file, in declaration order.
struct Subcommand {
    CLI::App* app = nullptr;
    std::string config_path;
    std::string out_path;
    std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>> overrides;

    template <typename T>
    void flag(const std::string& name, const std::string& help, std::function<void(RunConfig&, const T&)> apply)
    {
        auto value = std::make_shared<T>();
        CLI::Option* opt = app->add_option(name, *value, help);
        overrides.emplace_back(opt, [value, apply](RunConfig& c) { apply(c, *value); });
    }

    RunConfig resolve() const
    {
        RunConfig config = config_path.empty() ? RunConfig{} : load_run_config(config_path);
        for (const auto& [opt, apply] : overrides)
            if (opt->count() > 0) apply(config);
        return config;
    }
};

void add_common(Subcommand& sub, bool with_energy)
{
    sub.app->add_option("--config", sub.config_path, "JSON config file; flags override its values");
    sub.app->add_option("--out", sub.out_path, "Write output to PATH instead of stdout");
    sub.flag<std::string>("--levels", "Comma-separated energy levels, strictly increasing (e.g. 0,5,8)",
                          [](RunConfig& c, const std::string& v) { c.levels = parse_real_list(v); });
    if (with_energy)
        sub.flag<double>("--energy", "Total energy E, inside [E_1, E_N]",
                         [](RunConfig& c, const double& v) { c.energy = v; });
    sub.flag<std::string>("--measure", "Shell measure: amplitude (default) or flat",
                          [](RunConfig& c, const std::string& v) { c.measure = parse_measure(v); });
    sub.flag<std::uint64_t>("--samples", "Monte Carlo samples (default 100000)",
                            [](RunConfig& c, const std::uint64_t& v) { c.sampler.samples = v; });
    sub.flag<std::uint64_t>("--seed", "Seed for the sampler and the walk (default 20100303)",
                            [](RunConfig& c, const std::uint64_t& v) {
                                c.sampler.seed = v;
                                c.walk.seed = v;
                            });
    sub.flag<std::string>("--method", "Sampler: auto (default), rejection or hit-and-run",
                          [](RunConfig& c, const std::string& v) {
                              c.sampler.method = parse_sampler_method(v);
                          });
    sub.flag<std::uint64_t>("--thinning", "Hit-and-run thinning (default 1)",
                            [](RunConfig& c, const std::uint64_t& v) { c.sampler.thinning = v; });
    sub.flag<std::uint64_t>("--burn-in", "Hit-and-run burn-in (default 10*N*thinning)",
                            [](RunConfig& c, const std::uint64_t& v) { c.sampler.burn_in = v; });
    sub.flag<bool>("--monte-carlo", "Sample N=3 amplitude shells instead of using the closed form",
                   [](RunConfig& c, const bool& v) { c.sampler.force_monte_carlo = v; });
    sub.flag<double>("--fit-tol", "Residual tolerance of the beta fit (default 1e-10)",
                     [](RunConfig& c, const double& v) { c.fit_tolerance = v; });
}

void add_format(Subcommand& sub)
{
    sub.flag<std::string>("--format", "Output format: table (default), json or csv",
                          [](RunConfig& c, const std::string& v) { c.format = parse_output_format(v); });
}

void emit(const std::string& text, const std::string& out_path)
{
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Config, "cannot open output file '" + out_path + "'");
    out << text;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Microcanonical energy-shell averages versus the canonical distribution"};
    app.require_subcommand(1);

    Subcommand analyze{app.add_subcommand("analyze", "Ensemble mean, beta fit and discrepancy at one energy")};
    add_common(analyze, true);
    add_format(analyze);

    Subcommand sweep{app.add_subcommand("sweep", "CSV of analyze rows over an energy grid")};
    add_common(sweep, false);
    sweep.flag<std::string>("--energies", "Comma-separated energy grid (may be empty)",
                            [](RunConfig& c, const std::string& v) { c.energies = parse_real_list(v); });

    Subcommand scaling{app.add_subcommand("scaling", "Discrepancy versus number of levels on random spectra")};
    add_common(scaling, false);
    scaling.flag<std::size_t>("--n-min", "Smallest level count (default 3)",
                              [](RunConfig& c, const std::size_t& v) { c.scaling.n_min = v; });
    scaling.flag<std::size_t>("--n-max", "Largest level count (default 8)",
                              [](RunConfig& c, const std::size_t& v) { c.scaling.n_max = v; });
    scaling.flag<std::size_t>("--trials", "Random spectra per level count (default 30)",
                              [](RunConfig& c, const std::size_t& v) { c.scaling.trials = v; });
    scaling.flag<double>("--quantile", "Energy position inside [E_1, E_N] (default 0.25)",
                         [](RunConfig& c, const double& v) { c.scaling.quantile = v; });
    scaling.flag<std::size_t>("--threads", "Worker threads (default 1)",
                              [](RunConfig& c, const std::size_t& v) { c.scaling.threads = v; });

    Subcommand walk{app.add_subcommand("walk", "Time average of an equal-energy random walk versus the ensemble mean")};
    add_common(walk, true);
    add_format(walk);
    std::string trajectory_path;
    walk.app->add_option("--trajectory", trajectory_path, "Dump recorded states as CSV (step,p_1..p_N)");
    walk.flag<std::uint64_t>("--steps", "Walk steps after burn-in (default 1000000)",
                             [](RunConfig& c, const std::uint64_t& v) { c.walk.steps = v; });
    walk.flag<double>("--step-scale", "Proposal half-width in free coordinates (default 0.05)",
                      [](RunConfig& c, const double& v) { c.walk.step_scale = v; });
    walk.flag<std::uint64_t>("--walk-burn-in", "Walk burn-in steps (default 10000)",
                             [](RunConfig& c, const std::uint64_t& v) { c.walk.burn_in = v; });
    walk.flag<std::uint64_t>("--record-every", "Record every k-th state (default 10)",
                             [](RunConfig& c, const std::uint64_t& v) { c.walk.record_every = v; });
    walk.flag<std::uint64_t>("--walk-seed", "Seed for the walk only",
                             [](RunConfig& c, const std::uint64_t& v) { c.walk.seed = v; });

    CLI::App* verify = app.add_subcommand("verify-paper", "Check the published three-level results");
    VerifyOptions verify_options;
    std::string verify_format = "table";
    std::string verify_out;
    verify->add_option("--format", verify_format, "table (default) or json")
        ->check(CLI::IsMember({"table", "json"}));
    verify->add_option("--out", verify_out, "Write output to PATH instead of stdout");
    verify->add_option("--beta-tol", verify_options.beta_tol, "Tolerance on beta (default 0.002)");
    verify->add_option("--mean-tol", verify_options.mean_tol, "Tolerance on mean occupations (default 0.001)");
    verify->add_option("--prob-tol", verify_options.probability_tol,
                       "Tolerance on canonical probabilities (default 0.003)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (*verify) {
            const VerifyReport report = verify_paper(verify_options);
            emit(verify_format == "json" ? verify_to_json(report).dump(2) + "\n"
                                         : render_verify_table(report),
                 verify_out);
            return report.all_pass ? kExitSuccess : kExitVerificationFailure;
        }
        if (*analyze.app) {
            const RunConfig config = analyze.resolve();
            emit(render(run_analyze(config), config.format), analyze.out_path);
        } else if (*sweep.app) {
            emit(run_sweep(sweep.resolve()), sweep.out_path);
        } else if (*scaling.app) {
            emit(run_scaling(scaling.resolve()), scaling.out_path);
        } else if (*walk.app) {
            const RunConfig config = walk.resolve();
            std::ofstream trajectory;
            if (!trajectory_path.empty()) {
                trajectory.open(trajectory_path, std::ios::binary);
                if (!trajectory)
                    throw Error(ErrorKind::Config, "cannot open trajectory file '" + trajectory_path + "'");
            }
            const ReportDocument doc = run_walk(config, trajectory_path.empty() ? nullptr : &trajectory);
            emit(render(doc, config.format), walk.out_path);
        }
    } catch (const Error& e) {
        std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInternal;
    }
    return kExitSuccess;
}
