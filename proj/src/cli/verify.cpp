#include "microshell/cli/verify.hpp"

#include <array>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "microshell/canonical.hpp"
#include "microshell/cli/report.hpp"
#include "microshell/discrepancy.hpp"
#include "microshell/ensemble.hpp"

namespace microshell::cli {

namespace {

struct PublishedCase {
    const char* label;
    double energy;
    std::array<double, 3> mean;
    double beta;
    std::array<double, 3> probabilities;
};

// Values as printed for the three-level example with levels 0, 5, 8.
constexpr std::array<PublishedCase, 2> kCases{{
    {"E=2", 2.0, {0.674, 0.204, 0.123}, 0.223, {0.669, 0.2192, 0.1122}},
    {"E=3", 3.0, {0.508, 0.3111, 0.1805}, 0.1199, {0.5175, 0.2842, 0.1983}},
}};

}  // namespace

VerifyReport verify_paper(const VerifyOptions& options)
{
    VerifyReport report;
    auto within = [&](const char* label, std::string quantity, double reference, double computed,
                      double tol) {
        const double delta = computed - reference;
        report.rows.push_back({label, std::move(quantity), reference, computed, delta, tol, "within",
                               std::abs(delta) <= tol});
    };
    auto below = [&](const char* label, std::string quantity, double computed, double bound) {
        report.rows.push_back({label, std::move(quantity), bound, computed, computed - bound, bound,
                               "below", computed < bound});
    };

    const EnergySpectrum spectrum = make_spectrum({0.0, 5.0, 8.0});
    for (const PublishedCase& c : kCases) {
        const EnergyShell shell = make_shell(spectrum, c.energy);
        const SweepOutcome out =
            analyze_shell(shell, {MeasureKind::AmplitudeCoordinate}, SamplerConfig{});
        for (std::size_t k = 0; k < 3; ++k)
            within(c.label, "mean p_" + std::to_string(k + 1), c.mean[k], out.micro.mean[k],
                   options.mean_tol);
        within(c.label, "beta", c.beta, out.fit.beta, options.beta_tol);
        below(c.label, "|fit residual|", std::abs(out.fit.residual), options.residual_tol);
        for (std::size_t k = 0; k < 3; ++k)
            within(c.label, "P_" + std::to_string(k + 1), c.probabilities[k],
                   out.fit.probabilities[k], options.probability_tol);
        below(c.label, "max_rel_diff", out.report.max_rel_diff, options.max_rel_diff_bound);
    }

    for (const auto& row : report.rows) report.all_pass = report.all_pass && row.pass;
    return report;
}

std::string render_verify_table(const VerifyReport& report)
{
    std::ostringstream os;
    os << std::left << std::setw(6) << "case" << std::setw(16) << "quantity" << std::setw(14)
       << "reference" << std::setw(16) << "computed" << std::setw(16) << "|delta|"
       << std::setw(10) << "tolerance" << "verdict\n";
    for (const auto& r : report.rows) {
        const bool bound_rule = r.rule == "below";
        os << std::setw(6) << r.case_label << std::setw(16) << r.quantity << std::setw(14)
           << (bound_rule ? "< " + format_number(r.reference) : format_number(r.reference))
           << std::setw(16) << format_number(r.computed) << std::setw(16)
           << (bound_rule ? "-" : format_number(std::abs(r.delta))) << std::setw(10)
           << format_number(r.tolerance) << (r.pass ? "PASS" : "FAIL") << '\n';
    }
    os << (report.all_pass ? "all checks passed\n" : "verification FAILED\n");
    return os.str();
}

nlohmann::json verify_to_json(const VerifyReport& report)
{
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : report.rows)
        rows.push_back({{"case", r.case_label},
                        {"quantity", r.quantity},
                        {"reference", quantize(r.reference)},
                        {"computed", quantize(r.computed)},
                        {"delta", quantize(r.delta)},
                        {"tolerance", quantize(r.tolerance)},
                        {"rule", r.rule},
                        {"verdict", r.pass ? "PASS" : "FAIL"}});
    return {{"tool_version", kToolVersion}, {"all_pass", report.all_pass}, {"rows", rows}};
}

}  // namespace microshell::cli
