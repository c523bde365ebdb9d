#include "microshell/cli/report.hpp"

#include <charconv>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "microshell/error.hpp"

namespace microshell::cli {

using nlohmann::json;

std::string format_number(double x)
{
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general,
                                         kSignificantDigits);
    if (ec != std::errc()) throw Error(ErrorKind::InvalidInput, "number formatting failed");
    return std::string(buf, end);
}

double quantize(double x)
{
    if (!std::isfinite(x)) return x;
    const std::string text = format_number(x);
    double out = 0.0;
    std::from_chars(text.data(), text.data() + text.size(), out);
    return out;
}

std::vector<double> quantize(std::span<const double> xs)
{
    std::vector<double> out;
    out.reserve(xs.size());
    for (double x : xs) out.push_back(quantize(x));
    return out;
}

MicroBlock make_micro_block(const EnsembleMean& m)
{
    return {quantize(m.mean.values()), quantize(m.std_error), m.samples_used,
            std::string(to_string(m.measure.kind)), m.exact};
}

FitBlock make_fit_block(const CanonicalFit& f)
{
    return {quantize(f.beta), quantize(f.log_partition), quantize(f.probabilities),
            quantize(f.residual), f.beta < 0.0};
}

DiscrepancyBlock make_discrepancy_block(const DiscrepancyReport& r)
{
    return {quantize(r.abs_diff), quantize(r.rel_diff), quantize(r.max_rel_diff),
            quantize(r.total_variation), quantize(r.kl_divergence)};
}

WalkBlock make_walk_block(const ErgodicityReport& r)
{
    WalkBlock w;
    w.time_mean = quantize(r.time.time_mean.values());
    w.std_error = quantize(r.time.std_error);
    w.acceptance_ratio = quantize(r.time.acceptance_ratio);
    w.recorded_points = r.time.recorded_points;
    w.combined_std_error = quantize(r.combined_std_error);
    w.max_abs_diff = quantize(r.max_abs_diff);
    w.comparison = make_discrepancy_block(r.discrepancy);
    w.pass = r.pass;
    return w;
}

namespace {

json discrepancy_json(const DiscrepancyBlock& d)
{
    return {{"abs_diff", d.abs_diff},
            {"rel_diff", d.rel_diff},
            {"max_rel_diff", d.max_rel_diff},
            {"total_variation", d.total_variation},
            {"kl_divergence", d.kl_divergence}};
}

DiscrepancyBlock discrepancy_from(const json& j)
{
    return {j.at("abs_diff").get<std::vector<double>>(), j.at("rel_diff").get<std::vector<double>>(),
            j.at("max_rel_diff").get<double>(), j.at("total_variation").get<double>(),
            j.at("kl_divergence").get<double>()};
}

void write_vector(std::ostream& os, std::span<const double> xs)
{
    os << '(';
    for (std::size_t i = 0; i < xs.size(); ++i) os << (i ? ", " : "") << format_number(xs[i]);
    os << ')';
}

}  // namespace

json to_json(const ReportDocument& doc)
{
    json j;
    j["tool_version"] = doc.tool_version;
    j["command"] = doc.command;
    j["input"] = to_json(doc.input);
    if (doc.micro) {
        j["microcanonical"] = {{"mean", doc.micro->mean},
                               {"std_error", doc.micro->std_error},
                               {"samples_used", doc.micro->samples_used},
                               {"measure", doc.micro->measure},
                               {"exact", doc.micro->exact}};
    }
    if (doc.fit) {
        j["canonical"] = {{"beta", doc.fit->beta},
                          {"log_partition", doc.fit->log_partition},
                          {"probabilities", doc.fit->probabilities},
                          {"residual", doc.fit->residual},
                          {"negative_beta", doc.fit->negative_beta}};
    }
    if (doc.discrepancy) j["discrepancy"] = discrepancy_json(*doc.discrepancy);
    if (doc.walk) {
        j["walk"] = {{"time_mean", doc.walk->time_mean},
                     {"std_error", doc.walk->std_error},
                     {"acceptance_ratio", doc.walk->acceptance_ratio},
                     {"recorded_points", doc.walk->recorded_points},
                     {"combined_std_error", doc.walk->combined_std_error},
                     {"max_abs_diff", doc.walk->max_abs_diff},
                     {"comparison", discrepancy_json(doc.walk->comparison)},
                     {"pass", doc.walk->pass}};
    }
    json prov = {{"seed", doc.provenance.seed},
                 {"measure", doc.provenance.measure},
                 {"samples", doc.provenance.samples}};
    if (doc.provenance.walk_seed) prov["walk_seed"] = *doc.provenance.walk_seed;
    if (doc.provenance.walk_steps) prov["walk_steps"] = *doc.provenance.walk_steps;
    j["provenance"] = prov;
    return j;
}

ReportDocument report_from_json(const json& j)
{
    try {
        ReportDocument doc;
        doc.tool_version = j.at("tool_version").get<std::string>();
        doc.command = j.at("command").get<std::string>();
        doc.input = parse_run_config(j.at("input"));
        if (j.contains("microcanonical")) {
            const json& m = j["microcanonical"];
            doc.micro = MicroBlock{m.at("mean").get<std::vector<double>>(),
                                   m.at("std_error").get<std::vector<double>>(),
                                   m.at("samples_used").get<std::uint64_t>(),
                                   m.at("measure").get<std::string>(), m.at("exact").get<bool>()};
        }
        if (j.contains("canonical")) {
            const json& f = j["canonical"];
            doc.fit = FitBlock{f.at("beta").get<double>(), f.at("log_partition").get<double>(),
                               f.at("probabilities").get<std::vector<double>>(),
                               f.at("residual").get<double>(), f.at("negative_beta").get<bool>()};
        }
        if (j.contains("discrepancy")) doc.discrepancy = discrepancy_from(j["discrepancy"]);
        if (j.contains("walk")) {
            const json& w = j["walk"];
            WalkBlock b;
            b.time_mean = w.at("time_mean").get<std::vector<double>>();
            b.std_error = w.at("std_error").get<std::vector<double>>();
            b.acceptance_ratio = w.at("acceptance_ratio").get<double>();
            b.recorded_points = w.at("recorded_points").get<std::uint64_t>();
            b.combined_std_error = w.at("combined_std_error").get<std::vector<double>>();
            b.max_abs_diff = w.at("max_abs_diff").get<double>();
            b.comparison = discrepancy_from(w.at("comparison"));
            b.pass = w.at("pass").get<bool>();
            doc.walk = std::move(b);
        }
        const json& p = j.at("provenance");
        doc.provenance.seed = p.at("seed").get<std::uint64_t>();
        doc.provenance.measure = p.at("measure").get<std::string>();
        doc.provenance.samples = p.at("samples").get<std::uint64_t>();
        if (p.contains("walk_seed")) doc.provenance.walk_seed = p["walk_seed"].get<std::uint64_t>();
        if (p.contains("walk_steps")) doc.provenance.walk_steps = p["walk_steps"].get<std::uint64_t>();
        return doc;
    } catch (const json::exception& e) {
        throw Error(ErrorKind::Config, std::string("malformed report document: ") + e.what());
    }
}

std::string render_table(const ReportDocument& doc)
{
    std::ostringstream os;
    os << "microshell " << doc.tool_version << " - " << doc.command << '\n';
    os << "levels         ";
    write_vector(os, doc.input.levels);
    os << '\n';
    if (doc.input.energy) os << "total energy   " << format_number(*doc.input.energy) << '\n';
    os << "measure        " << doc.provenance.measure << '\n';

    if (doc.micro) {
        os << "\nmicrocanonical mean";
        os << (doc.micro->exact ? " (closed form)\n" : " (Monte Carlo, " +
                                                           std::to_string(doc.micro->samples_used) +
                                                           " samples)\n");
        os << "  mean         ";
        write_vector(os, doc.micro->mean);
        os << "\n  std error    ";
        write_vector(os, doc.micro->std_error);
        os << '\n';
    }
    if (doc.fit) {
        os << "\ncanonical fit\n";
        os << "  beta         " << format_number(doc.fit->beta);
        if (doc.fit->negative_beta) os << "  (negative: population inversion)";
        os << "\n  log Z        " << format_number(doc.fit->log_partition);
        os << "\n  P            ";
        write_vector(os, doc.fit->probabilities);
        os << "\n  residual     " << format_number(doc.fit->residual) << '\n';
    }
    if (doc.discrepancy) {
        os << "\ndiscrepancy (microcanonical vs canonical)\n";
        os << "  rel diff     ";
        write_vector(os, doc.discrepancy->rel_diff);
        os << "\n  max rel diff " << format_number(doc.discrepancy->max_rel_diff);
        os << "\n  total var    " << format_number(doc.discrepancy->total_variation);
        os << "\n  KL (nats)    " << format_number(doc.discrepancy->kl_divergence) << '\n';
    }
    if (doc.walk) {
        os << "\ntime average (" << doc.walk->recorded_points << " recorded points, acceptance "
           << format_number(doc.walk->acceptance_ratio) << ")\n";
        os << "  time mean    ";
        write_vector(os, doc.walk->time_mean);
        os << "\n  std error    ";
        write_vector(os, doc.walk->std_error);
        os << "\n  max |diff|   " << format_number(doc.walk->max_abs_diff);
        os << "\n  ergodicity   " << (doc.walk->pass ? "PASS" : "FAIL")
           << " (every |time - ensemble| < 3 combined std errors)\n";
    }
    os << "\nseed " << doc.provenance.seed;
    if (doc.provenance.walk_seed) os << ", walk seed " << *doc.provenance.walk_seed;
    os << '\n';
    return os.str();
}

std::string sweep_csv_header(std::size_t n)
{
    std::ostringstream os;
    os << "energy";
    for (std::size_t k = 1; k <= n; ++k) os << ",p_mean_" << k;
    os << ",beta";
    for (std::size_t k = 1; k <= n; ++k) os << ",P_" << k;
    os << ",max_rel_diff,total_variation,kl\n";
    return os.str();
}

std::string sweep_csv_row(const SweepRow& row, std::size_t n)
{
    std::ostringstream os;
    os << format_number(row.energy);
    if (!row.outcome) {
        os << ",infeasible";
        for (std::size_t k = 1; k < 2 * n + 4; ++k) os << ',';
        os << '\n';
        return os.str();
    }
    const SweepOutcome& out = *row.outcome;
    for (double p : out.micro.mean.values()) os << ',' << format_number(p);
    os << ',' << format_number(out.fit.beta);
    for (double p : out.fit.probabilities) os << ',' << format_number(p);
    os << ',' << format_number(out.report.max_rel_diff) << ','
       << format_number(out.report.total_variation) << ','
       << format_number(out.report.kl_divergence) << '\n';
    return os.str();
}

}  // namespace microshell::cli
