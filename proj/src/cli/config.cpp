#include "microshell/cli/config.hpp"

#include <charconv>
#include <fstream>
#include <set>

#include "microshell/error.hpp"

namespace microshell::cli {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& what)
{
    throw Error(ErrorKind::Config, what);
}

void reject_unknown_keys(const json& obj, std::string_view where,
                         const std::set<std::string, std::less<>>& allowed)
{
    if (!obj.is_object()) config_error(std::string(where) + ": expected an object");
    for (const auto& item : obj.items())
        if (!allowed.contains(item.key()))
            config_error(std::string(where) + ": unknown key '" + item.key() + "'");
}

template <typename T>
T get_as(const json& value, std::string_view where)
{
    try {
        if constexpr (std::is_same_v<T, double>) {
            if (!value.is_number()) config_error(std::string(where) + ": expected a number");
        } else if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
            if (!value.is_number_unsigned())
                config_error(std::string(where) + ": expected a non-negative integer");
        } else if constexpr (std::is_same_v<T, bool>) {
            if (!value.is_boolean()) config_error(std::string(where) + ": expected true or false");
        } else if constexpr (std::is_same_v<T, std::string>) {
            if (!value.is_string()) config_error(std::string(where) + ": expected a string");
        }
        return value.get<T>();
    } catch (const json::exception& e) {
        config_error(std::string(where) + ": " + e.what());
    }
}

std::vector<double> get_reals(const json& value, std::string_view where)
{
    if (!value.is_array()) config_error(std::string(where) + ": expected an array of numbers");
    std::vector<double> out;
    for (const auto& v : value) out.push_back(get_as<double>(v, where));
    return out;
}

}  // namespace

std::string_view to_string(OutputFormat format)
{
    switch (format) {
    case OutputFormat::Table: return "table";
    case OutputFormat::Json: return "json";
    case OutputFormat::Csv: return "csv";
    }
    return "table";
}

OutputFormat parse_output_format(std::string_view token)
{
    if (token == "table") return OutputFormat::Table;
    if (token == "json") return OutputFormat::Json;
    if (token == "csv") return OutputFormat::Csv;
    config_error("unknown output format '" + std::string(token) + "'");
}

RunConfig parse_run_config(const json& doc)
{
    reject_unknown_keys(doc, "config", {"levels", "energy", "energies", "measure", "format",
                                        "sampler", "walk", "scaling", "tolerances"});
    RunConfig c;
    if (doc.contains("levels")) c.levels = get_reals(doc["levels"], "levels");
    if (doc.contains("energy")) c.energy = get_as<double>(doc["energy"], "energy");
    if (doc.contains("energies")) c.energies = get_reals(doc["energies"], "energies");
    if (doc.contains("measure")) c.measure = parse_measure(get_as<std::string>(doc["measure"], "measure"));
    if (doc.contains("format"))
        c.format = parse_output_format(get_as<std::string>(doc["format"], "format"));

    if (doc.contains("sampler")) {
        const json& s = doc["sampler"];
        reject_unknown_keys(s, "sampler",
                            {"method", "samples", "burn_in", "seed", "thinning", "monte_carlo"});
        if (s.contains("method"))
            c.sampler.method = parse_sampler_method(get_as<std::string>(s["method"], "sampler.method"));
        if (s.contains("samples")) c.sampler.samples = get_as<std::uint64_t>(s["samples"], "sampler.samples");
        if (s.contains("burn_in") && !s["burn_in"].is_null())
            c.sampler.burn_in = get_as<std::uint64_t>(s["burn_in"], "sampler.burn_in");
        if (s.contains("seed")) c.sampler.seed = get_as<std::uint64_t>(s["seed"], "sampler.seed");
        if (s.contains("thinning")) c.sampler.thinning = get_as<std::uint64_t>(s["thinning"], "sampler.thinning");
        if (s.contains("monte_carlo"))
            c.sampler.force_monte_carlo = get_as<bool>(s["monte_carlo"], "sampler.monte_carlo");
    }

    if (doc.contains("walk")) {
        const json& w = doc["walk"];
        reject_unknown_keys(w, "walk", {"steps", "step_scale", "burn_in", "seed", "record_every"});
        if (w.contains("steps")) c.walk.steps = get_as<std::uint64_t>(w["steps"], "walk.steps");
        if (w.contains("step_scale")) c.walk.step_scale = get_as<double>(w["step_scale"], "walk.step_scale");
        if (w.contains("burn_in")) c.walk.burn_in = get_as<std::uint64_t>(w["burn_in"], "walk.burn_in");
        if (w.contains("seed")) c.walk.seed = get_as<std::uint64_t>(w["seed"], "walk.seed");
        if (w.contains("record_every"))
            c.walk.record_every = get_as<std::uint64_t>(w["record_every"], "walk.record_every");
    }

    if (doc.contains("scaling")) {
        const json& s = doc["scaling"];
        reject_unknown_keys(s, "scaling", {"n_min", "n_max", "trials", "quantile", "threads"});
        if (s.contains("n_min")) c.scaling.n_min = get_as<std::size_t>(s["n_min"], "scaling.n_min");
        if (s.contains("n_max")) c.scaling.n_max = get_as<std::size_t>(s["n_max"], "scaling.n_max");
        if (s.contains("trials")) c.scaling.trials = get_as<std::size_t>(s["trials"], "scaling.trials");
        if (s.contains("quantile")) c.scaling.quantile = get_as<double>(s["quantile"], "scaling.quantile");
        if (s.contains("threads")) c.scaling.threads = get_as<std::size_t>(s["threads"], "scaling.threads");
    }

    if (doc.contains("tolerances")) {
        const json& t = doc["tolerances"];
        reject_unknown_keys(t, "tolerances", {"fit"});
        if (t.contains("fit")) c.fit_tolerance = get_as<double>(t["fit"], "tolerances.fit");
    }
    return c;
}

RunConfig load_run_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) config_error("cannot open config file '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        config_error("config file '" + path + "' is not valid JSON: " + e.what());
    }
    return parse_run_config(doc);
}

json to_json(const RunConfig& c)
{
    json doc;
    doc["levels"] = c.levels;
    if (c.energy) doc["energy"] = *c.energy;
    doc["energies"] = c.energies;
    doc["measure"] = std::string(to_string(c.measure.kind));
    doc["format"] = std::string(to_string(c.format));
    doc["sampler"] = {
        {"method", std::string(to_string(c.sampler.method))},
        {"samples", c.sampler.samples},
        {"burn_in", c.sampler.burn_in ? json(*c.sampler.burn_in) : json(nullptr)},
        {"seed", c.sampler.seed},
        {"thinning", c.sampler.thinning},
        {"monte_carlo", c.sampler.force_monte_carlo},
    };
    doc["walk"] = {
        {"steps", c.walk.steps},
        {"step_scale", c.walk.step_scale},
        {"burn_in", c.walk.burn_in},
        {"seed", c.walk.seed},
        {"record_every", c.walk.record_every},
    };
    doc["scaling"] = {
        {"n_min", c.scaling.n_min},
        {"n_max", c.scaling.n_max},
        {"trials", c.scaling.trials},
        {"quantile", c.scaling.quantile},
        {"threads", c.scaling.threads},
    };
    doc["tolerances"] = {{"fit", c.fit_tolerance}};
    return doc;
}

std::vector<double> parse_real_list(std::string_view text)
{
    std::vector<double> out;
    while (!text.empty()) {
        const auto comma = text.find(',');
        std::string_view item = text.substr(0, comma);
        while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
        while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
        double value = 0.0;
        const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
        if (item.empty() || ec != std::errc() || ptr != item.data() + item.size())
            config_error("'" + std::string(item) + "' is not a real number");
        out.push_back(value);
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    return out;
}

}  // namespace microshell::cli
