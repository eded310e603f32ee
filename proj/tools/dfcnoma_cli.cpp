// Command-line front end: parameter sweeps, baseline comparison and the
// analytic-vs-Monte-Carlo check suite.
//
// Exit codes: 0 success, 1 check suite failed, 2 invalid input,
// 3 numerical failure (some rows could not be evaluated).

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "dfcnoma/config_io.hpp"
#include "dfcnoma/experiments.hpp"
#include "dfcnoma/numerics.hpp"

namespace {

using namespace dfcnoma;
using namespace dfcnoma::experiments;

constexpr int kExitCheckFailed = 1;
constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

struct SweepOptions {
    std::string config_path;
    std::string axis = "rho-b-db";
    std::string grid;
    std::string ic = "imperfect";
    std::optional<double> sigma1;
    std::optional<double> sigma3;
    std::optional<double> rho_b_db;
    std::string engine = "analytic";
    std::uint64_t samples = 1'000'000;
    std::uint64_t seed = 0x5eed;
    std::uint32_t shards = 16;
    std::uint32_t threads = 0;
    std::string out = "-";
    std::string format = "csv";
};

const std::set<std::string> kFlagKeys = {"axis", "grid",   "ic",     "engine",  "samples",
                                         "seed", "out",    "format", "shards", "threads"};

template <class T>
T pick(const std::map<std::string, T>& table, const std::string& key, const char* what)
{
    auto it = table.find(key);
    if (it == table.end())
        throw ConfigError(what, "unknown value '" + key + "'");
    return it->second;
}

// Applies flag-like keys from the config file wherever the command line did
// not set the option explicitly.
void merge_config_file(SweepOptions& o, const CLI::App& cmd, const nlohmann::json& doc)
{
    auto from_file = [&](const char* key, const char* flag) { return doc.contains(key) && cmd.count(flag) == 0; };
    auto get_string = [&](const char* key) {
        if (!doc[key].is_string())
            throw ConfigError(key, "value must be a string");
        return doc[key].get<std::string>();
    };
    auto get_number = [&](const char* key) {
        if (!doc[key].is_number())
            throw ConfigError(key, "value must be a number");
        return doc[key].get<double>();
    };
    auto get_count = [&](const char* key) {
        if (!doc[key].is_number_unsigned())
            throw ConfigError(key, "value must be a non-negative integer");
        return doc[key].get<std::uint64_t>();
    };

    if (from_file("axis", "--axis"))
        o.axis = get_string("axis");
    if (from_file("grid", "--grid")) {
        if (doc["grid"].is_array()) {
            std::string joined;
            for (const auto& v : doc["grid"]) {
                if (!v.is_number())
                    throw ConfigError("grid", "array entries must be numbers");
                joined += (joined.empty() ? "" : ",") + format_number(v.get<double>());
            }
            o.grid = joined;
        } else {
            o.grid = get_string("grid");
        }
    }
    if (from_file("ic", "--ic"))
        o.ic = get_string("ic");
    if (from_file("sigma1", "--sigma1"))
        o.sigma1 = get_number("sigma1");
    if (from_file("sigma3", "--sigma3"))
        o.sigma3 = get_number("sigma3");
    if (from_file("engine", "--engine"))
        o.engine = get_string("engine");
    if (from_file("samples", "--samples"))
        o.samples = get_count("samples");
    if (from_file("seed", "--seed"))
        o.seed = get_count("seed");
    if (from_file("shards", "--shards"))
        o.shards = static_cast<std::uint32_t>(get_count("shards"));
    if (from_file("threads", "--threads"))
        o.threads = static_cast<std::uint32_t>(get_count("threads"));
    if (from_file("out", "--out"))
        o.out = get_string("out");
    if (from_file("format", "--format"))
        o.format = get_string("format");
}

nlohmann::json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("--config", "cannot open '" + path + "'");
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("--config", std::string("invalid JSON: ") + e.what());
    }
}

SweepSpec build_spec(SweepOptions o, const CLI::App& cmd)
{
    SweepSpec spec;
    if (!o.config_path.empty()) {
        const auto doc = read_json_file(o.config_path);
        // sigma1/sigma3 in the file act as overrides of the IC preset.
        spec.fixed = parse_system_config(doc, kFlagKeys);
        if (doc.contains("rho_b_db") && !doc.contains("rho_u_db"))
            spec.fixed.rho_u = spec.fixed.rho_b / 2.0;
        merge_config_file(o, cmd, doc);
    }

    spec.axis = pick<SweepAxis>({{"rho-b-db", SweepAxis::rho_b_db}, {"theta1", SweepAxis::theta1}}, o.axis, "axis");
    spec.ic = pick<IcMode>({{"perfect", IcMode::perfect}, {"imperfect", IcMode::imperfect}, {"none", IcMode::none}},
                           o.ic, "ic");
    spec.engine = pick<Engine>(
        {{"analytic", Engine::analytic}, {"mc", Engine::montecarlo}, {"both", Engine::both}}, o.engine, "engine");
    spec.sigma1 = o.sigma1;
    spec.sigma3 = o.sigma3;

    if (o.grid.empty())
        o.grid = spec.axis == SweepAxis::rho_b_db ? "0:2:40" : "0.05:0.05:0.45";
    try {
        spec.grid = parse_grid(o.grid);
    } catch (const std::invalid_argument& e) {
        throw ConfigError("grid", e.what());
    }

    if (o.rho_b_db) {
        spec.fixed.rho_b = db_to_linear(*o.rho_b_db);
        spec.fixed.rho_u = spec.fixed.rho_b / 2.0;
    }

    spec.plan.n_samples = o.samples;
    spec.plan.master_seed = o.seed;
    spec.plan.n_shards = o.shards;
    spec.plan.max_threads = o.threads;
    spec.validate();
    return spec;
}

OutputFormat parse_format(const std::string& f)
{
    return pick<OutputFormat>({{"csv", OutputFormat::csv}, {"jsonl", OutputFormat::jsonl}}, f, "format");
}

void add_sweep_flags(CLI::App& cmd, SweepOptions& o)
{
    cmd.add_option("--config", o.config_path, "JSON file supplying any of these flags and model parameters");
    cmd.add_option("--axis", o.axis, "Sweep axis")->check(CLI::IsMember({"rho-b-db", "theta1"}));
    cmd.add_option("--grid", o.grid, "start:step:stop (inclusive) or comma list");
    cmd.add_option("--ic", o.ic, "Interference-cancellation preset")
        ->check(CLI::IsMember({"perfect", "imperfect", "none"}));
    cmd.add_option("--sigma1", o.sigma1, "Residual self-interference level (overrides preset)");
    cmd.add_option("--sigma3", o.sigma3, "Residual known-interference level (overrides preset)");
    cmd.add_option("--rho-b-db", o.rho_b_db, "BS SNR in dB for theta1 sweeps (relay SNR is 3 dB lower)");
    cmd.add_option("--engine", o.engine, "Evaluation engine")->check(CLI::IsMember({"analytic", "mc", "both"}));
    cmd.add_option("--samples", o.samples, "Monte Carlo draws per grid point");
    cmd.add_option("--seed", o.seed, "Monte Carlo master seed");
    cmd.add_option("--shards", o.shards, "Monte Carlo shards (part of the reproducibility key)");
    cmd.add_option("--threads", o.threads, "Worker threads, 0 = all cores (never changes results)");
    cmd.add_option("--out", o.out, "Output path, '-' for standard output");
    cmd.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "jsonl"}));
}

bool any_failed(const std::vector<ResultRow>& rows)
{
    for (const auto& r : rows)
        if (!r.ok) {
            std::cerr << "error: row at axis " << format_number(r.axis) << " (" << engine_tag(r.engine)
                      << ") failed: " << r.error << '\n';
            return true;
        }
    return false;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"DFC-NOMA link analysis: closed forms, Monte Carlo and sweeps"};
    app.require_subcommand(1);

    SweepOptions sweep_opts;
    auto* sweep = app.add_subcommand("sweep", "Evaluate capacities and outages over a parameter grid");
    add_sweep_flags(*sweep, sweep_opts);

    SweepOptions cmp_opts;
    auto* compare = app.add_subcommand("compare-baseline", "ESC of the proposed protocol vs the s3-only relay");
    add_sweep_flags(*compare, cmp_opts);

    std::uint64_t check_samples = 1'000'000;
    std::uint64_t check_seed = 0x5eed;
    std::uint32_t check_shards = 16;
    std::uint32_t check_threads = 0;
    std::string check_out = "-";
    auto* check = app.add_subcommand("check", "Closed forms against Monte Carlo at the reference scenario");
    check->add_option("--samples", check_samples, "Monte Carlo draws per SNR point");
    check->add_option("--seed", check_seed, "Monte Carlo master seed");
    check->add_option("--shards", check_shards, "Monte Carlo shards");
    check->add_option("--threads", check_threads, "Worker threads, 0 = all cores");
    check->add_option("--out", check_out, "Output path, '-' for standard output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    try {
        if (*sweep) {
            const auto spec = build_spec(sweep_opts, *sweep);
            const auto format = parse_format(sweep_opts.format);
            const auto rows = run_sweep(spec);
            emit_results(rows, format, sweep_opts.out);
            return any_failed(rows) ? kExitNumerical : 0;
        }
        if (*compare) {
            const auto spec = build_spec(cmp_opts, *compare);
            const auto format = parse_format(cmp_opts.format);
            const auto pairs = run_baseline_comparison(spec);
            write_output(format_comparison(pairs, format), cmp_opts.out);
            bool failed = false;
            for (const auto& p : pairs)
                failed |= any_failed({p.proposed, p.baseline});
            return failed ? kExitNumerical : 0;
        }
        if (*check) {
            montecarlo::SimulationPlan plan;
            plan.n_samples = check_samples;
            plan.master_seed = check_seed;
            plan.n_shards = check_shards;
            plan.max_threads = check_threads;
            plan.validate();
            const auto report = run_check(plan);
            write_output(format_check_csv(report), check_out);
            return report.all_pass() ? 0 : kExitCheckFailed;
        }
    } catch (const ConfigError& e) {
        std::cerr << "invalid configuration: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kExitValidation;
    } catch (const numerics::ToleranceNotMet& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::domain_error& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
    return 0;
}
