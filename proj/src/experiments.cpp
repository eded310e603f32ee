#include "dfcnoma/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "dfcnoma/analytic.hpp"
#include "dfcnoma/config_io.hpp"
#include "dfcnoma/numerics.hpp"

namespace dfcnoma::experiments {

IcLevels ic_levels(IcMode mode)
{
    switch (mode) {
    case IcMode::perfect:
        return {0.0, 0.0};
    case IcMode::imperfect:
        return {0.08 * 0.08, 0.1 * 0.1};
    case IcMode::none:
        return {1.0, 1.0};
    }
    throw std::invalid_argument("unknown IC mode");
}

std::vector<double> parse_grid(std::string_view text)
{
    auto to_number = [](std::string_view token) {
        const std::string s(token);
        char* end = nullptr;
        errno = 0;
        const double v = std::strtod(s.c_str(), &end);
        if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v))
            throw std::invalid_argument("grid: cannot parse number '" + s + "'");
        return v;
    };

    std::vector<double> out;
    if (text.find(':') != std::string_view::npos) {
        const auto first = text.find(':');
        const auto second = text.find(':', first + 1);
        if (second == std::string_view::npos || text.find(':', second + 1) != std::string_view::npos)
            throw std::invalid_argument("grid: expected start:step:stop");
        const double start = to_number(text.substr(0, first));
        const double step = to_number(text.substr(first + 1, second - first - 1));
        const double stop = to_number(text.substr(second + 1));
        if (!(step > 0.0) || stop < start)
            throw std::invalid_argument("grid: need step > 0 and stop >= start");
        const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
        for (long i = 0; i < count; ++i)
            out.push_back(start + static_cast<double>(i) * step);
        return out;
    }
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto comma = text.find(',', pos);
        const auto token = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
        out.push_back(to_number(token));
        if (comma == std::string_view::npos)
            break;
        pos = comma + 1;
    }
    return out;
}

SystemConfig point_config(const SweepSpec& spec, double axis_value)
{
    SystemConfig cfg = spec.fixed;
    const IcLevels levels = ic_levels(spec.ic);
    cfg.sigma1 = spec.sigma1.value_or(levels.sigma1);
    cfg.sigma3 = spec.sigma3.value_or(levels.sigma3);
    switch (spec.axis) {
    case SweepAxis::rho_b_db:
        cfg.rho_b = db_to_linear(axis_value);
        cfg.rho_u = cfg.rho_b / 2.0;
        break;
    case SweepAxis::theta1:
        cfg.theta1 = axis_value;
        cfg.theta3 = 1.0 - axis_value;
        cfg.theta2 = axis_value;
        cfg.theta3p = 1.0 - axis_value;
        break;
    }
    return cfg;
}

SystemConfig fc_noma_baseline(const SystemConfig& cfg)
{
    SystemConfig base = cfg;
    base.theta2 = 0.0;
    base.theta3p = 1.0;
    return base;
}

void SweepSpec::validate() const
{
    if (grid.empty())
        throw std::invalid_argument("sweep grid is empty");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            throw std::invalid_argument("sweep grid must be strictly increasing");
    if (engine != Engine::analytic)
        plan.validate();
    quad.validate();
    for (double v : grid)
        point_config(*this, v).validate();
}

std::string engine_tag(Engine e)
{
    switch (e) {
    case Engine::analytic:
        return "analytic";
    case Engine::montecarlo:
        return "mc";
    case Engine::both:
        return "both";
    }
    return "?";
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

ResultRow failed_row(double axis, Engine engine, const std::string& what)
{
    ResultRow row;
    row.axis = axis;
    row.engine = engine;
    row.ok = false;
    row.error = what;
    for (Metric* m : {&row.ec_u1, &row.ec_d1, &row.ec_u3, &row.esc, &row.op_u1, &row.op_u3})
        m->value = kNaN;
    return row;
}

ResultRow analytic_row(const SystemConfig& cfg, const numerics::QuadratureSpec& quad, double axis)
{
    const auto caps = analytic::ergodic_capacities(cfg, quad);
    const auto ops = analytic::outage_probabilities(cfg);
    ResultRow row;
    row.axis = axis;
    row.engine = Engine::analytic;
    row.ec_u1.value = caps.u1;
    row.ec_d1.value = caps.d1;
    row.ec_u3.value = caps.u3;
    row.esc.value = caps.total;
    row.op_u1.value = ops.u1;
    row.op_u3.value = ops.u3;
    if (ops.d1)
        row.op_d1 = Metric{*ops.d1, std::nullopt, false};
    return row;
}

Metric to_metric(const montecarlo::EstimateWithCI& e) { return {e.mean, e.ci_half_width, e.low_count}; }

ResultRow montecarlo_row(const SystemConfig& cfg, const montecarlo::SimulationPlan& plan, double axis)
{
    const auto est = montecarlo::estimate_link_metrics(cfg, plan);
    ResultRow row;
    row.axis = axis;
    row.engine = Engine::montecarlo;
    row.ec_u1 = to_metric(est.capacity.u1);
    row.ec_d1 = to_metric(est.capacity.d1);
    row.ec_u3 = to_metric(est.capacity.u3);
    row.esc = to_metric(est.capacity.esc);
    row.op_u1 = to_metric(est.outage.u1);
    row.op_u3 = to_metric(est.outage.u3);
    if (est.outage.d1)
        row.op_d1 = to_metric(*est.outage.d1);
    return row;
}

template <class F>
ResultRow guarded(double axis, Engine engine, F&& compute)
{
    try {
        return compute();
    } catch (const numerics::ToleranceNotMet& e) {
        return failed_row(axis, engine, e.what());
    } catch (const std::domain_error& e) {
        return failed_row(axis, engine, e.what());
    }
}

// Evaluates `rows_for(point)` for each grid point on a worker pool and
// returns the concatenation in grid order.
template <class F>
std::vector<ResultRow> map_grid(const std::vector<double>& grid, unsigned max_threads, F&& rows_for)
{
    std::vector<std::vector<ResultRow>> per_point(grid.size());
    unsigned workers = max_threads ? max_threads : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(grid.size()));

    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        for (std::size_t i = next++; i < grid.size(); i = next++)
            per_point[i] = rows_for(grid[i]);
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back(work);
    }

    std::vector<ResultRow> out;
    for (auto& rows : per_point)
        for (auto& r : rows)
            out.push_back(std::move(r));
    return out;
}

std::vector<ResultRow> rows_for_config(const SystemConfig& cfg, double axis, const SweepSpec& spec,
                                       const montecarlo::SimulationPlan& plan)
{
    std::vector<ResultRow> rows;
    if (spec.engine == Engine::analytic || spec.engine == Engine::both)
        rows.push_back(guarded(axis, Engine::analytic, [&] { return analytic_row(cfg, spec.quad, axis); }));
    if (spec.engine == Engine::montecarlo || spec.engine == Engine::both)
        rows.push_back(guarded(axis, Engine::montecarlo, [&] { return montecarlo_row(cfg, plan, axis); }));
    return rows;
}

// Grid points already run in parallel; Monte Carlo shards stay on the
// point's worker.
montecarlo::SimulationPlan inner_plan(const SweepSpec& spec)
{
    montecarlo::SimulationPlan p = spec.plan;
    p.max_threads = 1;
    return p;
}

}  // namespace

std::vector<ResultRow> run_sweep(const SweepSpec& spec)
{
    spec.validate();
    const auto plan = inner_plan(spec);
    return map_grid(spec.grid, spec.plan.max_threads, [&](double v) {
        return rows_for_config(point_config(spec, v), v, spec, plan);
    });
}

std::vector<BaselinePair> run_baseline_comparison(const SweepSpec& spec)
{
    spec.validate();
    const auto plan = inner_plan(spec);
    // Each point yields its proposed rows followed by its baseline rows.
    const auto rows = map_grid(spec.grid, spec.plan.max_threads, [&](double v) {
        const SystemConfig cfg = point_config(spec, v);
        auto out = rows_for_config(cfg, v, spec, plan);
        auto base = rows_for_config(fc_noma_baseline(cfg), v, spec, plan);
        out.insert(out.end(), base.begin(), base.end());
        return out;
    });

    const std::size_t per_engine = spec.engine == Engine::both ? 2 : 1;
    std::vector<BaselinePair> pairs;
    for (std::size_t i = 0; i < rows.size(); i += 2 * per_engine) {
        for (std::size_t k = 0; k < per_engine; ++k) {
            BaselinePair p{rows[i + k], rows[i + per_engine + k], 0.0};
            p.esc_delta = (p.proposed.ok && p.baseline.ok) ? p.proposed.esc.value - p.baseline.esc.value : kNaN;
            pairs.push_back(std::move(p));
        }
    }
    return pairs;
}

// ---------------------------------------------------------------------------

std::string format_number(double v)
{
    if (std::isnan(v))
        return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

namespace {

double rounded(double v) { return std::isfinite(v) ? std::strtod(format_number(v).c_str(), nullptr) : v; }

nlohmann::json metric_json(const Metric& m)
{
    if (std::isnan(m.value))
        return nullptr;
    return rounded(m.value);
}

nlohmann::json row_json(const ResultRow& r)
{
    nlohmann::json j;
    j["axis"] = rounded(r.axis);
    j["engine"] = engine_tag(r.engine);
    const std::pair<const char*, const Metric*> fields[] = {
        {"ec_u1", &r.ec_u1}, {"ec_d1", &r.ec_d1}, {"ec_u3", &r.ec_u3}, {"esc", &r.esc},
        {"op_u1", &r.op_u1}, {"op_u3", &r.op_u3}, {"op_d1", r.op_d1 ? &*r.op_d1 : nullptr}};
    nlohmann::json ci = nlohmann::json::object();
    nlohmann::json low = nlohmann::json::array();
    for (const auto& [name, m] : fields) {
        j[name] = m ? metric_json(*m) : nlohmann::json(nullptr);
        if (m && m->ci_half_width)
            ci[name] = rounded(*m->ci_half_width);
        if (m && m->low_count)
            low.push_back(name);
    }
    if (r.engine == Engine::montecarlo) {
        j["ci"] = ci;
        j["low_count"] = low;
    }
    if (!r.ok)
        j["error"] = r.error;
    return j;
}

std::string ci_field(const Metric& m) { return m.ci_half_width ? format_number(*m.ci_half_width) : ""; }

}  // namespace

std::string format_results(const std::vector<ResultRow>& rows, OutputFormat format)
{
    std::ostringstream os;
    if (format == OutputFormat::jsonl) {
        for (const auto& r : rows)
            os << row_json(r).dump() << '\n';
        return os.str();
    }
    os << kCsvHeader << '\n';
    for (const auto& r : rows) {
        os << format_number(r.axis) << ',' << engine_tag(r.engine) << ',' << format_number(r.ec_u1.value) << ','
           << format_number(r.ec_d1.value) << ',' << format_number(r.ec_u3.value) << ','
           << format_number(r.esc.value) << ',' << format_number(r.op_u1.value) << ','
           << format_number(r.op_u3.value) << ',' << (r.op_d1 ? format_number(r.op_d1->value) : "") << ','
           << ci_field(r.esc) << '\n';
    }
    return os.str();
}

std::string format_comparison(const std::vector<BaselinePair>& pairs, OutputFormat format)
{
    std::ostringstream os;
    if (format == OutputFormat::jsonl) {
        for (const auto& p : pairs) {
            nlohmann::json j;
            j["axis"] = rounded(p.proposed.axis);
            j["engine"] = engine_tag(p.proposed.engine);
            j["proposed"] = row_json(p.proposed);
            j["baseline"] = row_json(p.baseline);
            j["esc_delta"] = std::isnan(p.esc_delta) ? nlohmann::json(nullptr) : nlohmann::json(rounded(p.esc_delta));
            os << j.dump() << '\n';
        }
        return os.str();
    }
    os << kComparisonCsvHeader << '\n';
    for (const auto& p : pairs) {
        os << format_number(p.proposed.axis) << ',' << engine_tag(p.proposed.engine) << ','
           << format_number(p.proposed.esc.value) << ',' << format_number(p.baseline.esc.value) << ','
           << format_number(p.esc_delta) << ',' << ci_field(p.proposed.esc) << ',' << ci_field(p.baseline.esc)
           << '\n';
    }
    return os.str();
}

void write_output(const std::string& text, const std::string& destination)
{
    if (destination == "-") {
        std::cout << text << std::flush;
        if (!std::cout)
            throw std::runtime_error("failed writing to standard output");
        return;
    }
    std::ofstream out(destination, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot open output file '" + destination + "': " + std::strerror(errno));
    out << text;
    out.flush();
    if (!out)
        throw std::runtime_error("failed writing output file '" + destination + "'");
}

void emit_results(const std::vector<ResultRow>& rows, OutputFormat format, const std::string& destination)
{
    if (rows.empty())
        throw std::invalid_argument("emit_results: no rows");
    write_output(format_results(rows, format), destination);
}

std::vector<ResultRow> parse_results_csv(std::string_view text)
{
    std::vector<ResultRow> rows;
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader)
        throw std::invalid_argument("results CSV: missing or unexpected header");

    auto number = [](const std::string& s) { return s == "nan" ? kNaN : std::stod(s); };
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::vector<std::string> f;
        std::size_t pos = 0;
        for (;;) {
            const auto comma = line.find(',', pos);
            f.push_back(line.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
            if (comma == std::string::npos)
                break;
            pos = comma + 1;
        }
        if (f.size() != 10)
            throw std::invalid_argument("results CSV: expected 10 fields, got " + std::to_string(f.size()));

        ResultRow r;
        r.axis = number(f[0]);
        if (f[1] == "analytic")
            r.engine = Engine::analytic;
        else if (f[1] == "mc")
            r.engine = Engine::montecarlo;
        else
            throw std::invalid_argument("results CSV: unknown engine '" + f[1] + "'");
        Metric* metrics[] = {&r.ec_u1, &r.ec_d1, &r.ec_u3, &r.esc, &r.op_u1, &r.op_u3};
        for (std::size_t i = 0; i < 6; ++i)
            metrics[i]->value = number(f[2 + i]);
        if (!f[8].empty())
            r.op_d1 = Metric{number(f[8]), std::nullopt, false};
        if (!f[9].empty())
            r.esc.ci_half_width = number(f[9]);
        r.ok = !std::isnan(r.esc.value);
        rows.push_back(std::move(r));
    }
    return rows;
}

// ---------------------------------------------------------------------------

bool CheckReport::all_pass() const
{
    return std::all_of(rows.begin(), rows.end(), [](const CheckRow& r) { return r.pass; });
}

CheckReport run_check(const montecarlo::SimulationPlan& plan, double z_tolerance)
{
    CheckReport report;
    for (double db : {10.0, 20.0, 30.0}) {
        SystemConfig cfg;
        cfg.rho_b = db_to_linear(db);
        cfg.rho_u = cfg.rho_b / 2.0;

        const auto caps = analytic::ergodic_capacities(cfg);
        const auto ops = analytic::outage_probabilities(cfg);
        const auto est = montecarlo::estimate_link_metrics(cfg, plan);

        auto add = [&](const char* name, double a, const montecarlo::EstimateWithCI& e) {
            const double diff = std::fabs(a - e.mean);
            const bool pass = e.std_error > 0.0 ? diff <= z_tolerance * e.std_error : diff <= 1e-12;
            report.rows.push_back({name, db, a, e.mean, e.std_error, pass});
        };
        add("ec_u1", caps.u1, est.capacity.u1);
        add("ec_d1", caps.d1, est.capacity.d1);
        add("ec_u3", caps.u3, est.capacity.u3);
        add("esc", caps.total, est.capacity.esc);
        add("op_u1", ops.u1, est.outage.u1);
        add("op_u3", ops.u3, est.outage.u3);
        add("op_d1", ops.d1.value(), est.outage.d1.value());
    }
    return report;
}

std::string format_check_csv(const CheckReport& report)
{
    std::ostringstream os;
    os << "quantity,rho_b_db,analytic,mc,std_error,z,pass\n";
    for (const auto& r : report.rows) {
        const double z = r.std_error > 0.0 ? std::fabs(r.analytic - r.montecarlo) / r.std_error : 0.0;
        os << r.quantity << ',' << format_number(r.rho_b_db) << ',' << format_number(r.analytic) << ','
           << format_number(r.montecarlo) << ',' << format_number(r.std_error) << ',' << format_number(z) << ','
           << (r.pass ? "pass" : "FAIL") << '\n';
    }
    return os.str();
}

}  // namespace dfcnoma::experiments
