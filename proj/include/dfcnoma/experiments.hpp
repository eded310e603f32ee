#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dfcnoma/montecarlo.hpp"
#include "dfcnoma/numerics.hpp"
#include "dfcnoma/system_model.hpp"

namespace dfcnoma::experiments {

enum class SweepAxis { rho_b_db, theta1 };
enum class IcMode { perfect, imperfect, none };
enum class Engine { analytic, montecarlo, both };
enum class OutputFormat { csv, jsonl };

/// Residual-interference presets. `imperfect` is the 0.08^2 / 0.1^2 pair;
/// the 0.5 / 0.5 variant is selected with explicit sigma overrides.
struct IcLevels {
    double sigma1;
    double sigma3;
};
IcLevels ic_levels(IcMode mode);

inline constexpr double kHalfCancellation = 0.5;

struct SweepSpec {
    SweepAxis axis = SweepAxis::rho_b_db;
    std::vector<double> grid;
    SystemConfig fixed;
    IcMode ic = IcMode::imperfect;
    std::optional<double> sigma1;  ///< overrides the preset
    std::optional<double> sigma3;  ///< overrides the preset
    Engine engine = Engine::analytic;
    montecarlo::SimulationPlan plan;
    numerics::QuadratureSpec quad;  ///< for the closed forms that integrate

    /// Throws std::invalid_argument (or ConfigError) on an empty or
    /// non-increasing grid or an invalid point configuration.
    void validate() const;
};

/// Parses "start:step:stop" (inclusive) or a comma-separated list.
std::vector<double> parse_grid(std::string_view text);

/// The configuration evaluated at one grid value. Sweeping rho_b_db sets
/// rho_u = rho_b / 2; sweeping theta1 sets theta2 = theta1 and
/// theta3 = theta3p = 1 - theta1.
SystemConfig point_config(const SweepSpec& spec, double axis_value);

/// Same model with the relay forwarding s3 only and no D2D receiver:
/// theta2 = 0, theta3p = 1.
SystemConfig fc_noma_baseline(const SystemConfig& cfg);

struct Metric {
    double value = 0.0;
    std::optional<double> ci_half_width;  ///< Monte Carlo rows only
    bool low_count = false;
};

struct ResultRow {
    double axis = 0.0;
    Engine engine = Engine::analytic;  ///< analytic or montecarlo, never both
    Metric ec_u1, ec_d1, ec_u3, esc;
    Metric op_u1, op_u3;
    std::optional<Metric> op_d1;  ///< absent without a D2D receiver
    bool ok = true;
    std::string error;
};

std::string engine_tag(Engine e);

/// One row per grid point per engine, ordered by axis then engine
/// (analytic before montecarlo). Numerical failures mark the row instead of
/// aborting the sweep.
std::vector<ResultRow> run_sweep(const SweepSpec& spec);

struct BaselinePair {
    ResultRow proposed;
    ResultRow baseline;
    double esc_delta = 0.0;  ///< proposed ESC minus baseline ESC
};

std::vector<BaselinePair> run_baseline_comparison(const SweepSpec& spec);

/// CSV header used by format_results().
inline constexpr std::string_view kCsvHeader = "axis,engine,ec_u1,ec_d1,ec_u3,esc,op_u1,op_u3,op_d1,ci_esc";
inline constexpr std::string_view kComparisonCsvHeader =
    "axis,engine,esc_proposed,esc_baseline,esc_delta,ci_esc_proposed,ci_esc_baseline";

/// Nine significant digits, "%.9g".
std::string format_number(double v);

std::string format_results(const std::vector<ResultRow>& rows, OutputFormat format);
std::string format_comparison(const std::vector<BaselinePair>& pairs, OutputFormat format);

/// Writes `text` to `destination`, or to standard output when it is "-".
/// Throws std::runtime_error naming the path on failure.
void write_output(const std::string& text, const std::string& destination);

/// Formats and writes. Throws std::invalid_argument for an empty row set.
void emit_results(const std::vector<ResultRow>& rows, OutputFormat format, const std::string& destination);

/// Parses CSV produced by format_results().
std::vector<ResultRow> parse_results_csv(std::string_view text);

// ---------------------------------------------------------------------------
// Oracle-equivalence suite behind the `check` subcommand.

struct CheckRow {
    std::string quantity;
    double rho_b_db = 0.0;
    double analytic = 0.0;
    double montecarlo = 0.0;
    double std_error = 0.0;
    bool pass = false;
};

struct CheckReport {
    std::vector<CheckRow> rows;
    bool all_pass() const;
};

/// Reference scenario at rho_b in {10, 20, 30} dB, rho_b = 2 rho_u: every
/// closed-form capacity and outage against Monte Carlo, accepted within
/// `z_tolerance` standard errors.
CheckReport run_check(const montecarlo::SimulationPlan& plan, double z_tolerance = 3.0);

std::string format_check_csv(const CheckReport& report);

}  // namespace dfcnoma::experiments
