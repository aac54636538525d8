#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rcal/experiments.hpp"

namespace rcal {

/// Raised for malformed, unknown or out-of-range configuration. line() is
/// the 1-based source line, or 0 when the error is not tied to one.
class ConfigError : public std::runtime_error {
  public:
    ConfigError(const std::string& message, int line = 0);
    [[nodiscard]] int line() const { return line_; }

  private:
    int line_;
};

/// Every tunable of a run. nu, the targets, the tolerances, rho, r_max and
/// g_min are model choices; the rest are the reference evaluation defaults.
struct RunConfig {
    // drift and workload
    double tau_drift_s = 6.0 * kHour;
    double nu = 2.0;
    double alpha = 0.7;
    double lambda = 2.0;
    double rho = 0.05;
    double r_max = 0.3;
    double g_min = 0.05;
    double g0 = 1.0;
    double t_class_s = 1.0;
    double t_alg_s = 45e-3;
    double t_budget_s = 600.0;
    double a0_s = 12.0 * kHour;

    // primitives
    double light_t0_s = 1.1e-3;
    int light_rounds = 1;
    double light_beta = 0.25;
    double light_target = 0.85;
    double light_tau_tol_s = 20e-3;
    double heavy_t0_s = 100e-3;
    int heavy_rounds = 20;
    double heavy_beta = 0.65;
    double heavy_target = 0.98;
    double heavy_tau_tol_s = 2e-3;

    // latency regimes
    double tau_cloud_s = 25e-3;
    double tau_local_s = 1e-3;
    double tau_tight_s = 4e-6;
    RealizabilityForm l3_form = RealizabilityForm::rational;

    // policy selection
    std::string policy = "rollout";  ///< no_cal | periodic_heavy | fixed_light | greedy | rollout
    int horizon = 6;
    int period = 6;
    HorizonMode horizon_mode = HorizonMode::per_candidate;
    std::string regime = "all";      ///< cloud | local | tight | all
    std::string controller = "all";  ///< greedy | rollout | all
    std::vector<int> reference_periods = {3, 6, 12};

    // grids and scans
    int grid_alpha_points = 9;
    double grid_alpha_min = 0.0;
    double grid_alpha_max = 1.0;
    int grid_a0_points = 9;
    double grid_a0_min_s = 0.0;
    double grid_a0_max_s = 24.0 * kHour;
    int scan_points = 13;
    double scan_t_class_min_s = 10e-3;
    double scan_t_class_max_s = 60.0;
    int scan_iterations = 600;
    double scan_budget_s = 600.0;
    std::string scan_kind = "all";  ///< fixed_iteration | fixed_wall_clock | all

    unsigned workers = 0;  ///< 0 = one per hardware thread
    std::string out_dir = "out";

    /// Throws ConfigError on any range violation.
    void validate() const;
    bool operator==(const RunConfig&) const = default;

    [[nodiscard]] std::vector<LatencyRegime> all_regimes() const;
    [[nodiscard]] std::vector<LatencyRegime> selected_regimes() const;
    /// Scenario at (alpha, a0) with the given regime.
    [[nodiscard]] Scenario scenario(const LatencyRegime& regime) const;
    [[nodiscard]] Policy selected_policy() const;
    [[nodiscard]] Policy rollout_controller() const;
    [[nodiscard]] std::vector<Policy> selected_controllers() const;
    [[nodiscard]] std::vector<Policy> references() const;
    [[nodiscard]] Grid grid() const;
    [[nodiscard]] std::vector<double> scan_grid() const;
    [[nodiscard]] std::vector<ScanKind> selected_scan_kinds() const;
};

/// Parse a duration with optional unit suffix (us, ms, s, min, h); a bare
/// number is seconds. Throws std::invalid_argument.
[[nodiscard]] double parse_duration(std::string_view text);

/// Apply one key = value assignment. Unknown keys and malformed values throw
/// ConfigError carrying `line`.
void apply_setting(RunConfig& config, std::string_view key, std::string_view value, int line = 0);

/// Parse key = value lines ('#' starts a comment) over the defaults, then
/// validate.
[[nodiscard]] RunConfig parse_config(std::string_view text);

/// Defaults when `path` is empty, otherwise parse the file.
[[nodiscard]] RunConfig load_config(const std::filesystem::path& path = {});

/// Every key with its resolved value, in a form parse_config reads back to
/// an identical RunConfig.
[[nodiscard]] std::string to_config_text(const RunConfig& config);

/// All recognized keys in manifest order.
[[nodiscard]] std::vector<std::string> config_keys();

}  // namespace rcal
