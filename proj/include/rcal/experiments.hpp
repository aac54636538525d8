#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rcal/simulate.hpp"

namespace rcal {

class ComparisonError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// no_cal plus periodic_heavy(k) and fixed_light(k) for every k.
[[nodiscard]] std::vector<Policy> reference_family(std::span<const int> periods);
[[nodiscard]] std::vector<Policy> reference_family();

/// Best reference mean gap minus runtime mean gap; positive means the
/// runtime controller beats every open-loop member. Throws ComparisonError
/// on an empty family or when scenarios differ.
[[nodiscard]] double delta_open(const SimulationResult& runtime, std::span<const SimulationResult> references);

/// Lowest mean gap over the family at one scenario.
[[nodiscard]] double best_reference_mean_gap(const Scenario& scenario, std::span<const Policy> references);

[[nodiscard]] std::vector<double> linspace(double lo, double hi, int n);
[[nodiscard]] std::vector<double> logspace(double lo, double hi, int n);

struct Grid {
    std::vector<double> alpha;
    std::vector<double> a0_s;

    [[nodiscard]] std::size_t cells() const { return alpha.size() * a0_s.size(); }
    /// Row-major: alpha index major, a0 index minor.
    [[nodiscard]] std::size_t index(std::size_t i_alpha, std::size_t i_a0) const { return i_alpha * a0_s.size() + i_a0; }
    void validate() const;
};

/// 9 x 9 over alpha in [0, 1] and a0 in [0, 24 h].
[[nodiscard]] Grid default_grid();

/// Copy of `base` with alpha and a0 replaced.
[[nodiscard]] Scenario at_cell(const Scenario& base, double alpha, double a0_s);
/// Copy of `base` with the latency regime replaced.
[[nodiscard]] Scenario with_regime(const Scenario& base, const LatencyRegime& regime);

/// Run every (policy, cell) pair; results[p][cell], cells row-major.
[[nodiscard]] std::vector<std::vector<SimulationResult>> evaluate_policy_grid(const Scenario& base,
                                                                             std::span<const Policy> policies,
                                                                             const Grid& grid, unsigned workers = 1);

struct GainMap {
    Grid grid;
    std::string regime;
    Policy controller;
    std::vector<double> values;  ///< delta_open, row-major

    [[nodiscard]] double at(std::size_t i_alpha, std::size_t i_a0) const { return values[grid.index(i_alpha, i_a0)]; }
    [[nodiscard]] int positive_cells() const;
};

/// One map per (regime, controller), regimes outer. References are shared
/// between controllers of the same regime.
[[nodiscard]] std::vector<GainMap> gain_maps(const Scenario& base, std::span<const LatencyRegime> regimes,
                                             std::span<const Policy> controllers, const Grid& grid,
                                             std::span<const Policy> references, unsigned workers = 1);

/// Single map at base.model.regime.
[[nodiscard]] GainMap gain_map(const Scenario& base, const Policy& controller, const Grid& grid,
                               std::span<const Policy> references, unsigned workers = 1);

struct SliceCurve {
    std::string axis;  ///< "alpha" or "a0"
    std::string regime;
    Policy controller;
    std::vector<double> alpha;
    std::vector<double> a0_s;
    std::vector<double> delta_open;
};

/// Gain vs alpha at fixed a0 and gain vs a0 at fixed alpha, per regime.
[[nodiscard]] std::vector<SliceCurve> regime_slices(const Scenario& base, const Policy& controller, double alpha_fixed,
                                                    double a0_fixed_s, const Grid& grid,
                                                    std::span<const LatencyRegime> regimes,
                                                    std::span<const Policy> references, unsigned workers = 1);

/// heavy / total with 0/0 = 0.
[[nodiscard]] double heavy_fraction(int heavy_count, int action_count);

struct ActionDiagnostics {
    Grid grid;
    std::string regime;
    Policy controller;
    std::vector<int> total_actions;
    std::vector<int> heavy_counts;
    std::vector<double> heavy_fraction;
};

[[nodiscard]] std::vector<ActionDiagnostics> action_diagnostics(const Scenario& base, const Policy& controller,
                                                                const Grid& grid,
                                                                std::span<const LatencyRegime> regimes,
                                                                unsigned workers = 1);

enum class ScanKind { fixed_iteration, fixed_wall_clock };

[[nodiscard]] std::string_view to_string(ScanKind kind);

struct ScanSettings {
    int n_iterations = 600;      ///< fixed_iteration: budget = n * (t_class + t_alg)
    double budget_s = 600.0;     ///< fixed_wall_clock budget
};

struct ScanResult {
    ScanKind kind = ScanKind::fixed_wall_clock;
    std::vector<double> t_class_grid;
    std::vector<std::string> regimes;
    std::vector<std::vector<double>> gains;  ///< gains[regime][t_class index]
};

/// Controller gain at base alpha and a0 across classical-loop times.
[[nodiscard]] ScanResult classical_scan(const Scenario& base, const Policy& controller, ScanKind kind,
                                        std::span<const double> t_class_grid,
                                        std::span<const LatencyRegime> regimes, std::span<const Policy> references,
                                        const ScanSettings& settings = {}, unsigned workers = 1);

/// A named perturbation of the representative setup.
struct RobustnessVariant {
    std::string name;
    std::string param;
    std::function<void(Scenario&, Policy&)> apply;
};

/// Identity, L3 forms, lambda in {0.6, 2}, H in 2..12, tau_drift x {0.5, 1, 2},
/// beta -/+ 0.1, heavy rounds in {10, 20, 40}.
[[nodiscard]] std::vector<RobustnessVariant> default_robustness_variants();

struct RobustnessRow {
    std::string variant;
    std::string param;
    std::vector<double> deltas;  ///< one per regime, input order
    bool ordering_holds = false; ///< deltas non-decreasing across regimes
};

[[nodiscard]] std::vector<RobustnessRow> robustness_scan(const Scenario& base, const Policy& controller,
                                                         std::span<const LatencyRegime> regimes,
                                                         std::span<const RobustnessVariant> variants,
                                                         std::span<const Policy> references, unsigned workers = 1);

void write_gainmap_csv(std::ostream& out, std::span<const GainMap> maps);
void write_slices_csv(std::ostream& out, std::span<const SliceCurve> slices);
void write_diagnostics_csv(std::ostream& out, std::span<const ActionDiagnostics> diagnostics);
void write_scan_csv(std::ostream& out, std::span<const ScanResult> scans);
void write_robustness_csv(std::ostream& out, std::span<const RobustnessRow> rows);

}  // namespace rcal
