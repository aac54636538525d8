#pragma once

#include <cstdint>
#include <string_view>

#include "rcal/calibration.hpp"
#include "rcal/drift.hpp"

namespace rcal {

enum class Action : std::uint8_t { none, light, heavy };

[[nodiscard]] std::string_view to_string(Action action);

/// Algorithm-loop timings and gap dynamics.
struct WorkloadModel {
    double t_class_s = 1.0;
    double t_alg_s = 45e-3;
    double t_budget_s = 600.0;
    double rho = 0.05;
    double r_max = 0.3;
    double g_min = 0.05;
    double g0 = 1.0;
    ProgressModel progress;

    /// Duration of one iteration without calibration.
    [[nodiscard]] double t_base_s() const { return t_class_s + t_alg_s; }

    void validate() const;
    bool operator==(const WorkloadModel&) const = default;
};

/// Everything the dynamics depend on except the policy and initial age.
struct SystemModel {
    DriftModel drift;
    WorkloadModel workload;
    PrimitiveSet primitives;
    LatencyRegime regime = LatencyRegime::tight();
    RealizabilityForm form = RealizabilityForm::rational;

    void validate() const;
    bool operator==(const SystemModel&) const = default;

    [[nodiscard]] const CalibrationPrimitive& primitive(Action action) const;
    /// Wall-clock length of one iteration carrying `action`.
    [[nodiscard]] double step_duration(Action action) const;
};

/// clip(rho * q_eff(l2), 0, r_max).
[[nodiscard]] double progress_rate(const WorkloadModel& w, Freshness l2);
[[nodiscard]] double progress_rate(const WorkloadModel& w, double l2);

/// g_min + (gap - g_min)(1 - r).
[[nodiscard]] double gap_step(const WorkloadModel& w, double gap, double rate);

struct IterationOutcome {
    DeviceState state;
    double gap = 0.0;
    double duration_s = 0.0;
};

/// One algorithm iteration: optional recovery (which drifts during the
/// action), then T_base of aging, then a gap update using the freshness at
/// the end of the step.
[[nodiscard]] IterationOutcome advance_iteration(const SystemModel& model, const DeviceState& state,
                                                 double gap, Action action, ExecutionMode mode);

}  // namespace rcal
