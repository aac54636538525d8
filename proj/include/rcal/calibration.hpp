#pragma once

#include <string>
#include <string_view>

#include "rcal/drift.hpp"

namespace rcal {

enum class PrimitiveKind { light, heavy };

/// A recovery action: base time, feedback rounds, intrinsic strength,
/// target freshness and timing tolerance.
struct CalibrationPrimitive {
    PrimitiveKind kind = PrimitiveKind::light;
    double t0_s = 0.0;
    int n_rounds = 1;
    double beta = 0.0;
    double l2_target = 1.0;
    double tau_tol_s = 1.0;

    void validate() const;
    bool operator==(const CalibrationPrimitive&) const = default;

    [[nodiscard]] static CalibrationPrimitive default_light();
    [[nodiscard]] static CalibrationPrimitive default_heavy();
};

struct PrimitiveSet {
    CalibrationPrimitive light = CalibrationPrimitive::default_light();
    CalibrationPrimitive heavy = CalibrationPrimitive::default_heavy();

    void validate() const;
    bool operator==(const PrimitiveSet&) const = default;
};

struct LatencyRegime {
    std::string name;
    double tau_rtt_s = 0.0;

    void validate() const;
    bool operator==(const LatencyRegime&) const = default;

    [[nodiscard]] static LatencyRegime cloud() { return {"cloud", 25e-3}; }
    [[nodiscard]] static LatencyRegime local() { return {"local", 1e-3}; }
    [[nodiscard]] static LatencyRegime tight() { return {"tight", 4e-6}; }
};

enum class RealizabilityForm { rational, exponential, linear_cutoff };

/// Scheduled maintenance realizes the intrinsic strength; runtime feedback
/// is scaled by the realizability factor.
enum class ExecutionMode { scheduled, runtime };

[[nodiscard]] std::string_view to_string(PrimitiveKind kind);
[[nodiscard]] std::string_view to_string(RealizabilityForm form);
[[nodiscard]] std::string_view to_string(ExecutionMode mode);
/// Throws std::invalid_argument on unknown names.
[[nodiscard]] RealizabilityForm parse_realizability_form(std::string_view name);

/// Lower bound for the linear-cutoff form so the factor stays in (0, 1].
inline constexpr double kLinearCutoffFloor = 1e-6;

/// T0 + N * tau_rtt.
[[nodiscard]] double calibration_duration(const CalibrationPrimitive& p, const LatencyRegime& regime);

/// Realizability factor L3(tau, p). All forms equal 1 at tau = 0 and are
/// non-increasing; rational and linear-cutoff both give 0.5 at tau = tau_p.
[[nodiscard]] double l3(RealizabilityForm form, double tau_s, const CalibrationPrimitive& p);

[[nodiscard]] double realized_recovery_factor(const CalibrationPrimitive& p, const LatencyRegime& regime,
                                              ExecutionMode mode, RealizabilityForm form);

struct RecoveryOutcome {
    DeviceState state;
    double elapsed_s = 0.0;
};

/// Time-consistent recovery: the device first ages by the calibration
/// duration, then recovers a fraction eta of the remaining distance to the
/// primitive's target, and the result is mapped back to an equivalent age.
/// The returned age never exceeds age + elapsed.
[[nodiscard]] RecoveryOutcome apply_recovery(const DeviceState& state, const CalibrationPrimitive& p,
                                             const LatencyRegime& regime, ExecutionMode mode,
                                             RealizabilityForm form, const DriftModel& drift);

/// Per-iteration throughput t_alg / (t_alg + T_cal). Diagnostic only.
[[nodiscard]] double l4_throughput(const CalibrationPrimitive& p, const LatencyRegime& regime, double t_alg_s);

}  // namespace rcal
