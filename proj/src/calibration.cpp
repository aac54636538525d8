#include "rcal/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rcal {

void CalibrationPrimitive::validate() const {
    const std::string name(to_string(kind));
    if (!(t0_s > 0.0)) throw std::invalid_argument(name + " t0 must be > 0");
    if (n_rounds < 1) throw std::invalid_argument(name + " rounds must be >= 1");
    if (!(beta >= 0.0 && beta <= 1.0)) throw std::invalid_argument(name + " beta must lie in [0, 1]");
    if (!(l2_target > 0.0 && l2_target <= 1.0)) {
        throw std::invalid_argument(name + " target must lie in (0, 1]");
    }
    if (!(tau_tol_s > 0.0)) throw std::invalid_argument(name + " timing tolerance must be > 0");
}

CalibrationPrimitive CalibrationPrimitive::default_light() {
    return {PrimitiveKind::light, 1.1e-3, 1, 0.25, 0.85, 20e-3};
}

CalibrationPrimitive CalibrationPrimitive::default_heavy() {
    return {PrimitiveKind::heavy, 100e-3, 20, 0.65, 0.98, 2e-3};
}

void PrimitiveSet::validate() const {
    light.validate();
    heavy.validate();
}

void LatencyRegime::validate() const {
    if (!(tau_rtt_s >= 0.0) || !std::isfinite(tau_rtt_s)) {
        throw std::invalid_argument("round-trip time of regime '" + name + "' must be >= 0");
    }
}

std::string_view to_string(PrimitiveKind kind) {
    return kind == PrimitiveKind::light ? "light" : "heavy";
}

std::string_view to_string(RealizabilityForm form) {
    switch (form) {
        case RealizabilityForm::rational: return "rational";
        case RealizabilityForm::exponential: return "exponential";
        case RealizabilityForm::linear_cutoff: return "linear_cutoff";
    }
    return "?";
}

std::string_view to_string(ExecutionMode mode) {
    return mode == ExecutionMode::scheduled ? "scheduled" : "runtime";
}

RealizabilityForm parse_realizability_form(std::string_view name) {
    if (name == "rational") return RealizabilityForm::rational;
    if (name == "exponential") return RealizabilityForm::exponential;
    if (name == "linear_cutoff") return RealizabilityForm::linear_cutoff;
    throw std::invalid_argument("unknown realizability form '" + std::string(name) +
                                "' (expected rational, exponential or linear_cutoff)");
}

double calibration_duration(const CalibrationPrimitive& p, const LatencyRegime& regime) {
    return p.t0_s + p.n_rounds * regime.tau_rtt_s;
}

double l3(RealizabilityForm form, double tau_s, const CalibrationPrimitive& p) {
    if (!(tau_s >= 0.0)) throw std::domain_error("round-trip time must be >= 0");
    const double x = tau_s / p.tau_tol_s;
    switch (form) {
        case RealizabilityForm::rational: return 1.0 / (1.0 + x);
        case RealizabilityForm::exponential: return std::exp(-x);
        case RealizabilityForm::linear_cutoff: return std::max(kLinearCutoffFloor, 1.0 - 0.5 * x);
    }
    return 1.0;
}

double realized_recovery_factor(const CalibrationPrimitive& p, const LatencyRegime& regime,
                                ExecutionMode mode, RealizabilityForm form) {
    if (mode == ExecutionMode::scheduled) return p.beta;
    return l3(form, regime.tau_rtt_s, p) * p.beta;
}

RecoveryOutcome apply_recovery(const DeviceState& state, const CalibrationPrimitive& p,
                               const LatencyRegime& regime, ExecutionMode mode,
                               RealizabilityForm form, const DriftModel& drift) {
    const double elapsed = calibration_duration(p, regime);
    const double drifted_age = state.age_s + elapsed;
    const Freshness before = l2_of_age(drift, drifted_age);

    // Work on 1 - L2 so near-fresh states keep their precision; the headroom
    // target - L2 equals (1 - L2) - (1 - target).
    const double headroom = before.complement() - (1.0 - p.l2_target);
    if (!(headroom > 0.0)) return {DeviceState{drifted_age}, elapsed};

    const double eta = realized_recovery_factor(p, regime, mode, form);
    const Freshness after = Freshness::from_complement(before.complement() - eta * headroom);
    const double age = std::min(age_of_l2(drift, after), drifted_age);
    return {DeviceState{age}, elapsed};
}

double l4_throughput(const CalibrationPrimitive& p, const LatencyRegime& regime, double t_alg_s) {
    if (!(t_alg_s > 0.0)) throw std::domain_error("t_alg must be > 0");
    return t_alg_s / (t_alg_s + calibration_duration(p, regime));
}

}  // namespace rcal
