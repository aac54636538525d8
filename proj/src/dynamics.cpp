#include "rcal/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace rcal {

std::string_view to_string(Action action) {
    switch (action) {
        case Action::none: return "none";
        case Action::light: return "light";
        case Action::heavy: return "heavy";
    }
    return "?";
}

void WorkloadModel::validate() const {
    progress.validate();
    if (!(t_class_s >= 0.0)) throw std::invalid_argument("t_class must be >= 0");
    if (!(t_alg_s > 0.0)) throw std::invalid_argument("t_alg must be > 0");
    if (!(t_budget_s > t_base_s())) {
        throw std::invalid_argument("t_budget (" + std::to_string(t_budget_s) +
                                    " s) must exceed one iteration (" + std::to_string(t_base_s()) +
                                    " s)");
    }
    if (!(rho >= 0.0) || !std::isfinite(rho)) throw std::invalid_argument("rho must be >= 0");
    if (!(r_max > 0.0 && r_max <= 1.0)) throw std::invalid_argument("r_max must lie in (0, 1]");
    if (!(g_min > 0.0 && g_min < 1.0)) throw std::invalid_argument("g_min must lie in (0, 1)");
    if (!(g0 >= g_min) || !std::isfinite(g0)) throw std::invalid_argument("g0 must be >= g_min");
}

void SystemModel::validate() const {
    drift.validate();
    workload.validate();
    primitives.validate();
    regime.validate();
}

const CalibrationPrimitive& SystemModel::primitive(Action action) const {
    if (action == Action::light) return primitives.light;
    if (action == Action::heavy) return primitives.heavy;
    throw std::logic_error("no primitive for Action::none");
}

double SystemModel::step_duration(Action action) const {
    const double base = workload.t_base_s();
    if (action == Action::none) return base;
    return base + calibration_duration(primitive(action), regime);
}

double progress_rate(const WorkloadModel& w, Freshness l2) {
    return std::clamp(w.rho * q_eff(w.progress, l2), 0.0, w.r_max);
}

double progress_rate(const WorkloadModel& w, double l2) {
    return std::clamp(w.rho * q_eff(w.progress, l2), 0.0, w.r_max);
}

double gap_step(const WorkloadModel& w, double gap, double rate) {
    return w.g_min + (gap - w.g_min) * (1.0 - rate);
}

IterationOutcome advance_iteration(const SystemModel& model, const DeviceState& state, double gap,
                                   Action action, ExecutionMode mode) {
    const double base = model.workload.t_base_s();
    DeviceState next = state;
    double duration = base;
    if (action != Action::none) {
        const RecoveryOutcome rec = apply_recovery(state, model.primitive(action), model.regime, mode,
                                                   model.form, model.drift);
        next = rec.state;
        duration += rec.elapsed_s;
    }
    next.age_s += base;
    const double rate = progress_rate(model.workload, l2_of_age(model.drift, next.age_s));
    return {next, gap_step(model.workload, gap, rate), duration};
}

}  // namespace rcal
