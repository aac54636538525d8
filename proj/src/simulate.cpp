#include "rcal/simulate.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include "rcal/csv.hpp"

namespace rcal {

void Scenario::validate() const {
    model.validate();
    if (!(a0_s >= 0.0) || !std::isfinite(a0_s)) throw std::invalid_argument("initial age must be >= 0");
}

SimulationResult run(const Scenario& scenario, const Policy& policy) {
    try {
        scenario.validate();
        policy.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigurationError(e.what());
    }

    const SystemModel& model = scenario.model;
    const DriftModel& drift = model.drift;
    const ExecutionMode mode = policy.execution_mode();
    const double t_base = model.workload.t_base_s();

    SimulationResult result{scenario, policy, {}, 0.0, 0.0, 0.0, 0.0, 0, 0};
    result.trace.reserve(static_cast<std::size_t>(model.workload.t_budget_s / t_base) + 2);

    SimClock clock(model.workload.t_budget_s);
    DeviceState state{scenario.a0_s};
    double gap = model.workload.g0;
    double area = 0.0;
    ScheduleState schedule;

    result.trace.push_back({0.0, state.age_s, l2_of_age(drift, state.age_s).value(), gap, Action::none, 0.0});

    while (clock.fits(t_base)) {
        const Observation obs{state.age_s, gap, clock.remaining_s(), clock.elapsed_s()};
        Action action = decide(policy, model, schedule, obs);
        if (action != Action::none && !clock.fits(model.step_duration(action))) action = Action::none;
        if (action != Action::none && policy.is_open_loop()) ++schedule.fires;

        const IterationOutcome next = advance_iteration(model, state, gap, action, mode);
        area += (gap + next.gap) / 2.0 * next.duration_s;
        clock.advance(next.duration_s);
        state = next.state;
        gap = next.gap;
        if (action != Action::none) ++result.action_count;
        if (action == Action::heavy) ++result.heavy_count;

        result.trace.push_back(
            {clock.elapsed_s(), state.age_s, l2_of_age(drift, state.age_s).value(), gap, action, next.duration_s});
    }

    // Not even a no-calibration iteration fits: hold the gap over the rest.
    const double residual = clock.remaining_s();
    if (residual > 0.0) {
        state.age_s += residual;
        area += (gap + gap) / 2.0 * residual;
        result.trace.push_back({clock.budget_s(), state.age_s, l2_of_age(drift, state.age_s).value(), gap,
                                Action::none, residual});
    }

    result.gap_area = area;
    result.mean_gap = area / clock.budget_s();
    result.final_gap = gap;
    result.residual_s = residual;
    return result;
}

double mean_gap_of_trace(std::span<const TraceRecord> trace, double t_budget_s) {
    if (trace.empty()) throw AccountingError("empty trace");
    if (!(t_budget_s > 0.0)) throw AccountingError("budget must be > 0");

    double area = 0.0;
    double total = trace.front().step_s;
    for (std::size_t i = 1; i < trace.size(); ++i) {
        area += (trace[i - 1].gap + trace[i].gap) / 2.0 * trace[i].step_s;
        total += trace[i].step_s;
    }
    if (std::abs(total - t_budget_s) > 1e-9) {
        throw AccountingError("trace covers " + std::to_string(total) + " s but budget is " +
                              std::to_string(t_budget_s) + " s");
    }
    return area / t_budget_s;
}

double trajectory_value(std::span<const Freshness> with_action, std::span<const Freshness> without_action,
                        const ProgressModel& progress, int horizon) {
    const auto expected = static_cast<std::size_t>(horizon) + 1;
    if (horizon < 0 || with_action.size() != expected || without_action.size() != expected) {
        throw std::domain_error("trajectory_value needs horizon+1 entries in both sequences");
    }
    double total = 0.0;
    for (std::size_t k = 0; k < expected; ++k) {
        total += q_eff(progress, with_action[k]) - q_eff(progress, without_action[k]);
    }
    return total;
}

std::vector<Freshness> freshness_trajectory(const SystemModel& model, const DeviceState& state, Action first,
                                            ExecutionMode mode, int horizon) {
    std::vector<Freshness> out;
    out.reserve(static_cast<std::size_t>(horizon) + 1);
    DeviceState s = state;
    if (first != Action::none) {
        s = apply_recovery(s, model.primitive(first), model.regime, mode, model.form, model.drift).state;
    }
    out.push_back(l2_of_age(model.drift, s.age_s));
    for (int k = 0; k < horizon; ++k) {
        s.age_s += model.workload.t_base_s();
        out.push_back(l2_of_age(model.drift, s.age_s));
    }
    return out;
}

void write_trace_csv(std::ostream& out, std::span<const TraceRecord> trace) {
    out << "t_s,age_s,l2,gap,action,step_s\n";
    for (const TraceRecord& r : trace) {
        out << format_number(r.t_s) << ',' << format_number(r.age_s) << ',' << format_number(r.l2) << ','
            << format_number(r.gap) << ',' << to_string(r.action) << ',' << format_number(r.step_s) << '\n';
    }
}

}  // namespace rcal
