#include "rcal/policy.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <stdexcept>

namespace rcal {

namespace {

constexpr std::array<Action, 3> kCandidates = {Action::none, Action::light, Action::heavy};

bool fits(const SystemModel& model, const Observation& obs, Action action) {
    return model.step_duration(action) <= obs.remaining_s;
}

}  // namespace

bool Policy::is_open_loop() const {
    return kind == PolicyKind::no_cal || kind == PolicyKind::periodic_heavy || kind == PolicyKind::fixed_light;
}

ExecutionMode Policy::execution_mode() const {
    return is_open_loop() ? ExecutionMode::scheduled : ExecutionMode::runtime;
}

std::string Policy::label() const {
    switch (kind) {
        case PolicyKind::no_cal: return "no_cal";
        case PolicyKind::periodic_heavy: return "periodic_heavy_" + std::to_string(period);
        case PolicyKind::fixed_light: return "fixed_light_" + std::to_string(period);
        case PolicyKind::greedy: return "greedy";
        case PolicyKind::rollout:
            return "rollout_H" + std::to_string(horizon) + (horizon_mode == HorizonMode::common ? "_common" : "");
    }
    return "?";
}

void Policy::validate() const {
    if ((kind == PolicyKind::periodic_heavy || kind == PolicyKind::fixed_light) && period < 1) {
        throw std::invalid_argument("open-loop period must be >= 1");
    }
    if ((kind == PolicyKind::rollout || kind == PolicyKind::greedy) && horizon < 1) {
        throw std::invalid_argument("rollout horizon must be >= 1");
    }
}

Action scheduled_decision(const Policy& policy, const ScheduleState& schedule, const Observation& obs,
                          const WorkloadModel& w) {
    Action fire = Action::none;
    if (policy.kind == PolicyKind::periodic_heavy) {
        fire = Action::heavy;
    } else if (policy.kind == PolicyKind::fixed_light) {
        fire = Action::light;
    } else if (policy.kind != PolicyKind::no_cal) {
        throw std::invalid_argument("scheduled_decision called with a feedback policy");
    }
    if (fire == Action::none) return Action::none;

    const double threshold = (schedule.fires + 1) * policy.period * w.t_base_s();
    return obs.elapsed_s + kScheduleSlack_s >= threshold ? fire : Action::none;
}

Action greedy_decision(const SystemModel& model, const Observation& obs) {
    Action best = Action::none;
    double best_cost = std::numeric_limits<double>::infinity();
    const DeviceState state{obs.age_s};
    for (Action candidate : kCandidates) {
        if (!fits(model, obs, candidate)) continue;
        const IterationOutcome next = advance_iteration(model, state, obs.gap, candidate, ExecutionMode::runtime);
        const double cost = (obs.gap + next.gap) / 2.0 * next.duration_s;
        if (cost < best_cost) {
            best_cost = cost;
            best = candidate;
        }
    }
    return best;
}

double rollout_duration(const SystemModel& model, Action first, int horizon) {
    double t = 0.0;
    for (int k = 0; k < horizon; ++k) t += model.step_duration(k == 0 ? first : Action::none);
    return t;
}

double rollout_cost(const SystemModel& model, const Observation& obs, Action first, int horizon,
                    double horizon_s) {
    const double cap = std::min(obs.remaining_s, horizon_s);
    DeviceState state{obs.age_s};
    double gap = obs.gap;
    double t = 0.0;
    double area = 0.0;
    for (int k = 0; k < horizon && t < cap; ++k) {
        const IterationOutcome next =
            advance_iteration(model, state, gap, k == 0 ? first : Action::none, ExecutionMode::runtime);
        if (t + next.duration_s > cap) {
            area += gap * (cap - t);
            break;
        }
        area += (gap + next.gap) / 2.0 * next.duration_s;
        t += next.duration_s;
        state = next.state;
        gap = next.gap;
    }
    return area;
}

Action rollout_decision(const SystemModel& model, const Observation& obs, int horizon, HorizonMode mode) {
    if (horizon < 1) throw std::invalid_argument("rollout horizon must be >= 1");

    double common_s = 0.0;
    if (mode == HorizonMode::common) {
        for (Action candidate : kCandidates) {
            if (fits(model, obs, candidate)) {
                common_s = std::max(common_s, rollout_duration(model, candidate, horizon));
            }
        }
    }

    Action best = Action::none;
    double best_cost = std::numeric_limits<double>::infinity();
    for (Action candidate : kCandidates) {
        if (!fits(model, obs, candidate)) continue;
        const double cost =
            mode == HorizonMode::per_candidate
                ? rollout_cost(model, obs, candidate, horizon, std::numeric_limits<double>::infinity())
                : rollout_cost(model, obs, candidate, std::numeric_limits<int>::max(), common_s);
        if (cost < best_cost) {
            best_cost = cost;
            best = candidate;
        }
    }
    return best;
}

Action decide(const Policy& policy, const SystemModel& model, const ScheduleState& schedule,
              const Observation& obs) {
    switch (policy.kind) {
        case PolicyKind::no_cal:
        case PolicyKind::periodic_heavy:
        case PolicyKind::fixed_light: return scheduled_decision(policy, schedule, obs, model.workload);
        case PolicyKind::greedy: return greedy_decision(model, obs);
        case PolicyKind::rollout: return rollout_decision(model, obs, policy.horizon, policy.horizon_mode);
    }
    return Action::none;
}

}  // namespace rcal
