#pragma once

#include <string>

#include "rcal/dynamics.hpp"

namespace rcal {

enum class PolicyKind { no_cal, periodic_heavy, fixed_light, greedy, rollout };

/// How the rollout horizon T_H is measured across candidates.
enum class HorizonMode {
    per_candidate,  ///< each candidate integrates over its own H-step duration
    common,         ///< all candidates integrate over the longest candidate's duration
};

struct Policy {
    PolicyKind kind = PolicyKind::no_cal;
    int period = 0;   ///< open-loop cadence in nominal iterations
    int horizon = 0;  ///< rollout steps
    HorizonMode horizon_mode = HorizonMode::per_candidate;

    [[nodiscard]] static Policy no_cal() { return {}; }
    [[nodiscard]] static Policy periodic_heavy(int k) { return {PolicyKind::periodic_heavy, k, 0}; }
    [[nodiscard]] static Policy fixed_light(int k) { return {PolicyKind::fixed_light, k, 0}; }
    [[nodiscard]] static Policy greedy() { return {PolicyKind::greedy, 0, 1}; }
    [[nodiscard]] static Policy rollout(int h, HorizonMode mode = HorizonMode::per_candidate) {
        return {PolicyKind::rollout, 0, h, mode};
    }

    [[nodiscard]] bool is_open_loop() const;
    /// Scheduled maintenance for open-loop kinds, runtime feedback otherwise.
    [[nodiscard]] ExecutionMode execution_mode() const;
    /// Short stable label, e.g. "periodic_heavy_6" or "rollout_H6".
    [[nodiscard]] std::string label() const;

    void validate() const;
    bool operator==(const Policy&) const = default;
};

/// What a controller sees at a decision point.
struct Observation {
    double age_s = 0.0;
    double gap = 1.0;
    double remaining_s = 0.0;
    double elapsed_s = 0.0;
};

/// Open-loop bookkeeping: how many scheduled actions have fired so far.
struct ScheduleState {
    int fires = 0;
};

/// Slack absorbing accumulated rounding in the wall clock when comparing
/// against a schedule threshold.
inline constexpr double kScheduleSlack_s = 1e-9;

/// Open-loop rule: fire the policy's primitive once elapsed wall-clock time
/// reaches (fires + 1) * period * T_base. Reads only elapsed time and the fire
/// count, never age or gap.
[[nodiscard]] Action scheduled_decision(const Policy& policy, const ScheduleState& schedule,
                                        const Observation& obs, const WorkloadModel& w);

/// Explicit one-step cost comparison: the trapezoid area of the next step
/// for every feasible candidate, cheapest action on ties.
[[nodiscard]] Action greedy_decision(const SystemModel& model, const Observation& obs);

/// Predicted finite-horizon gap integral of the sequence [first, none, ...]
/// (horizon steps) from obs, using runtime recovery, truncated at
/// min(remaining, horizon_s). A step crossing the cap holds its gap.
[[nodiscard]] double rollout_cost(const SystemModel& model, const Observation& obs, Action first,
                                  int horizon, double horizon_s);

/// Physical duration of the candidate sequence [first, none x (horizon-1)].
[[nodiscard]] double rollout_duration(const SystemModel& model, Action first, int horizon);

/// Receding-horizon rollout with a no-calibration continuation. Candidates
/// whose first step does not fit are skipped; ties favor none < light < heavy.
[[nodiscard]] Action rollout_decision(const SystemModel& model, const Observation& obs, int horizon,
                                      HorizonMode mode = HorizonMode::per_candidate);

/// Dispatch on policy kind. Feedback kinds require obs.remaining_s > 0.
[[nodiscard]] Action decide(const Policy& policy, const SystemModel& model, const ScheduleState& schedule,
                            const Observation& obs);

}  // namespace rcal
