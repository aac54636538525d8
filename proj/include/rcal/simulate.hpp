#pragma once

#include <iosfwd>
#include <span>
#include <stdexcept>
#include <vector>

#include "rcal/dynamics.hpp"
#include "rcal/policy.hpp"

namespace rcal {

/// A fully specified run, minus the policy.
struct Scenario {
    SystemModel model;
    double a0_s = 0.0;

    void validate() const;
    bool operator==(const Scenario&) const = default;
};

/// Wall-clock accounting. elapsed + remaining == budget by construction.
class SimClock {
  public:
    explicit SimClock(double budget_s) : budget_s_(budget_s) {}

    [[nodiscard]] double elapsed_s() const { return elapsed_s_; }
    [[nodiscard]] double remaining_s() const { return budget_s_ - elapsed_s_; }
    [[nodiscard]] double budget_s() const { return budget_s_; }
    [[nodiscard]] bool fits(double duration_s) const { return duration_s <= remaining_s(); }
    void advance(double duration_s) { elapsed_s_ += duration_s; }

  private:
    double budget_s_;
    double elapsed_s_ = 0.0;
};

/// State at the end of a trace segment. The first record is the initial
/// state (t = 0, step_s = 0); each later record closes a segment of length
/// step_s. A trailing record with action none covers the unusable residual.
struct TraceRecord {
    double t_s = 0.0;
    double age_s = 0.0;
    double l2 = 1.0;
    double gap = 1.0;
    Action action = Action::none;
    double step_s = 0.0;

    bool operator==(const TraceRecord&) const = default;
};

struct SimulationResult {
    Scenario scenario;
    Policy policy;
    std::vector<TraceRecord> trace;
    double gap_area = 0.0;
    double mean_gap = 0.0;
    double final_gap = 0.0;
    double residual_s = 0.0;
    int action_count = 0;
    int heavy_count = 0;
};

class ConfigurationError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

class AccountingError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Simulate one policy over the wall-clock budget. Throws ConfigurationError
/// if the scenario or policy is invalid (including a budget shorter than one
/// iteration).
[[nodiscard]] SimulationResult run(const Scenario& scenario, const Policy& policy);

/// Trapezoidal gap integral of a trace divided by t_budget. Throws
/// AccountingError if the segment lengths do not sum to t_budget (1e-9 s).
[[nodiscard]] double mean_gap_of_trace(std::span<const TraceRecord> trace, double t_budget_s);

/// Sum over k of q_eff(with[k]) - q_eff(without[k]), k = 0..horizon.
/// Diagnostic only. Throws std::domain_error unless both have horizon+1 entries.
[[nodiscard]] double trajectory_value(std::span<const Freshness> with_action,
                                      std::span<const Freshness> without_action, const ProgressModel& progress,
                                      int horizon);

/// Freshness along [first, none x horizon]: entry 0 right after the first
/// action's recovery, entry k at the end of the k-th iteration.
[[nodiscard]] std::vector<Freshness> freshness_trajectory(const SystemModel& model, const DeviceState& state,
                                                          Action first, ExecutionMode mode, int horizon);

/// CSV with header t_s,age_s,l2,gap,action,step_s; 12 significant digits.
void write_trace_csv(std::ostream& out, std::span<const TraceRecord> trace);

}  // namespace rcal
