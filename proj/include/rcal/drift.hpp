#pragma once

// Equivalent-age drift model: freshness as a Hill-type function of age,
// its exact inverse, and the workload's effective progress factor.

namespace rcal {

inline constexpr double kHour = 3600.0;

struct DriftModel {
    double tau_drift_s = 6.0 * kHour;
    double nu = 2.0;

    void validate() const;
    bool operator==(const DriftModel&) const = default;
};

struct ProgressModel {
    double alpha = 0.7;
    double lambda = 2.0;

    void validate() const;
    bool operator==(const ProgressModel&) const = default;
};

/// Calibration freshness in (0, 1].
///
/// Stored as the staleness odds s = (age / tau_drift)^nu, so that
/// freshness = 1 / (1 + s). Near-fresh devices have freshness within one ulp
/// of 1, where a plain double would lose the age entirely; the odds keep
/// full relative precision and make the age round trip exact.
class Freshness {
  public:
    /// Fully calibrated (odds 0).
    constexpr Freshness() = default;

    /// Throws std::domain_error unless 0 < value <= 1.
    static Freshness from_value(double value);
    /// From the complement 1 - value; throws unless 0 <= complement < 1.
    static Freshness from_complement(double complement);
    /// Throws std::domain_error on negative or non-finite odds.
    static Freshness from_odds(double odds);

    [[nodiscard]] double value() const { return 1.0 / (1.0 + odds_); }
    [[nodiscard]] double complement() const { return odds_ / (1.0 + odds_); }
    [[nodiscard]] double odds() const { return odds_; }

    bool operator==(const Freshness&) const = default;

  private:
    explicit constexpr Freshness(double odds) : odds_(odds) {}
    double odds_ = 0.0;
};

/// Equivalent calibration age. The only state the controller resets.
struct DeviceState {
    double age_s = 0.0;

    bool operator==(const DeviceState&) const = default;
};

/// 1 / (1 + (age / tau_drift)^nu). Throws std::domain_error for age < 0.
[[nodiscard]] Freshness l2_of_age(const DriftModel& model, double age_s);

/// tau_drift * (1/l2 - 1)^(1/nu), the exact inverse of l2_of_age.
[[nodiscard]] double age_of_l2(const DriftModel& model, Freshness l2);
/// Throws std::domain_error unless 0 < l2 <= 1.
[[nodiscard]] double age_of_l2(const DriftModel& model, double l2);

/// (1 - alpha) sqrt(l2) + alpha l2^lambda.
[[nodiscard]] double q_eff(const ProgressModel& model, Freshness l2);
/// Throws std::domain_error unless 0 < l2 <= 1.
[[nodiscard]] double q_eff(const ProgressModel& model, double l2);

}  // namespace rcal
