#include "rcal/drift.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rcal {

void DriftModel::validate() const {
    if (!(tau_drift_s > 0.0) || !std::isfinite(tau_drift_s)) {
        throw std::invalid_argument("tau_drift must be positive and finite, got " +
                                    std::to_string(tau_drift_s));
    }
    if (!(nu > 0.0) || !std::isfinite(nu)) {
        throw std::invalid_argument("nu must be positive, got " + std::to_string(nu));
    }
}

void ProgressModel::validate() const {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw std::invalid_argument("alpha must lie in [0, 1], got " + std::to_string(alpha));
    }
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw std::invalid_argument("lambda must be positive, got " + std::to_string(lambda));
    }
}

Freshness Freshness::from_value(double value) {
    if (!(value > 0.0 && value <= 1.0)) {
        throw std::domain_error("freshness must lie in (0, 1], got " + std::to_string(value));
    }
    return Freshness(1.0 / value - 1.0);
}

Freshness Freshness::from_complement(double complement) {
    if (!(complement >= 0.0 && complement < 1.0)) {
        throw std::domain_error("freshness complement must lie in [0, 1), got " +
                                std::to_string(complement));
    }
    return Freshness(complement / (1.0 - complement));
}

Freshness Freshness::from_odds(double odds) {
    if (!(odds >= 0.0) || !std::isfinite(odds)) {
        throw std::domain_error("staleness odds must be finite and >= 0, got " +
                                std::to_string(odds));
    }
    return Freshness(odds);
}

Freshness l2_of_age(const DriftModel& model, double age_s) {
    if (!(age_s >= 0.0)) {
        throw std::domain_error("age must be >= 0, got " + std::to_string(age_s));
    }
    return Freshness::from_odds(std::pow(age_s / model.tau_drift_s, model.nu));
}

double age_of_l2(const DriftModel& model, Freshness l2) {
    return model.tau_drift_s * std::pow(l2.odds(), 1.0 / model.nu);
}

double age_of_l2(const DriftModel& model, double l2) {
    return age_of_l2(model, Freshness::from_value(l2));
}

namespace {

double q_eff_of_value(const ProgressModel& model, double v) {
    return (1.0 - model.alpha) * std::sqrt(v) + model.alpha * std::pow(v, model.lambda);
}

}  // namespace

double q_eff(const ProgressModel& model, Freshness l2) { return q_eff_of_value(model, l2.value()); }

double q_eff(const ProgressModel& model, double l2) {
    if (!(l2 > 0.0 && l2 <= 1.0)) throw std::domain_error("freshness must lie in (0, 1], got " + std::to_string(l2));
    return q_eff_of_value(model, l2);
}

}  // namespace rcal
