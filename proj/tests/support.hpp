#pragma once

// Shared helpers for the unit tests: a seeded value generator for
// property checks and long-double reference formulas.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace rcal::test {

/// Deterministic draws for property tests.
class Gen {
  public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    /// Log-uniform on [lo, hi], lo > 0.
    double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    bool coin() { return integer(0, 1) == 1; }

  private:
    std::mt19937_64 rng_;
};

inline std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> out;
    for (int i = 0; i < n; ++i) out.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
    return out;
}

inline long double ref_l2(long double age, long double tau, long double nu) {
    return 1.0L / (1.0L + std::pow(age / tau, nu));
}

inline long double ref_age(long double l2, long double tau, long double nu) {
    return tau * std::pow(1.0L / l2 - 1.0L, 1.0L / nu);
}

inline long double ref_q(long double l2, long double alpha, long double lambda) {
    return (1.0L - alpha) * std::sqrt(l2) + alpha * std::pow(l2, lambda);
}

inline bool rel_close(double a, double b, double rel) {
    return std::abs(a - b) <= rel * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

}  // namespace rcal::test
