#include <doctest.h>

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <string>

#include "rcal/experiments.hpp"
#include "support.hpp"

using namespace rcal;

namespace {

const LatencyRegime kRegimes[] = {LatencyRegime::cloud(), LatencyRegime::local(), LatencyRegime::tight()};

Scenario representative(const LatencyRegime& regime) {
    Scenario s;
    s.model.regime = regime;
    s.a0_s = 12.0 * kHour;
    return s;
}

SimulationResult with_mean(const Scenario& s, double mean_gap) {
    SimulationResult r;
    r.scenario = s;
    r.mean_gap = mean_gap;
    return r;
}

Grid small_grid() { return {linspace(0.2, 1.0, 3), linspace(4.0 * kHour, 20.0 * kHour, 3)}; }

}  // namespace

TEST_CASE("delta_open arithmetic") {
    const Scenario s = representative(LatencyRegime::tight());
    const SimulationResult refs[] = {with_mean(s, 0.4), with_mean(s, 0.35), with_mean(s, 0.5)};
    CHECK(delta_open(with_mean(s, 0.30), refs) == doctest::Approx(0.05).epsilon(1e-14));
    CHECK(delta_open(with_mean(s, 0.35), refs) == 0.0);

    const SimulationResult none[] = {with_mean(s, 0.4)};
    CHECK_THROWS_AS((void)delta_open(with_mean(s, 0.3), std::span<const SimulationResult>{}), ComparisonError);
    Scenario other = s;
    other.a0_s = 0.0;
    const SimulationResult mixed[] = {with_mean(s, 0.4), with_mean(other, 0.3)};
    CHECK_THROWS_AS((void)delta_open(with_mean(s, 0.3), mixed), ComparisonError);
    CHECK_NOTHROW((void)delta_open(with_mean(s, 0.3), none));
}

TEST_CASE("delta_open from real runs matches best_reference_mean_gap") {
    const Scenario s = representative(LatencyRegime::cloud());
    const std::vector<Policy> family = reference_family();
    std::vector<SimulationResult> refs;
    for (const Policy& p : family) refs.push_back(run(s, p));
    const SimulationResult rt = run(s, Policy::rollout(6));
    CHECK(delta_open(rt, refs) == best_reference_mean_gap(s, family) - rt.mean_gap);
    CHECK(delta_open(rt, refs) < 0.0);
}

TEST_CASE("reference family") {
    const std::vector<Policy> family = reference_family();
    REQUIRE(family.size() == 7);
    CHECK(family[0] == Policy::no_cal());
    for (int k : {3, 6, 12}) {
        CHECK(std::count(family.begin(), family.end(), Policy::periodic_heavy(k)) == 1);
        CHECK(std::count(family.begin(), family.end(), Policy::fixed_light(k)) == 1);
    }
}

TEST_CASE("gain is bounded by the no-cal improvement and shrinks with more references") {
    const Grid grid = small_grid();
    const std::vector<Policy> family = reference_family();
    for (const LatencyRegime& r : kRegimes) {
        Scenario base;
        base.model.regime = r;
        const GainMap full = gain_map(base, Policy::rollout(6), grid, family);
        for (std::size_t drop = 0; drop < family.size(); ++drop) {
            std::vector<Policy> subset = family;
            subset.erase(subset.begin() + static_cast<std::ptrdiff_t>(drop));
            const GainMap partial = gain_map(base, Policy::rollout(6), grid, subset);
            for (std::size_t c = 0; c < grid.cells(); ++c) CHECK(partial.values[c] >= full.values[c]);
        }
        for (std::size_t i = 0; i < grid.alpha.size(); ++i) {
            for (std::size_t j = 0; j < grid.a0_s.size(); ++j) {
                const Scenario s = at_cell(base, grid.alpha[i], grid.a0_s[j]);
                const double bound = run(s, Policy::no_cal()).mean_gap - run(s, Policy::rollout(6)).mean_gap;
                CHECK(full.at(i, j) <= bound);
            }
        }
    }
}

TEST_CASE("1x1 grids agree with direct calls") {
    const Grid one{{0.7}, {12.0 * kHour}};
    const Scenario s = representative(LatencyRegime::local());
    const GainMap m = gain_map(s, Policy::rollout(6), one, reference_family());
    REQUIRE(m.values.size() == 1);
    CHECK(m.values[0] == best_reference_mean_gap(s, reference_family()) - run(s, Policy::rollout(6)).mean_gap);

    const Policy only[] = {Policy::no_cal()};
    const auto results = evaluate_policy_grid(s, only, one);
    REQUIRE(results.size() == 1);
    REQUIRE(results[0].size() == 1);
    CHECK(results[0][0].trace == run(s, Policy::no_cal()).trace);
}

TEST_CASE("parallel evaluation is deterministic and worker-independent") {
    const Grid grid = small_grid();
    Scenario base;
    base.model.regime = LatencyRegime::tight();
    const Policy controllers[] = {Policy::greedy(), Policy::rollout(6)};
    const auto serial = gain_maps(base, kRegimes, controllers, grid, reference_family(), 1);
    const auto parallel = gain_maps(base, kRegimes, controllers, grid, reference_family(), 4);
    const auto again = gain_maps(base, kRegimes, controllers, grid, reference_family(), 4);
    REQUIRE(serial.size() == 6);
    for (std::size_t m = 0; m < serial.size(); ++m) {
        CHECK(serial[m].values == parallel[m].values);
        CHECK(again[m].values == parallel[m].values);
        CHECK(serial[m].regime == kRegimes[m / 2].name);
    }
    std::ostringstream a;
    std::ostringstream b;
    write_gainmap_csv(a, serial);
    write_gainmap_csv(b, again);
    CHECK(a.str() == b.str());

    const Policy policies[] = {Policy::no_cal(), Policy::rollout(3)};
    const auto g1 = evaluate_policy_grid(base, policies, grid, 1);
    const auto g2 = evaluate_policy_grid(base, policies, grid, 3);
    for (std::size_t p = 0; p < 2; ++p) {
        for (std::size_t c = 0; c < grid.cells(); ++c) CHECK(g1[p][c].trace == g2[p][c].trace);
    }
}

TEST_CASE("cell errors carry coordinates") {
    Scenario base;
    base.model.workload.t_budget_s = 0.5;
    const Grid one{{0.5}, {3600.0}};
    try {
        (void)gain_map(base, Policy::rollout(6), one, reference_family());
        FAIL("expected an error");
    } catch (const std::runtime_error& e) {
        const std::string msg = e.what();
        CHECK(msg.find("alpha=0.5") != std::string::npos);
        CHECK(msg.find("a0_s=3600") != std::string::npos);
    }
    CHECK_THROWS_AS((void)gain_map(Scenario{}, Policy::rollout(6), Grid{{0.5, 0.2}, {0.0}}, reference_family()),
                    std::invalid_argument);
}

TEST_CASE("heavy fraction and diagnostics consistency") {
    CHECK(heavy_fraction(0, 0) == 0.0);
    CHECK(heavy_fraction(3, 4) == 0.75);

    const Grid grid = small_grid();
    Scenario base;
    const auto diags = action_diagnostics(base, Policy::rollout(6), grid, kRegimes, 2);
    REQUIRE(diags.size() == 3);
    for (std::size_t r = 0; r < 3; ++r) {
        for (std::size_t i = 0; i < grid.alpha.size(); ++i) {
            for (std::size_t j = 0; j < grid.a0_s.size(); ++j) {
                const std::size_t k = grid.index(i, j);
                const SimulationResult res =
                    run(at_cell(with_regime(base, kRegimes[r]), grid.alpha[i], grid.a0_s[j]), Policy::rollout(6));
                int heavy = 0;
                for (const TraceRecord& rec : res.trace) heavy += rec.action == Action::heavy;
                CHECK(diags[r].heavy_counts[k] == heavy);
                CHECK(diags[r].total_actions[k] == res.action_count);
                CHECK(diags[r].heavy_fraction[k] * diags[r].total_actions[k] ==
                      doctest::Approx(diags[r].heavy_counts[k]).epsilon(1e-12));
            }
        }
    }

    const Grid fresh{{0.5}, {0.0}};
    const auto none = action_diagnostics(base, Policy::no_cal(), fresh, kRegimes);
    CHECK(none[0].total_actions[0] == 0);
    CHECK(none[0].heavy_fraction[0] == 0.0);
}

TEST_CASE("slices") {
    Scenario base;
    const Grid grid = default_grid();
    const auto curves = regime_slices(base, Policy::rollout(6), 0.7, 12.0 * kHour, grid, kRegimes, reference_family());
    REQUIRE(curves.size() == 6);
    for (const SliceCurve& c : curves) {
        if (c.axis == "a0") CHECK(std::abs(c.delta_open.front()) <= 0.01);
    }
    const SliceCurve& cloud_alpha = curves[0];
    REQUIRE(cloud_alpha.axis == "alpha");
    for (std::size_t i = 1; i < grid.alpha.size(); ++i) {
        if (grid.alpha[i - 1] >= 0.3 - 1e-12) CHECK(cloud_alpha.delta_open[i] <= cloud_alpha.delta_open[i - 1]);
    }
    const Scenario tight = representative(LatencyRegime::tight());
    const double at_07 = best_reference_mean_gap(tight, reference_family()) - run(tight, Policy::rollout(6)).mean_gap;
    const Scenario low = at_cell(tight, 0.1, 12.0 * kHour);
    const double at_01 = best_reference_mean_gap(low, reference_family()) - run(low, Policy::rollout(6)).mean_gap;
    CHECK(at_07 > at_01);
    CHECK_THROWS_AS((void)regime_slices(base, Policy::rollout(6), 0.7, 30.0 * kHour, grid, kRegimes,
                                        reference_family()),
                    std::invalid_argument);
}

TEST_CASE("classical scans") {
    Scenario base = representative(LatencyRegime::tight());
    const double near_budget[] = {598.0, 599.9};
    const ScanResult degenerate = classical_scan(base, Policy::rollout(6), ScanKind::fixed_wall_clock, near_budget,
                                                 kRegimes, reference_family());
    // a single step moves the gap by at most rho (q_eff <= 1); the trapezoid
    // halves that over the window
    const double bound = base.model.workload.rho / 2.0;
    for (const auto& row : degenerate.gains) {
        for (double g : row) CHECK(std::abs(g) <= bound);
    }

    const std::vector<double> grid = logspace(10e-3, 60.0, 13);
    const LatencyRegime cloud[] = {LatencyRegime::cloud()};
    const ScanResult fixed_iter =
        classical_scan(base, Policy::rollout(6), ScanKind::fixed_iteration, grid, cloud, reference_family());
    for (double g : fixed_iter.gains[0]) CHECK(g <= 0.0);
    CHECK(std::is_sorted(fixed_iter.t_class_grid.begin(), fixed_iter.t_class_grid.end()));

    const double bad[] = {1.0, 0.5};
    CHECK_THROWS_AS((void)classical_scan(base, Policy::rollout(6), ScanKind::fixed_iteration, bad, cloud,
                                         reference_family()),
                    std::invalid_argument);
}

TEST_CASE("robustness identity variant reproduces the baseline") {
    Scenario base = representative(LatencyRegime::tight());
    const auto variants = default_robustness_variants();
    const auto rows = robustness_scan(base, Policy::rollout(6), kRegimes, variants, reference_family(), 2);
    REQUIRE(rows.size() == variants.size());
    CHECK(rows[0].variant == "baseline");
    for (std::size_t r = 0; r < 3; ++r) {
        const Scenario s = with_regime(base, kRegimes[r]);
        CHECK(rows[0].deltas[r] == best_reference_mean_gap(s, reference_family()) - run(s, Policy::rollout(6)).mean_gap);
    }
    for (const RobustnessRow& row : rows) {
        if (row.param == "2" && row.variant == "lambda") CHECK(row.deltas == rows[0].deltas);
        if (row.param == "1" && row.variant == "tau_drift_scale") CHECK(row.deltas == rows[0].deltas);
        if (row.param == "rational") CHECK(row.deltas == rows[0].deltas);
    }
    std::ostringstream csv;
    write_robustness_csv(csv, rows);
    CHECK(csv.str().rfind("variant,param,ordering_holds\nbaseline,-,", 0) == 0);
}

TEST_CASE("grids") {
    CHECK(linspace(0.0, 1.0, 9)[4] == 0.5);
    CHECK(linspace(0.0, 1.0, 9).back() == 1.0);
    const auto lg = logspace(10e-3, 60.0, 13);
    CHECK(lg.front() == 10e-3);
    CHECK(lg.back() == 60.0);
    CHECK(lg[6] == doctest::Approx(std::sqrt(10e-3 * 60.0)).epsilon(1e-13));
    const Grid g = default_grid();
    CHECK(g.cells() == 81);
    CHECK(g.a0_s.back() == 24.0 * kHour);
    CHECK(g.index(2, 3) == 21);
}
