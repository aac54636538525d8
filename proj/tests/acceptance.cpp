// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "rcal/csv.hpp"
#include "rcal/experiments.hpp"

using namespace rcal;

namespace {

using Clock = std::chrono::steady_clock;

struct Verdict {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void report(const char* id, const char* title, double limit_s, const std::function<Verdict()>& check) {
    const auto start = Clock::now();
    Verdict v;
    try {
        v = check();
    } catch (const std::exception& e) {
        v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    if (secs > limit_s) {
        v.pass = false;
        v.detail += "; over time limit";
    }
    if (!v.pass) ++failures;
    std::printf("%s %s: %s [%s; %.2f s of %.0f s]\n", v.pass ? "PASS" : "FAIL", id, title, v.detail.c_str(), secs,
                limit_s);
    std::fflush(stdout);
}

const std::vector<LatencyRegime> kRegimes = {LatencyRegime::cloud(), LatencyRegime::local(), LatencyRegime::tight()};

Scenario representative(const LatencyRegime& regime) {
    Scenario s;
    s.model.regime = regime;
    s.model.workload.progress.alpha = 0.7;
    s.a0_s = 12.0 * kHour;
    return s;
}

double gain(const Scenario& s, const Policy& controller) {
    return best_reference_mean_gap(s, reference_family()) - run(s, controller).mean_gap;
}

std::vector<double> regime_gains(Scenario base, const Policy& controller) {
    std::vector<double> out;
    for (const LatencyRegime& r : kRegimes) out.push_back(gain(with_regime(base, r), controller));
    return out;
}

std::string join(const std::vector<double>& xs) {
    std::string s;
    for (double x : xs) s += (s.empty() ? "" : " ") + format_number(x);
    return s;
}

bool ordered(const std::vector<double>& d) { return d[0] < 0.0 && 0.0 < d[2] && d[0] <= d[1] && d[1] <= d[2]; }

/// Greedy and H = 1 runs over the 5x5 grid in every regime, shared by P2 and P3.
struct PairRuns {
    std::vector<SimulationResult> greedy;
    std::vector<SimulationResult> rollout;
};

const PairRuns& pair_runs() {
    static const PairRuns runs = [] {
        PairRuns p;
        for (const LatencyRegime& r : kRegimes) {
            for (double alpha : linspace(0.0, 1.0, 5)) {
                for (double a0 : linspace(0.0, 24.0 * kHour, 5)) {
                    const Scenario s = at_cell(with_regime(Scenario{}, r), alpha, a0);
                    p.greedy.push_back(run(s, Policy::greedy()));
                    p.rollout.push_back(run(s, Policy::rollout(1)));
                }
            }
        }
        return p;
    }();
    return runs;
}

Verdict p1() {
    double worst = 0.0;
    for (double nu : {1.0, 2.0, 4.0}) {
        const DriftModel m{6.0 * kHour, nu};
        for (double a : logspace(1.0, 60.0 * kHour, 100)) {
            const double err = std::abs(age_of_l2(m, l2_of_age(m, a)) - a) / std::max(1.0, a);
            worst = std::max(worst, err);
        }
    }
    return {worst <= 1e-9, "max scaled error " + format_number(worst) + " <= 1e-9, 300 ages"};
}

Verdict p2() {
    const PairRuns& p = pair_runs();
    int identical = 0;
    for (std::size_t i = 0; i < p.greedy.size(); ++i) identical += p.greedy[i].trace == p.rollout[i].trace;
    return {identical == static_cast<int>(p.greedy.size()) && identical == 75,
            std::to_string(identical) + "/" + std::to_string(p.greedy.size()) + " traces bit-identical"};
}

Verdict p3() {
    const PairRuns& p = pair_runs();
    double worst = 0.0;
    std::size_t n = 0;
    for (const auto* set : {&p.greedy, &p.rollout}) {
        for (const SimulationResult& r : *set) {
            double total = 0.0;
            for (const TraceRecord& rec : r.trace) total += rec.step_s;
            worst = std::max(worst, std::abs(total - r.scenario.model.workload.t_budget_s));
            ++n;
        }
    }
    return {worst <= 1e-9, "max |sum - budget| " + format_number(worst) + " s over " + std::to_string(n) + " runs"};
}

Verdict p4() {
    double worst = 0.0;
    for (double rho : {0.01, 0.05, 0.2}) {
        Scenario s;
        s.model.drift.tau_drift_s = 1e12;
        s.model.workload.rho = rho;
        const WorkloadModel& w = s.model.workload;
        const SimulationResult res = run(s, Policy::no_cal());

        const long double r = std::min(rho, w.r_max);
        const long double q = 1.0L - r;
        const long n = static_cast<long>(std::floor(w.t_budget_s / w.t_base_s()));
        const long double head = w.g0 - w.g_min;
        const long double per_step = n * w.g_min + head * (1.0L + q) / 2.0L * (1.0L - std::pow(q, n)) / r;
        const long double g_n = w.g_min + head * std::pow(q, n);
        const long double closed =
            (per_step * w.t_base_s() + g_n * (w.t_budget_s - n * static_cast<long double>(w.t_base_s()))) /
            w.t_budget_s;
        worst = std::max(worst, static_cast<double>(std::abs(res.mean_gap - closed) / closed));
    }
    return {worst <= 1e-9, "max relative error " + format_number(worst) + " <= 1e-9 for rho 0.01 0.05 0.2"};
}

Verdict p5() {
    const std::vector<double> d = regime_gains(representative(LatencyRegime::tight()), Policy::rollout(6));
    return {ordered(d), "delta_open cloud local tight = " + join(d)};
}

Verdict p6() {
    const Policy controllers[] = {Policy::greedy(), Policy::rollout(6)};
    const auto maps = gain_maps(Scenario{}, kRegimes, controllers, default_grid(), reference_family(), 1);
    const int cloud = maps[1].positive_cells();
    const int local = maps[3].positive_cells();
    const int tight = maps[5].positive_cells();
    const int tight_greedy = maps[4].positive_cells();
    const bool pass = cloud <= local && local <= tight && tight >= tight_greedy;
    return {pass, "rollout positive cells cloud local tight = " + std::to_string(cloud) + " " + std::to_string(local) +
                      " " + std::to_string(tight) + ", tight greedy = " + std::to_string(tight_greedy) +
                      ", single worker"};
}

Verdict p7() {
    const SimulationResult cloud = run(representative(LatencyRegime::cloud()), Policy::rollout(6));
    const SimulationResult tight = run(representative(LatencyRegime::tight()), Policy::rollout(6));
    const double hf_cloud = heavy_fraction(cloud.heavy_count, cloud.action_count);
    const double hf_tight = heavy_fraction(tight.heavy_count, tight.action_count);
    const bool pass = cloud.action_count > tight.action_count && hf_cloud < 0.1 && hf_tight > 0.5;
    return {pass, "actions cloud " + std::to_string(cloud.action_count) + " > tight " +
                      std::to_string(tight.action_count) + ", heavy fraction cloud " + format_number(hf_cloud) +
                      " < 0.1, tight " + format_number(hf_tight) + " > 0.5"};
}

Verdict p8() {
    const std::vector<double> grid = logspace(10e-3, 60.0, 13);
    const std::vector<LatencyRegime> regimes = {LatencyRegime::cloud(), LatencyRegime::tight()};
    ScanSettings settings;
    settings.budget_s = 600.0;
    const ScanResult scan = classical_scan(representative(LatencyRegime::tight()), Policy::rollout(6),
                                           ScanKind::fixed_wall_clock, grid, regimes, reference_family(), settings, 1);
    const std::vector<double>& cloud = scan.gains[0];
    const std::vector<double>& tight = scan.gains[1];
    const std::size_t peak = static_cast<std::size_t>(std::max_element(tight.begin(), tight.end()) - tight.begin());
    const bool interior = tight[peak] > tight.front() && tight[peak] > tight.back();
    const auto cloud_nonpositive = std::count_if(cloud.begin(), cloud.end(), [](double g) { return g <= 0.0; });
    return {interior && cloud_nonpositive >= 11,
            "tight peak " + format_number(tight[peak]) + " at T_class " + format_number(grid[peak]) + " s (ends " +
                format_number(tight.front()) + ", " + format_number(tight.back()) + "), cloud <= 0 at " +
                std::to_string(cloud_nonpositive) + "/13"};
}

Verdict p9() {
    Scenario fresh = representative(LatencyRegime::tight());
    fresh.a0_s = 0.0;
    const std::vector<double> d = regime_gains(fresh, Policy::rollout(6));
    const double worst = std::max({std::abs(d[0]), std::abs(d[1]), std::abs(d[2])});
    return {worst <= 0.01, "delta_open at a0 = 0: " + join(d) + ", max |.| <= 0.01"};
}

Verdict p10() {
    std::string detail;
    bool pass = true;
    const auto variant = [&](const char* name, const std::function<void(Scenario&)>& apply) {
        Scenario s = representative(LatencyRegime::tight());
        apply(s);
        const std::vector<double> d = regime_gains(s, Policy::rollout(6));
        pass = pass && ordered(d);
        detail += std::string(detail.empty() ? "" : "; ") + name + " " + join(d) + (ordered(d) ? "" : " (broken)");
    };
    variant("exponential", [](Scenario& s) { s.model.form = RealizabilityForm::exponential; });
    variant("linear_cutoff", [](Scenario& s) { s.model.form = RealizabilityForm::linear_cutoff; });
    variant("lambda=0.6", [](Scenario& s) { s.model.workload.progress.lambda = 0.6; });
    return {pass, detail};
}

}  // namespace

int main() {
    report("P1", "inverse round trip", 1.0, p1);
    report("P2", "greedy equals rollout H=1", 30.0, p2);
    report("P3", "budget conservation", 30.0, p3);
    report("P4", "analytic gap without drift", 10.0, p4);
    report("P5", "regime ordering at the representative point", 60.0, p5);
    report("P6", "positive-region ordering on the 9x9 grid", 900.0, p6);
    report("P7", "action mechanism", 60.0, p7);
    report("P8", "non-monotone fixed wall-clock window", 300.0, p8);
    report("P9", "fresh-device neutrality", 60.0, p9);
    report("P10", "ordering under robustness variants", 60.0, p10);
    std::printf("%d of 10 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
