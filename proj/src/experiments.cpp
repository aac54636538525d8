#include "rcal/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "rcal/csv.hpp"
#include "rcal/parallel.hpp"

namespace rcal {

namespace {

constexpr int kDefaultPeriods[] = {3, 6, 12};

[[noreturn]] void rethrow_for_cell(const std::exception& e, const std::string& where) {
    throw std::runtime_error(where + ": " + e.what());
}

std::string cell_label(const std::string& regime, double alpha, double a0_s) {
    return "cell (regime=" + regime + ", alpha=" + format_number(alpha) + ", a0_s=" + format_number(a0_s) + ")";
}

void require_increasing(std::span<const double> values, const char* what) {
    if (values.empty()) throw std::invalid_argument(std::string(what) + " grid is empty");
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (!(values[i] > values[i - 1])) throw std::invalid_argument(std::string(what) + " grid must be strictly increasing");
    }
}

}  // namespace

std::vector<Policy> reference_family(std::span<const int> periods) {
    std::vector<Policy> family{Policy::no_cal()};
    for (int k : periods) family.push_back(Policy::periodic_heavy(k));
    for (int k : periods) family.push_back(Policy::fixed_light(k));
    return family;
}

std::vector<Policy> reference_family() { return reference_family(kDefaultPeriods); }

double delta_open(const SimulationResult& runtime, std::span<const SimulationResult> references) {
    if (references.empty()) throw ComparisonError("reference family is empty");
    double best = std::numeric_limits<double>::infinity();
    for (const SimulationResult& ref : references) {
        if (!(ref.scenario == runtime.scenario)) {
            throw ComparisonError("reference " + ref.policy.label() + " was run at different parameters");
        }
        best = std::min(best, ref.mean_gap);
    }
    return best - runtime.mean_gap;
}

double best_reference_mean_gap(const Scenario& scenario, std::span<const Policy> references) {
    if (references.empty()) throw ComparisonError("reference family is empty");
    double best = std::numeric_limits<double>::infinity();
    for (const Policy& p : references) best = std::min(best, run(scenario, p).mean_gap);
    return best;
}

std::vector<double> linspace(double lo, double hi, int n) {
    if (n < 1) throw std::invalid_argument("linspace needs n >= 1");
    if (n == 1) return {lo};
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
    out.back() = hi;
    return out;
}

std::vector<double> logspace(double lo, double hi, int n) {
    if (!(lo > 0.0 && hi > 0.0)) throw std::invalid_argument("logspace bounds must be > 0");
    std::vector<double> out = linspace(std::log(lo), std::log(hi), n);
    for (double& v : out) v = std::exp(v);
    out.front() = lo;
    if (n > 1) out.back() = hi;
    return out;
}

void Grid::validate() const {
    require_increasing(alpha, "alpha");
    require_increasing(a0_s, "a0");
    if (alpha.front() < 0.0 || alpha.back() > 1.0) throw std::invalid_argument("alpha grid must lie in [0, 1]");
    if (a0_s.front() < 0.0) throw std::invalid_argument("a0 grid must be >= 0");
}

Grid default_grid() { return {linspace(0.0, 1.0, 9), linspace(0.0, 24.0 * kHour, 9)}; }

Scenario at_cell(const Scenario& base, double alpha, double a0_s) {
    Scenario s = base;
    s.model.workload.progress.alpha = alpha;
    s.a0_s = a0_s;
    return s;
}

Scenario with_regime(const Scenario& base, const LatencyRegime& regime) {
    Scenario s = base;
    s.model.regime = regime;
    return s;
}

std::vector<std::vector<SimulationResult>> evaluate_policy_grid(const Scenario& base, std::span<const Policy> policies,
                                                                const Grid& grid, unsigned workers) {
    grid.validate();
    if (policies.empty()) throw std::invalid_argument("no policies to evaluate");
    std::vector<std::vector<SimulationResult>> out(policies.size(), std::vector<SimulationResult>(grid.cells()));
    const std::size_t cells = grid.cells();
    parallel_for(policies.size() * cells, workers, [&](std::size_t job) {
        const std::size_t p = job / cells;
        const std::size_t cell = job % cells;
        const double alpha = grid.alpha[cell / grid.a0_s.size()];
        const double a0 = grid.a0_s[cell % grid.a0_s.size()];
        try {
            out[p][cell] = run(at_cell(base, alpha, a0), policies[p]);
        } catch (const std::exception& e) {
            rethrow_for_cell(e, cell_label(base.model.regime.name, alpha, a0));
        }
    });
    return out;
}

int GainMap::positive_cells() const {
    return static_cast<int>(std::count_if(values.begin(), values.end(), [](double v) { return v > 0.0; }));
}

std::vector<GainMap> gain_maps(const Scenario& base, std::span<const LatencyRegime> regimes,
                               std::span<const Policy> controllers, const Grid& grid,
                               std::span<const Policy> references, unsigned workers) {
    grid.validate();
    if (grid.a0_s.back() > 24.0 * kHour) throw std::invalid_argument("a0 grid must lie in [0, 24 h]");
    const std::size_t cells = grid.cells();
    std::vector<GainMap> maps;
    for (const LatencyRegime& regime : regimes) {
        for (const Policy& controller : controllers) {
            maps.push_back({grid, regime.name, controller, std::vector<double>(cells)});
        }
    }

    parallel_for(regimes.size() * cells, workers, [&](std::size_t job) {
        const std::size_t r = job / cells;
        const std::size_t cell = job % cells;
        const double alpha = grid.alpha[cell / grid.a0_s.size()];
        const double a0 = grid.a0_s[cell % grid.a0_s.size()];
        try {
            const Scenario s = at_cell(with_regime(base, regimes[r]), alpha, a0);
            const double best = best_reference_mean_gap(s, references);
            for (std::size_t c = 0; c < controllers.size(); ++c) {
                maps[r * controllers.size() + c].values[cell] = best - run(s, controllers[c]).mean_gap;
            }
        } catch (const std::exception& e) {
            rethrow_for_cell(e, cell_label(regimes[r].name, alpha, a0));
        }
    });
    return maps;
}

GainMap gain_map(const Scenario& base, const Policy& controller, const Grid& grid,
                 std::span<const Policy> references, unsigned workers) {
    const LatencyRegime regimes[] = {base.model.regime};
    const Policy controllers[] = {controller};
    return gain_maps(base, regimes, controllers, grid, references, workers).front();
}

std::vector<SliceCurve> regime_slices(const Scenario& base, const Policy& controller, double alpha_fixed,
                                      double a0_fixed_s, const Grid& grid, std::span<const LatencyRegime> regimes,
                                      std::span<const Policy> references, unsigned workers) {
    grid.validate();
    if (alpha_fixed < grid.alpha.front() || alpha_fixed > grid.alpha.back() || a0_fixed_s < grid.a0_s.front() ||
        a0_fixed_s > grid.a0_s.back()) {
        throw std::invalid_argument("slice point lies outside the grid");
    }

    std::vector<SliceCurve> curves;
    for (const LatencyRegime& regime : regimes) {
        SliceCurve by_alpha{"alpha", regime.name, controller, grid.alpha,
                            std::vector<double>(grid.alpha.size(), a0_fixed_s), {}};
        SliceCurve by_a0{"a0", regime.name, controller, std::vector<double>(grid.a0_s.size(), alpha_fixed),
                         grid.a0_s, {}};
        by_alpha.delta_open.resize(grid.alpha.size());
        by_a0.delta_open.resize(grid.a0_s.size());
        curves.push_back(std::move(by_alpha));
        curves.push_back(std::move(by_a0));
    }

    struct Job {
        std::size_t curve;
        std::size_t point;
    };
    std::vector<Job> jobs;
    for (std::size_t c = 0; c < curves.size(); ++c) {
        for (std::size_t i = 0; i < curves[c].delta_open.size(); ++i) jobs.push_back({c, i});
    }

    parallel_for(jobs.size(), workers, [&](std::size_t j) {
        SliceCurve& curve = curves[jobs[j].curve];
        const std::size_t i = jobs[j].point;
        const LatencyRegime& regime = regimes[jobs[j].curve / 2];
        try {
            const Scenario s = at_cell(with_regime(base, regime), curve.alpha[i], curve.a0_s[i]);
            curve.delta_open[i] = best_reference_mean_gap(s, references) - run(s, controller).mean_gap;
        } catch (const std::exception& e) {
            rethrow_for_cell(e, cell_label(regime.name, curve.alpha[i], curve.a0_s[i]));
        }
    });
    return curves;
}

double heavy_fraction(int heavy_count, int action_count) {
    return static_cast<double>(heavy_count) / std::max(1, action_count);
}

std::vector<ActionDiagnostics> action_diagnostics(const Scenario& base, const Policy& controller, const Grid& grid,
                                                  std::span<const LatencyRegime> regimes, unsigned workers) {
    grid.validate();
    const std::size_t cells = grid.cells();
    std::vector<ActionDiagnostics> out;
    for (const LatencyRegime& regime : regimes) {
        out.push_back({grid, regime.name, controller, std::vector<int>(cells), std::vector<int>(cells),
                       std::vector<double>(cells)});
    }
    parallel_for(regimes.size() * cells, workers, [&](std::size_t job) {
        const std::size_t r = job / cells;
        const std::size_t cell = job % cells;
        const double alpha = grid.alpha[cell / grid.a0_s.size()];
        const double a0 = grid.a0_s[cell % grid.a0_s.size()];
        try {
            const SimulationResult res = run(at_cell(with_regime(base, regimes[r]), alpha, a0), controller);
            out[r].total_actions[cell] = res.action_count;
            out[r].heavy_counts[cell] = res.heavy_count;
            out[r].heavy_fraction[cell] = heavy_fraction(res.heavy_count, res.action_count);
        } catch (const std::exception& e) {
            rethrow_for_cell(e, cell_label(regimes[r].name, alpha, a0));
        }
    });
    return out;
}

std::string_view to_string(ScanKind kind) {
    return kind == ScanKind::fixed_iteration ? "fixed_iteration" : "fixed_wall_clock";
}

ScanResult classical_scan(const Scenario& base, const Policy& controller, ScanKind kind,
                          std::span<const double> t_class_grid, std::span<const LatencyRegime> regimes,
                          std::span<const Policy> references, const ScanSettings& settings, unsigned workers) {
    require_increasing(t_class_grid, "t_class");
    if (!(t_class_grid.front() > 0.0)) throw std::invalid_argument("t_class grid must be positive");

    ScanResult out{kind, {t_class_grid.begin(), t_class_grid.end()}, {}, {}};
    for (const LatencyRegime& regime : regimes) {
        out.regimes.push_back(regime.name);
        out.gains.emplace_back(t_class_grid.size());
    }
    const std::size_t n = t_class_grid.size();
    parallel_for(regimes.size() * n, workers, [&](std::size_t job) {
        const std::size_t r = job / n;
        const std::size_t i = job % n;
        Scenario s = with_regime(base, regimes[r]);
        WorkloadModel& w = s.model.workload;
        w.t_class_s = t_class_grid[i];
        w.t_budget_s = kind == ScanKind::fixed_iteration ? settings.n_iterations * w.t_base_s() : settings.budget_s;
        try {
            out.gains[r][i] = best_reference_mean_gap(s, references) - run(s, controller).mean_gap;
        } catch (const std::exception& e) {
            rethrow_for_cell(e, "scan point (regime=" + regimes[r].name + ", t_class_s=" + format_number(w.t_class_s) + ")");
        }
    });
    return out;
}

std::vector<RobustnessVariant> default_robustness_variants() {
    std::vector<RobustnessVariant> v;
    v.push_back({"baseline", "-", [](Scenario&, Policy&) {}});
    for (RealizabilityForm form :
         {RealizabilityForm::rational, RealizabilityForm::exponential, RealizabilityForm::linear_cutoff}) {
        v.push_back({"l3_form", std::string(to_string(form)), [form](Scenario& s, Policy&) { s.model.form = form; }});
    }
    for (double lambda : {0.6, 2.0}) {
        v.push_back({"lambda", format_number(lambda),
                     [lambda](Scenario& s, Policy&) { s.model.workload.progress.lambda = lambda; }});
    }
    for (int h = 2; h <= 12; ++h) {
        v.push_back({"horizon", std::to_string(h), [h](Scenario&, Policy& p) { p.horizon = h; }});
    }
    for (double scale : {0.5, 1.0, 2.0}) {
        v.push_back({"tau_drift_scale", format_number(scale),
                     [scale](Scenario& s, Policy&) { s.model.drift.tau_drift_s *= scale; }});
    }
    for (double shift : {-0.1, 0.1}) {
        v.push_back({"beta_shift", format_number(shift), [shift](Scenario& s, Policy&) {
                         auto& prims = s.model.primitives;
                         prims.light.beta = std::clamp(prims.light.beta + shift, 0.0, 1.0);
                         prims.heavy.beta = std::clamp(prims.heavy.beta + shift, 0.0, 1.0);
                     }});
    }
    for (int rounds : {10, 20, 40}) {
        v.push_back({"n_heavy", std::to_string(rounds),
                     [rounds](Scenario& s, Policy&) { s.model.primitives.heavy.n_rounds = rounds; }});
    }
    return v;
}

std::vector<RobustnessRow> robustness_scan(const Scenario& base, const Policy& controller,
                                           std::span<const LatencyRegime> regimes,
                                           std::span<const RobustnessVariant> variants,
                                           std::span<const Policy> references, unsigned workers) {
    std::vector<RobustnessRow> rows;
    for (const RobustnessVariant& v : variants) {
        rows.push_back({v.name, v.param, std::vector<double>(regimes.size()), false});
    }
    const std::size_t nr = regimes.size();
    parallel_for(variants.size() * nr, workers, [&](std::size_t job) {
        const std::size_t vi = job / nr;
        const std::size_t r = job % nr;
        Scenario s = base;
        Policy p = controller;
        variants[vi].apply(s, p);
        s = with_regime(s, regimes[r]);
        try {
            rows[vi].deltas[r] = best_reference_mean_gap(s, references) - run(s, p).mean_gap;
        } catch (const std::exception& e) {
            rethrow_for_cell(e, "variant " + variants[vi].name + "=" + variants[vi].param + " regime " + regimes[r].name);
        }
    });
    for (RobustnessRow& row : rows) {
        row.ordering_holds = std::is_sorted(row.deltas.begin(), row.deltas.end());
    }
    return rows;
}

void write_gainmap_csv(std::ostream& out, std::span<const GainMap> maps) {
    out << "alpha,a0_s,regime,controller,delta_open\n";
    for (const GainMap& m : maps) {
        for (std::size_t i = 0; i < m.grid.alpha.size(); ++i) {
            for (std::size_t j = 0; j < m.grid.a0_s.size(); ++j) {
                out << format_number(m.grid.alpha[i]) << ',' << format_number(m.grid.a0_s[j]) << ',' << m.regime << ','
                    << m.controller.label() << ',' << format_number(m.at(i, j)) << '\n';
            }
        }
    }
}

void write_slices_csv(std::ostream& out, std::span<const SliceCurve> slices) {
    out << "slice,alpha,a0_s,regime,controller,delta_open\n";
    for (const SliceCurve& c : slices) {
        for (std::size_t i = 0; i < c.delta_open.size(); ++i) {
            out << c.axis << ',' << format_number(c.alpha[i]) << ',' << format_number(c.a0_s[i]) << ',' << c.regime
                << ',' << c.controller.label() << ',' << format_number(c.delta_open[i]) << '\n';
        }
    }
}

void write_diagnostics_csv(std::ostream& out, std::span<const ActionDiagnostics> diagnostics) {
    out << "alpha,a0_s,regime,total_actions,heavy_fraction\n";
    for (const ActionDiagnostics& d : diagnostics) {
        for (std::size_t i = 0; i < d.grid.alpha.size(); ++i) {
            for (std::size_t j = 0; j < d.grid.a0_s.size(); ++j) {
                const std::size_t k = d.grid.index(i, j);
                out << format_number(d.grid.alpha[i]) << ',' << format_number(d.grid.a0_s[j]) << ',' << d.regime << ','
                    << d.total_actions[k] << ',' << format_number(d.heavy_fraction[k]) << '\n';
            }
        }
    }
}

void write_scan_csv(std::ostream& out, std::span<const ScanResult> scans) {
    out << "t_class_s,regime,scan_kind,gain\n";
    for (const ScanResult& s : scans) {
        for (std::size_t r = 0; r < s.regimes.size(); ++r) {
            for (std::size_t i = 0; i < s.t_class_grid.size(); ++i) {
                out << format_number(s.t_class_grid[i]) << ',' << s.regimes[r] << ',' << to_string(s.kind) << ','
                    << format_number(s.gains[r][i]) << '\n';
            }
        }
    }
}

void write_robustness_csv(std::ostream& out, std::span<const RobustnessRow> rows) {
    out << "variant,param,ordering_holds\n";
    for (const RobustnessRow& row : rows) {
        out << row.variant << ',' << row.param << ',' << (row.ordering_holds ? "true" : "false") << '\n';
    }
}

}  // namespace rcal
