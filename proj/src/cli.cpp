#include "rcal/cli.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>

#include "rcal/csv.hpp"

namespace rcal {

namespace {

namespace fs = std::filesystem;

/// Files written by one dispatch; removed again unless commit() is called.
class OutputSet {
  public:
    explicit OutputSet(fs::path dir) : dir_(std::move(dir)) {}
    OutputSet(const OutputSet&) = delete;
    OutputSet& operator=(const OutputSet&) = delete;

    ~OutputSet() {
        if (committed_) return;
        std::error_code ec;
        for (const fs::path& p : written_) fs::remove(p, ec);
    }

    void write(const std::string& name, const std::function<void(std::ostream&)>& body) {
        const fs::path path = dir_ / name;
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
        written_.push_back(path);
        body(out);
        out.flush();
        if (!out) throw std::runtime_error("I/O error while writing " + path.string());
    }

    std::vector<fs::path> commit() {
        committed_ = true;
        return written_;
    }

  private:
    fs::path dir_;
    std::vector<fs::path> written_;
    bool committed_ = false;
};

void write_traces(OutputSet& out, const RunConfig& config, std::span<const LatencyRegime> regimes,
                  std::span<const Policy> policies, std::ostream& log) {
    for (const LatencyRegime& regime : regimes) {
        const Scenario s = config.scenario(regime);
        const double best = best_reference_mean_gap(s, config.references());
        for (const Policy& policy : policies) {
            const SimulationResult res = run(s, policy);
            out.write("trace_" + regime.name + "_" + policy.label() + ".csv",
                      [&](std::ostream& os) { write_trace_csv(os, res.trace); });
            log << regime.name << ' ' << policy.label() << ": mean_gap=" << format_number(res.mean_gap)
                << " delta_open=" << format_number(best - res.mean_gap) << " actions=" << res.action_count
                << " heavy=" << res.heavy_count << '\n';
        }
    }
}

void write_gainmaps(OutputSet& out, const RunConfig& config, std::span<const LatencyRegime> regimes,
                    std::span<const Policy> controllers, std::ostream& log) {
    const std::vector<GainMap> maps = gain_maps(config.scenario(regimes.front()), regimes, controllers, config.grid(),
                                                config.references(), config.workers);
    out.write("gainmap.csv", [&](std::ostream& os) { write_gainmap_csv(os, maps); });
    for (const GainMap& m : maps) {
        log << "gainmap " << m.regime << ' ' << m.controller.label() << ": positive cells " << m.positive_cells()
            << '/' << m.values.size() << '\n';
    }
}

void write_slices(OutputSet& out, const RunConfig& config, std::span<const LatencyRegime> regimes) {
    const std::vector<SliceCurve> curves =
        regime_slices(config.scenario(regimes.front()), config.rollout_controller(), config.alpha, config.a0_s,
                      config.grid(), regimes, config.references(), config.workers);
    out.write("slices.csv", [&](std::ostream& os) { write_slices_csv(os, curves); });
}

void write_diagnostics(OutputSet& out, const RunConfig& config, std::span<const LatencyRegime> regimes) {
    const std::vector<ActionDiagnostics> diags = action_diagnostics(
        config.scenario(regimes.front()), config.rollout_controller(), config.grid(), regimes, config.workers);
    out.write("diagnostics.csv", [&](std::ostream& os) { write_diagnostics_csv(os, diags); });
}

void write_scans(OutputSet& out, const RunConfig& config, std::span<const LatencyRegime> regimes,
                 std::span<const ScanKind> kinds) {
    const ScanSettings settings{config.scan_iterations, config.scan_budget_s};
    const std::vector<double> grid = config.scan_grid();
    std::vector<ScanResult> scans;
    for (ScanKind kind : kinds) {
        scans.push_back(classical_scan(config.scenario(regimes.front()), config.rollout_controller(), kind, grid,
                                       regimes, config.references(), settings, config.workers));
    }
    out.write("scan.csv", [&](std::ostream& os) { write_scan_csv(os, scans); });
}

void write_robustness(OutputSet& out, const RunConfig& config, std::ostream& log) {
    const std::vector<LatencyRegime> regimes = config.all_regimes();
    const std::vector<RobustnessVariant> variants = default_robustness_variants();
    const std::vector<RobustnessRow> rows = robustness_scan(config.scenario(regimes.front()), config.rollout_controller(),
                                                            regimes, variants, config.references(), config.workers);
    out.write("robustness.csv", [&](std::ostream& os) { write_robustness_csv(os, rows); });
    const auto holding = std::count_if(rows.begin(), rows.end(), [](const RobustnessRow& r) { return r.ordering_holds; });
    log << "robustness: ordering holds in " << holding << '/' << rows.size() << " variants\n";
}

}  // namespace

std::vector<fs::path> dispatch(std::string_view subcommand, const RunConfig& config, std::ostream& log) {
    if (std::find(std::begin(kSubcommands), std::end(kSubcommands), subcommand) == std::end(kSubcommands)) {
        throw std::invalid_argument("unknown subcommand '" + std::string(subcommand) + "'");
    }
    config.validate();

    const fs::path dir(config.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());

    OutputSet out(dir);
    const std::vector<LatencyRegime> regimes = config.selected_regimes();
    const std::vector<LatencyRegime> every_regime = config.all_regimes();

    if (subcommand == "simulate") {
        const Policy policies[] = {config.selected_policy()};
        write_traces(out, config, regimes, policies, log);
    } else if (subcommand == "gainmap") {
        write_gainmaps(out, config, regimes, config.selected_controllers(), log);
    } else if (subcommand == "slices") {
        write_slices(out, config, regimes);
    } else if (subcommand == "diagnostics") {
        write_diagnostics(out, config, regimes);
    } else if (subcommand == "scan") {
        write_scans(out, config, regimes, config.selected_scan_kinds());
    } else if (subcommand == "robustness") {
        write_robustness(out, config, log);
    } else {
        const Policy policies[] = {Policy::no_cal(), Policy::periodic_heavy(config.period),
                                   Policy::fixed_light(config.period), Policy::greedy(), config.rollout_controller()};
        write_traces(out, config, every_regime, policies, log);
        const Policy controllers[] = {Policy::greedy(), config.rollout_controller()};
        write_gainmaps(out, config, every_regime, controllers, log);
        write_slices(out, config, every_regime);
        write_diagnostics(out, config, every_regime);
        const ScanKind kinds[] = {ScanKind::fixed_iteration, ScanKind::fixed_wall_clock};
        write_scans(out, config, every_regime, kinds);
        write_robustness(out, config, log);
    }

    out.write("manifest.cfg", [&](std::ostream& os) {
        os << "# resolved configuration for subcommand: " << subcommand << '\n' << to_config_text(config);
    });
    return out.commit();
}

}  // namespace rcal
