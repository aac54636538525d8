// rcal: runtime-calibration policy simulator.
//
//   rcal simulate --policy rollout --H 6 --regime tight --a0 12h --alpha 0.7
//   rcal gainmap --controller greedy --regime cloud
//   rcal all --out results/

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "rcal/cli.hpp"

namespace {

/// Flags that map one-to-one onto config keys.
struct Overrides {
    std::vector<std::pair<std::string, std::string>> values;

    void add(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
        auto* slot = &values;
        app->add_option_function<std::string>(
            flag, [slot, key](const std::string& v) { slot->emplace_back(key, v); }, help);
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Runtime calibration policy simulator"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::optional<std::string> out_dir;
    std::vector<std::string> settings;
    Overrides overrides;

    app.add_option("-c,--config", config_path, "key = value config file (defaults if omitted)");
    app.add_option("-o,--out", out_dir, "output directory (overrides config and RCAL_OUT_DIR)");
    app.add_option("--set", settings, "extra key=value override, repeatable")->allow_extra_args(false);
    overrides.add(&app, "--workers", "workers", "worker threads (0 = hardware threads)");
    overrides.add(&app, "--l3-form", "l3_form", "rational | exponential | linear_cutoff");

    auto* simulate = app.add_subcommand("simulate", "run one policy and export its trace");
    overrides.add(simulate, "--policy", "policy", "no_cal | periodic_heavy | fixed_light | greedy | rollout");
    overrides.add(simulate, "--H,--horizon", "horizon", "rollout horizon");
    overrides.add(simulate, "--period", "period", "open-loop period in nominal iterations");
    overrides.add(simulate, "--regime", "regime", "cloud | local | tight | all");
    overrides.add(simulate, "--a0", "a0", "initial calibration age (e.g. 12h)");
    overrides.add(simulate, "--alpha", "alpha", "workload sensitivity in [0, 1]");
    overrides.add(simulate, "--t-class", "t_class", "classical time per iteration");
    overrides.add(simulate, "--t-budget", "t_budget", "wall-clock budget");

    auto* gainmap = app.add_subcommand("gainmap", "runtime gain over the (alpha, a0) grid");
    overrides.add(gainmap, "--controller", "controller", "greedy | rollout | all");
    overrides.add(gainmap, "--regime", "regime", "cloud | local | tight | all");
    overrides.add(gainmap, "--H,--horizon", "horizon", "rollout horizon");

    auto* slices = app.add_subcommand("slices", "gain vs alpha and vs a0 through the representative point");
    overrides.add(slices, "--regime", "regime", "cloud | local | tight | all");

    auto* diagnostics = app.add_subcommand("diagnostics", "rollout action counts and heavy fractions");
    overrides.add(diagnostics, "--regime", "regime", "cloud | local | tight | all");

    auto* scan = app.add_subcommand("scan", "classical-loop time scans");
    overrides.add(scan, "--kind", "scan_kind", "fixed_iteration | fixed_wall_clock | all");
    overrides.add(scan, "--regime", "regime", "cloud | local | tight | all");

    app.add_subcommand("robustness", "regime ordering under model variants");
    app.add_subcommand("all", "every experiment and trace");

    CLI11_PARSE(app, argc, argv);

    try {
        rcal::RunConfig config = rcal::load_config(config_path);
        for (const std::string& s : settings) {
            const auto eq = s.find('=');
            if (eq == std::string::npos) throw rcal::ConfigError("--set expects key=value, got '" + s + "'");
            rcal::apply_setting(config, s.substr(0, eq), s.substr(eq + 1));
        }
        for (const auto& [key, value] : overrides.values) rcal::apply_setting(config, key, value);
        if (const char* env = std::getenv(rcal::kOutDirEnv); env && *env) config.out_dir = env;
        if (out_dir) config.out_dir = *out_dir;
        config.validate();

        const std::string subcommand = app.get_subcommands().front()->get_name();
        const auto files = rcal::dispatch(subcommand, config, std::cout);
        for (const auto& f : files) std::cout << "wrote " << f.string() << '\n';
    } catch (const std::exception& e) {
        std::cerr << "rcal: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
