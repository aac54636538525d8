#include "rcal/config.hpp"

#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <utility>

namespace rcal {

ConfigError::ConfigError(const std::string& message, int line)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message), line_(line) {}

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_real(std::string_view text) {
    const std::string s(trim(text));
    if (s.empty()) throw std::invalid_argument("expected a number");
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v)) {
        throw std::invalid_argument("'" + s + "' is not a finite number");
    }
    return v;
}

long parse_long(std::string_view text) {
    const std::string s(trim(text));
    char* end = nullptr;
    errno = 0;
    const long v = std::strtol(s.c_str(), &end, 10);
    if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE) {
        throw std::invalid_argument("'" + s + "' is not an integer");
    }
    return v;
}

int parse_int(std::string_view text) {
    const long v = parse_long(text);
    if (v < -1000000000L || v > 1000000000L) throw std::invalid_argument("integer out of range");
    return static_cast<int>(v);
}

/// Shortest "%.Ng" that reads back to the same double.
std::string exact_number(double v) {
    char buf[40];
    for (int digits = 15; digits <= 17; ++digits) {
        std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

HorizonMode parse_horizon_mode(std::string_view s) {
    if (s == "per_candidate") return HorizonMode::per_candidate;
    if (s == "common") return HorizonMode::common;
    throw std::invalid_argument("horizon_mode must be per_candidate or common");
}

std::string_view horizon_mode_name(HorizonMode m) {
    return m == HorizonMode::per_candidate ? "per_candidate" : "common";
}

struct Field {
    std::string key;
    std::function<void(RunConfig&, std::string_view)> set;
    std::function<std::string(const RunConfig&)> get;
};

Field duration(std::string key, double RunConfig::*member) {
    return {std::move(key), [member](RunConfig& c, std::string_view v) { c.*member = parse_duration(v); },
            [member](const RunConfig& c) { return exact_number(c.*member) + "s"; }};
}

Field real(std::string key, double RunConfig::*member) {
    return {std::move(key), [member](RunConfig& c, std::string_view v) { c.*member = parse_real(v); },
            [member](const RunConfig& c) { return exact_number(c.*member); }};
}

Field integer(std::string key, int RunConfig::*member) {
    return {std::move(key), [member](RunConfig& c, std::string_view v) { c.*member = parse_int(v); },
            [member](const RunConfig& c) { return std::to_string(c.*member); }};
}

Field choice(std::string key, std::string RunConfig::*member, std::initializer_list<std::string_view> allowed) {
    std::vector<std::string_view> options(allowed);
    return {std::move(key),
            [member, options](RunConfig& c, std::string_view v) {
                for (std::string_view o : options) {
                    if (v == o) {
                        c.*member = std::string(v);
                        return;
                    }
                }
                std::string msg = "'" + std::string(v) + "' is not one of";
                for (std::string_view o : options) msg += " " + std::string(o);
                throw std::invalid_argument(msg);
            },
            [member](const RunConfig& c) { return c.*member; }};
}

const std::vector<Field>& fields() {
    static const std::vector<Field> table = [] {
        std::vector<Field> f;
        f.push_back(duration("tau_drift", &RunConfig::tau_drift_s));
        f.push_back(real("nu", &RunConfig::nu));
        f.push_back(real("alpha", &RunConfig::alpha));
        f.push_back(real("lambda", &RunConfig::lambda));
        f.push_back(real("rho", &RunConfig::rho));
        f.push_back(real("r_max", &RunConfig::r_max));
        f.push_back(real("g_min", &RunConfig::g_min));
        f.push_back(real("g0", &RunConfig::g0));
        f.push_back(duration("t_class", &RunConfig::t_class_s));
        f.push_back(duration("t_alg", &RunConfig::t_alg_s));
        f.push_back(duration("t_budget", &RunConfig::t_budget_s));
        f.push_back(duration("a0", &RunConfig::a0_s));
        f.push_back(duration("light_t0", &RunConfig::light_t0_s));
        f.push_back(integer("light_rounds", &RunConfig::light_rounds));
        f.push_back(real("light_beta", &RunConfig::light_beta));
        f.push_back(real("light_target", &RunConfig::light_target));
        f.push_back(duration("light_tau_tol", &RunConfig::light_tau_tol_s));
        f.push_back(duration("heavy_t0", &RunConfig::heavy_t0_s));
        f.push_back(integer("heavy_rounds", &RunConfig::heavy_rounds));
        f.push_back(real("heavy_beta", &RunConfig::heavy_beta));
        f.push_back(real("heavy_target", &RunConfig::heavy_target));
        f.push_back(duration("heavy_tau_tol", &RunConfig::heavy_tau_tol_s));
        f.push_back(duration("tau_cloud", &RunConfig::tau_cloud_s));
        f.push_back(duration("tau_local", &RunConfig::tau_local_s));
        f.push_back(duration("tau_tight", &RunConfig::tau_tight_s));
        f.push_back({"l3_form", [](RunConfig& c, std::string_view v) { c.l3_form = parse_realizability_form(v); },
                     [](const RunConfig& c) { return std::string(to_string(c.l3_form)); }});
        f.push_back(choice("policy", &RunConfig::policy, {"no_cal", "periodic_heavy", "fixed_light", "greedy", "rollout"}));
        f.push_back(integer("horizon", &RunConfig::horizon));
        f.push_back(integer("period", &RunConfig::period));
        f.push_back({"horizon_mode", [](RunConfig& c, std::string_view v) { c.horizon_mode = parse_horizon_mode(v); },
                     [](const RunConfig& c) { return std::string(horizon_mode_name(c.horizon_mode)); }});
        f.push_back(choice("regime", &RunConfig::regime, {"cloud", "local", "tight", "all"}));
        f.push_back(choice("controller", &RunConfig::controller, {"greedy", "rollout", "all"}));
        f.push_back({"reference_periods",
                     [](RunConfig& c, std::string_view v) {
                         std::vector<int> out;
                         std::size_t pos = 0;
                         while (pos <= v.size()) {
                             const std::size_t comma = v.find(',', pos);
                             const std::string_view item =
                                 v.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
                             out.push_back(parse_int(item));
                             if (comma == std::string_view::npos) break;
                             pos = comma + 1;
                         }
                         c.reference_periods = std::move(out);
                     },
                     [](const RunConfig& c) {
                         std::string s;
                         for (std::size_t i = 0; i < c.reference_periods.size(); ++i) {
                             if (i) s += ",";
                             s += std::to_string(c.reference_periods[i]);
                         }
                         return s;
                     }});
        f.push_back(integer("grid_alpha_points", &RunConfig::grid_alpha_points));
        f.push_back(real("grid_alpha_min", &RunConfig::grid_alpha_min));
        f.push_back(real("grid_alpha_max", &RunConfig::grid_alpha_max));
        f.push_back(integer("grid_a0_points", &RunConfig::grid_a0_points));
        f.push_back(duration("grid_a0_min", &RunConfig::grid_a0_min_s));
        f.push_back(duration("grid_a0_max", &RunConfig::grid_a0_max_s));
        f.push_back(integer("scan_points", &RunConfig::scan_points));
        f.push_back(duration("scan_t_class_min", &RunConfig::scan_t_class_min_s));
        f.push_back(duration("scan_t_class_max", &RunConfig::scan_t_class_max_s));
        f.push_back(integer("scan_iterations", &RunConfig::scan_iterations));
        f.push_back(duration("scan_budget", &RunConfig::scan_budget_s));
        f.push_back(choice("scan_kind", &RunConfig::scan_kind, {"fixed_iteration", "fixed_wall_clock", "all"}));
        f.push_back({"workers",
                     [](RunConfig& c, std::string_view v) {
                         const long n = parse_long(v);
                         if (n < 0 || n > 4096) throw std::invalid_argument("workers must lie in [0, 4096]");
                         c.workers = static_cast<unsigned>(n);
                     },
                     [](const RunConfig& c) { return std::to_string(c.workers); }});
        f.push_back({"out_dir", [](RunConfig& c, std::string_view v) { c.out_dir = std::string(v); },
                     [](const RunConfig& c) { return c.out_dir; }});
        return f;
    }();
    return table;
}

}  // namespace

double parse_duration(std::string_view text) {
    text = trim(text);
    static constexpr std::pair<std::string_view, double> kUnits[] = {
        {"us", 1e-6}, {"ms", 1e-3}, {"min", 60.0}, {"s", 1.0}, {"h", 3600.0}};
    for (const auto& [suffix, scale] : kUnits) {
        if (text.size() > suffix.size() && text.ends_with(suffix)) {
            const std::string_view number = trim(text.substr(0, text.size() - suffix.size()));
            // "ms" must not be read as "m" + "s": only accept a numeric remainder.
            if (!number.empty() && (std::isdigit(static_cast<unsigned char>(number.back())) || number.back() == '.')) {
                return parse_real(number) * scale;
            }
        }
    }
    if (!text.empty() && std::isalpha(static_cast<unsigned char>(text.back()))) {
        throw std::invalid_argument("unknown duration unit in '" + std::string(text) + "' (use us, ms, s, min, h)");
    }
    return parse_real(text);
}

void apply_setting(RunConfig& config, std::string_view key, std::string_view value, int line) {
    key = trim(key);
    value = trim(value);
    for (const Field& f : fields()) {
        if (f.key == key) {
            try {
                f.set(config, value);
            } catch (const std::invalid_argument& e) {
                throw ConfigError(std::string(key) + ": " + e.what(), line);
            }
            return;
        }
    }
    throw ConfigError("unknown key '" + std::string(key) + "'", line);
}

RunConfig parse_config(std::string_view text) {
    RunConfig config;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (!line.empty()) {
            const auto eq = line.find('=');
            if (eq == std::string_view::npos) throw ConfigError("expected 'key = value'", line_no);
            apply_setting(config, line.substr(0, eq), line.substr(eq + 1), line_no);
        }
        if (eol == std::string_view::npos) break;
        pos = eol + 1;
    }
    config.validate();
    return config;
}

RunConfig load_config(const std::filesystem::path& path) {
    if (path.empty()) {
        RunConfig config;
        config.validate();
        return config;
    }
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

std::string to_config_text(const RunConfig& config) {
    std::string out;
    for (const Field& f : fields()) out += f.key + " = " + f.get(config) + "\n";
    return out;
}

std::vector<std::string> config_keys() {
    std::vector<std::string> keys;
    for (const Field& f : fields()) keys.push_back(f.key);
    return keys;
}

void RunConfig::validate() const {
    try {
        for (const LatencyRegime& r : all_regimes()) scenario(r).validate();
        selected_policy().validate();
        rollout_controller().validate();
        if (reference_periods.empty()) throw std::invalid_argument("reference_periods must not be empty");
        for (int k : reference_periods) {
            if (k < 1) throw std::invalid_argument("reference periods must be >= 1");
        }
        if (grid_alpha_points < 1 || grid_a0_points < 1) throw std::invalid_argument("grid sizes must be >= 1");
        grid().validate();
        if (grid_a0_max_s > 24.0 * kHour) throw std::invalid_argument("grid_a0_max must be <= 24h");
        if (scan_points < 1 || !(scan_t_class_min_s > 0.0) || !(scan_t_class_max_s >= scan_t_class_min_s)) {
            throw std::invalid_argument("scan grid must be positive and increasing");
        }
        if (scan_iterations < 2) throw std::invalid_argument("scan_iterations must be >= 2");
        if (!(scan_budget_s > scan_t_class_max_s + t_alg_s)) {
            throw std::invalid_argument("scan_budget must exceed scan_t_class_max + t_alg");
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("range error: ") + e.what());
    }
}

std::vector<LatencyRegime> RunConfig::all_regimes() const {
    return {{"cloud", tau_cloud_s}, {"local", tau_local_s}, {"tight", tau_tight_s}};
}

std::vector<LatencyRegime> RunConfig::selected_regimes() const {
    std::vector<LatencyRegime> all = all_regimes();
    if (regime == "all") return all;
    for (const LatencyRegime& r : all) {
        if (r.name == regime) return {r};
    }
    throw ConfigError("unknown regime '" + regime + "'");
}

Scenario RunConfig::scenario(const LatencyRegime& r) const {
    Scenario s;
    s.model.drift = {tau_drift_s, nu};
    s.model.workload = {t_class_s, t_alg_s, t_budget_s, rho, r_max, g_min, g0, {alpha, lambda}};
    s.model.primitives.light = {PrimitiveKind::light, light_t0_s, light_rounds, light_beta, light_target, light_tau_tol_s};
    s.model.primitives.heavy = {PrimitiveKind::heavy, heavy_t0_s, heavy_rounds, heavy_beta, heavy_target, heavy_tau_tol_s};
    s.model.regime = r;
    s.model.form = l3_form;
    s.a0_s = a0_s;
    return s;
}

Policy RunConfig::selected_policy() const {
    if (policy == "no_cal") return Policy::no_cal();
    if (policy == "periodic_heavy") return Policy::periodic_heavy(period);
    if (policy == "fixed_light") return Policy::fixed_light(period);
    if (policy == "greedy") return Policy::greedy();
    if (policy == "rollout") return rollout_controller();
    throw ConfigError("unknown policy '" + policy + "'");
}

Policy RunConfig::rollout_controller() const { return Policy::rollout(horizon, horizon_mode); }

std::vector<Policy> RunConfig::selected_controllers() const {
    if (controller == "greedy") return {Policy::greedy()};
    if (controller == "rollout") return {rollout_controller()};
    return {Policy::greedy(), rollout_controller()};
}

std::vector<Policy> RunConfig::references() const { return reference_family(reference_periods); }

Grid RunConfig::grid() const {
    return {linspace(grid_alpha_min, grid_alpha_max, grid_alpha_points),
            linspace(grid_a0_min_s, grid_a0_max_s, grid_a0_points)};
}

std::vector<double> RunConfig::scan_grid() const {
    return logspace(scan_t_class_min_s, scan_t_class_max_s, scan_points);
}

std::vector<ScanKind> RunConfig::selected_scan_kinds() const {
    if (scan_kind == "fixed_iteration") return {ScanKind::fixed_iteration};
    if (scan_kind == "fixed_wall_clock") return {ScanKind::fixed_wall_clock};
    return {ScanKind::fixed_iteration, ScanKind::fixed_wall_clock};
}

}  // namespace rcal
