#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "rcal/cli.hpp"

namespace py = pybind11;
using namespace rcal;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Runtime calibration policy simulator";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<ConfigurationError>(m, "ConfigurationError", PyExc_ValueError);
    py::register_exception<AccountingError>(m, "AccountingError", PyExc_RuntimeError);
    py::register_exception<ComparisonError>(m, "ComparisonError", PyExc_ValueError);

    py::enum_<Action>(m, "Action").value("none", Action::none).value("light", Action::light).value("heavy", Action::heavy);
    py::enum_<PrimitiveKind>(m, "PrimitiveKind")
        .value("light", PrimitiveKind::light)
        .value("heavy", PrimitiveKind::heavy);
    py::enum_<RealizabilityForm>(m, "RealizabilityForm")
        .value("rational", RealizabilityForm::rational)
        .value("exponential", RealizabilityForm::exponential)
        .value("linear_cutoff", RealizabilityForm::linear_cutoff);
    py::enum_<ExecutionMode>(m, "ExecutionMode")
        .value("scheduled", ExecutionMode::scheduled)
        .value("runtime", ExecutionMode::runtime);
    py::enum_<PolicyKind>(m, "PolicyKind")
        .value("no_cal", PolicyKind::no_cal)
        .value("periodic_heavy", PolicyKind::periodic_heavy)
        .value("fixed_light", PolicyKind::fixed_light)
        .value("greedy", PolicyKind::greedy)
        .value("rollout", PolicyKind::rollout);
    py::enum_<HorizonMode>(m, "HorizonMode")
        .value("per_candidate", HorizonMode::per_candidate)
        .value("common", HorizonMode::common);
    py::enum_<ScanKind>(m, "ScanKind")
        .value("fixed_iteration", ScanKind::fixed_iteration)
        .value("fixed_wall_clock", ScanKind::fixed_wall_clock);

    m.attr("HOUR") = kHour;

    py::class_<DriftModel>(m, "DriftModel")
        .def(py::init<>())
        .def(py::init([](double tau_drift_s, double nu) { return DriftModel{tau_drift_s, nu}; }), py::arg("tau_drift_s"),
             py::arg("nu") = 2.0)
        .def_readwrite("tau_drift_s", &DriftModel::tau_drift_s)
        .def_readwrite("nu", &DriftModel::nu)
        .def("validate", &DriftModel::validate)
        .def(py::self == py::self);

    py::class_<ProgressModel>(m, "ProgressModel")
        .def(py::init<>())
        .def(py::init([](double alpha, double lambda) { return ProgressModel{alpha, lambda}; }), py::arg("alpha"),
             py::arg("lambda_") = 2.0)
        .def_readwrite("alpha", &ProgressModel::alpha)
        .def_readwrite("lambda_", &ProgressModel::lambda)
        .def("validate", &ProgressModel::validate);

    py::class_<CalibrationPrimitive>(m, "CalibrationPrimitive")
        .def(py::init<>())
        .def_readwrite("kind", &CalibrationPrimitive::kind)
        .def_readwrite("t0_s", &CalibrationPrimitive::t0_s)
        .def_readwrite("n_rounds", &CalibrationPrimitive::n_rounds)
        .def_readwrite("beta", &CalibrationPrimitive::beta)
        .def_readwrite("l2_target", &CalibrationPrimitive::l2_target)
        .def_readwrite("tau_tol_s", &CalibrationPrimitive::tau_tol_s)
        .def_static("default_light", &CalibrationPrimitive::default_light)
        .def_static("default_heavy", &CalibrationPrimitive::default_heavy);

    py::class_<PrimitiveSet>(m, "PrimitiveSet")
        .def(py::init<>())
        .def_readwrite("light", &PrimitiveSet::light)
        .def_readwrite("heavy", &PrimitiveSet::heavy);

    py::class_<LatencyRegime>(m, "LatencyRegime")
        .def(py::init([](std::string name, double tau) { return LatencyRegime{std::move(name), tau}; }),
             py::arg("name"), py::arg("tau_rtt_s"))
        .def_readwrite("name", &LatencyRegime::name)
        .def_readwrite("tau_rtt_s", &LatencyRegime::tau_rtt_s)
        .def_static("cloud", &LatencyRegime::cloud)
        .def_static("local", &LatencyRegime::local)
        .def_static("tight", &LatencyRegime::tight)
        .def("__repr__", [](const LatencyRegime& r) {
            return "LatencyRegime('" + r.name + "', " + std::to_string(r.tau_rtt_s) + ")";
        });

    py::class_<WorkloadModel>(m, "WorkloadModel")
        .def(py::init<>())
        .def_readwrite("t_class_s", &WorkloadModel::t_class_s)
        .def_readwrite("t_alg_s", &WorkloadModel::t_alg_s)
        .def_readwrite("t_budget_s", &WorkloadModel::t_budget_s)
        .def_readwrite("rho", &WorkloadModel::rho)
        .def_readwrite("r_max", &WorkloadModel::r_max)
        .def_readwrite("g_min", &WorkloadModel::g_min)
        .def_readwrite("g0", &WorkloadModel::g0)
        .def_readwrite("progress", &WorkloadModel::progress)
        .def_property_readonly("t_base_s", &WorkloadModel::t_base_s);

    py::class_<SystemModel>(m, "SystemModel")
        .def(py::init<>())
        .def_readwrite("drift", &SystemModel::drift)
        .def_readwrite("workload", &SystemModel::workload)
        .def_readwrite("primitives", &SystemModel::primitives)
        .def_readwrite("regime", &SystemModel::regime)
        .def_readwrite("form", &SystemModel::form)
        .def("step_duration", &SystemModel::step_duration);

    py::class_<Scenario>(m, "Scenario")
        .def(py::init<>())
        .def(py::init([](const LatencyRegime& regime, double alpha, double a0_s) {
                 Scenario s;
                 s.model.regime = regime;
                 s.model.workload.progress.alpha = alpha;
                 s.a0_s = a0_s;
                 return s;
             }),
             py::arg("regime"), py::arg("alpha") = 0.7, py::arg("a0_s") = 12.0 * kHour)
        .def_readwrite("model", &Scenario::model)
        .def_readwrite("a0_s", &Scenario::a0_s)
        .def(py::self == py::self);

    py::class_<Policy>(m, "Policy")
        .def_readonly("kind", &Policy::kind)
        .def_readonly("period", &Policy::period)
        .def_readonly("horizon", &Policy::horizon)
        .def_readonly("horizon_mode", &Policy::horizon_mode)
        .def_static("no_cal", &Policy::no_cal)
        .def_static("periodic_heavy", &Policy::periodic_heavy, py::arg("period"))
        .def_static("fixed_light", &Policy::fixed_light, py::arg("period"))
        .def_static("greedy", &Policy::greedy)
        .def_static("rollout", &Policy::rollout, py::arg("horizon"), py::arg("mode") = HorizonMode::per_candidate)
        .def_property_readonly("label", &Policy::label)
        .def("__repr__", [](const Policy& p) { return "Policy(" + p.label() + ")"; })
        .def(py::self == py::self);

    py::class_<TraceRecord>(m, "TraceRecord")
        .def_readonly("t_s", &TraceRecord::t_s)
        .def_readonly("age_s", &TraceRecord::age_s)
        .def_readonly("l2", &TraceRecord::l2)
        .def_readonly("gap", &TraceRecord::gap)
        .def_readonly("action", &TraceRecord::action)
        .def_readonly("step_s", &TraceRecord::step_s);

    py::class_<SimulationResult>(m, "SimulationResult")
        .def_readonly("scenario", &SimulationResult::scenario)
        .def_readonly("policy", &SimulationResult::policy)
        .def_readonly("trace", &SimulationResult::trace)
        .def_readonly("gap_area", &SimulationResult::gap_area)
        .def_readonly("mean_gap", &SimulationResult::mean_gap)
        .def_readonly("final_gap", &SimulationResult::final_gap)
        .def_readonly("residual_s", &SimulationResult::residual_s)
        .def_readonly("action_count", &SimulationResult::action_count)
        .def_readonly("heavy_count", &SimulationResult::heavy_count)
        .def("trace_csv", [](const SimulationResult& r) {
            std::ostringstream out;
            write_trace_csv(out, r.trace);
            return out.str();
        });

    py::class_<Grid>(m, "Grid")
        .def(py::init([](std::vector<double> alpha, std::vector<double> a0_s) {
                 return Grid{std::move(alpha), std::move(a0_s)};
             }),
             py::arg("alpha"), py::arg("a0_s"))
        .def_readwrite("alpha", &Grid::alpha)
        .def_readwrite("a0_s", &Grid::a0_s)
        .def("cells", &Grid::cells);

    py::class_<GainMap>(m, "GainMap")
        .def_readonly("grid", &GainMap::grid)
        .def_readonly("regime", &GainMap::regime)
        .def_readonly("controller", &GainMap::controller)
        .def_readonly("values", &GainMap::values)
        .def("at", &GainMap::at)
        .def("positive_cells", &GainMap::positive_cells);

    py::class_<RunConfig>(m, "RunConfig")
        .def(py::init<>())
        .def("set", [](RunConfig& c, const std::string& key, const std::string& value) { apply_setting(c, key, value); })
        .def("validate", &RunConfig::validate)
        .def("to_text", &to_config_text)
        .def("scenario", &RunConfig::scenario)
        .def_readwrite("out_dir", &RunConfig::out_dir)
        .def_readwrite("workers", &RunConfig::workers)
        .def(py::self == py::self);

    m.def("l2_of_age", [](const DriftModel& d, double age) { return l2_of_age(d, age).value(); }, py::arg("model"),
          py::arg("age_s"));
    m.def("age_of_l2", py::overload_cast<const DriftModel&, double>(&age_of_l2), py::arg("model"), py::arg("l2"));
    m.def("q_eff", py::overload_cast<const ProgressModel&, double>(&q_eff), py::arg("model"), py::arg("l2"));
    m.def("calibration_duration", &calibration_duration, py::arg("primitive"), py::arg("regime"));
    m.def("l3", &l3, py::arg("form"), py::arg("tau_s"), py::arg("primitive"));
    m.def("realized_recovery_factor", &realized_recovery_factor, py::arg("primitive"), py::arg("regime"),
          py::arg("mode"), py::arg("form") = RealizabilityForm::rational);
    m.def(
        "apply_recovery",
        [](double age_s, const CalibrationPrimitive& p, const LatencyRegime& r, ExecutionMode mode,
           RealizabilityForm form, const DriftModel& d) {
            const RecoveryOutcome out = apply_recovery({age_s}, p, r, mode, form, d);
            return py::make_tuple(out.state.age_s, out.elapsed_s);
        },
        py::arg("age_s"), py::arg("primitive"), py::arg("regime"), py::arg("mode") = ExecutionMode::runtime,
        py::arg("form") = RealizabilityForm::rational, py::arg("drift") = DriftModel{});
    m.def("l4_throughput", &l4_throughput, py::arg("primitive"), py::arg("regime"), py::arg("t_alg_s"));

    m.def("run", &run, py::arg("scenario"), py::arg("policy"), py::call_guard<py::gil_scoped_release>());
    m.def("reference_family", py::overload_cast<>(&reference_family));
    m.def(
        "delta_open",
        [](const SimulationResult& runtime, const std::vector<SimulationResult>& refs) { return delta_open(runtime, refs); },
        py::arg("runtime"), py::arg("references"));
    m.def(
        "best_reference_mean_gap",
        [](const Scenario& s, const std::vector<Policy>& refs) { return best_reference_mean_gap(s, refs); },
        py::arg("scenario"), py::arg("references"));
    m.def("default_grid", &default_grid);
    m.def(
        "gain_map",
        [](const Scenario& base, const Policy& controller, const Grid& grid, std::vector<Policy> refs,
           unsigned workers) {
            if (refs.empty()) refs = reference_family();
            py::gil_scoped_release release;
            return gain_map(base, controller, grid, refs, workers);
        },
        py::arg("base"), py::arg("controller"), py::arg("grid"), py::arg("references") = std::vector<Policy>{},
        py::arg("workers") = 1u);

    m.def(
        "load_config", [](const std::string& path) { return load_config(path); }, py::arg("path") = std::string{});
    m.def("parse_config", &parse_config, py::arg("text"));
    m.def(
        "dispatch",
        [](const std::string& subcommand, const RunConfig& config) {
            std::ostringstream log;
            std::vector<std::filesystem::path> files;
            {
                py::gil_scoped_release release;
                files = dispatch(subcommand, config, log);
            }
            std::vector<std::string> out;
            for (const auto& f : files) out.push_back(f.string());
            return out;
        },
        py::arg("subcommand"), py::arg("config"));
}
