#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "reeblab/correspondence.hpp"
#include "reeblab/initial_data.hpp"
#include "reeblab/io.hpp"

namespace py = pybind11;
using namespace reeblab;

namespace {

Model model_arg(const std::string& id) { return model_from_id(id); }

SigmaVec vec_arg(const std::vector<double>& v) {
    SigmaVec out{};
    for (std::size_t i = 0; i < v.size() && i < 4; ++i) out[i] = v[i];
    return out;
}

std::string status_name(FlowStatus st) {
    switch (st) {
        case FlowStatus::Converged: return "converged";
        case FlowStatus::MaxSteps: return "max_steps";
        case FlowStatus::Diverged: return "diverged";
    }
    return "?";
}

}  // namespace

PYBIND11_MODULE(_reeblab, m) {
    m.doc() = "flow-equation laboratory on symplectizations of contact manifolds";

    py::class_<ScalingRule>(m, "ScalingRule")
        .def_static("theta", &ScalingRule::theta_rule, py::arg("theta"))
        .def_static("rabinowitz", &ScalingRule::rabinowitz, py::arg("tau0"))
        .def_static("constrained_area", &ScalingRule::constrained_area)
        .def_readonly("theta_value", &ScalingRule::theta)
        .def_readonly("tau_value", &ScalingRule::tau);

    py::class_<DiscreteLoop>(m, "DiscreteLoop")
        .def(py::init([](const std::string& model, std::vector<double> r,
                         std::vector<double> z) {
                 return DiscreteLoop(model_arg(model), std::move(r), std::move(z));
             }),
             py::arg("model"), py::arg("r"), py::arg("z"))
        .def_property_readonly(
            "model", [](const DiscreteLoop& v) { return std::string(model_id(v.model())); })
        .def_property_readonly("N", &DiscreteLoop::size)
        .def_property_readonly("r", [](const DiscreteLoop& v) { return v.r_data(); })
        .def_property_readonly("z", [](const DiscreteLoop& v) { return v.z_data(); });

    py::class_<TangentField>(m, "TangentField")
        .def_readonly("dr", &TangentField::dr)
        .def_readonly("w", &TangentField::w)
        .def("sup_norm", &TangentField::sup_norm);

    py::class_<ValidationReport>(m, "ValidationReport")
        .def_readonly("n_samples", &ValidationReport::n_samples)
        .def_readonly("max_lambda_reeb_err", &ValidationReport::max_lambda_reeb_err)
        .def_readonly("max_dlambda_reeb", &ValidationReport::max_dlambda_reeb)
        .def_readonly("max_J_squared_err", &ValidationReport::max_J_squared_err)
        .def_readonly("min_compatibility", &ValidationReport::min_compatibility)
        .def_readonly("passed", &ValidationReport::passed);

    py::class_<GradReport>(m, "GradReport")
        .def_readonly("directional_fd", &GradReport::directional_fd)
        .def_readonly("inner_with_grad", &GradReport::inner_with_grad)
        .def_readonly("rel_error", &GradReport::rel_error);

    py::class_<FlowConfig>(m, "FlowConfig")
        .def(py::init<>())
        .def_readwrite("rule", &FlowConfig::rule)
        .def_readwrite("ds", &FlowConfig::ds)
        .def_readwrite("max_steps", &FlowConfig::max_steps)
        .def_readwrite("grad_tol", &FlowConfig::grad_tol)
        .def_readwrite("record_every", &FlowConfig::record_every)
        .def_readwrite("reproject", &FlowConfig::reproject)
        .def_readwrite("backward", &FlowConfig::backward)
        .def_property(
            "integrator",
            [](const FlowConfig& c) {
                return c.integrator == IntegratorKind::Euler ? "euler" : "rk4";
            },
            [](FlowConfig& c, const std::string& name) {
                c.integrator = name == "euler" ? IntegratorKind::Euler : IntegratorKind::RK4;
            });

    py::class_<Trajectory>(m, "Trajectory")
        .def_property_readonly("status",
                               [](const Trajectory& t) { return status_name(t.status); })
        .def_readonly("steps_taken", &Trajectory::steps_taken)
        .def_readonly("s_values", &Trajectory::s_values)
        .def_readonly("loops", &Trajectory::loops)
        .def_readonly("actions", &Trajectory::actions)
        .def_readonly("grad_norms", &Trajectory::grad_norms)
        .def_readonly("multiplier", &Trajectory::multiplier)
        .def_property_readonly("step_series", [](const Trajectory& t) {
            std::vector<std::tuple<double, double, double, double>> out;
            out.reserve(t.series.size());
            for (const StepRecord& r : t.series)
                out.emplace_back(r.s, r.action, r.grad_norm, r.tau);
            return out;
        });

    py::class_<CriticalReport>(m, "CriticalReport")
        .def_readonly("converged", &CriticalReport::converged)
        .def_readonly("steps", &CriticalReport::steps)
        .def_readonly("r_bar", &CriticalReport::r_bar)
        .def_readonly("r_flatness", &CriticalReport::r_flatness)
        .def_readonly("reeb_residual", &CriticalReport::reeb_residual)
        .def_readonly("action", &CriticalReport::action)
        .def_readonly("action_formula_gap", &CriticalReport::action_formula_gap);

    py::class_<Lemma2Report>(m, "Lemma2Report")
        .def_readonly("min_dtau", &Lemma2Report::min_dtau)
        .def_readonly("strict_bound_ok", &Lemma2Report::strict_bound_ok)
        .def_readonly("window_bound", &Lemma2Report::window_bound)
        .def_readonly("window_bound_ok", &Lemma2Report::window_bound_ok)
        .def_readonly("der_residual_max", &Lemma2Report::der_residual_max);

    py::class_<ScalarSeries>(m, "ScalarSeries")
        .def(py::init([](std::vector<double> s, std::vector<double> values) {
                 ScalarSeries out;
                 out.s = std::move(s);
                 out.values = std::move(values);
                 return out;
             }),
             py::arg("s"), py::arg("values"))
        .def_readonly("s", &ScalarSeries::s)
        .def_readonly("values", &ScalarSeries::values);

    py::class_<InverseDResult>(m, "InverseDResult")
        .def_readonly("sigma", &InverseDResult::sigma)
        .def_readonly("truncation_warning", &InverseDResult::truncation_warning);

    // contact model
    m.def(
        "validate_model",
        [](const std::string& id, int samples, std::uint64_t seed) {
            return validate_model(model_arg(id), samples, seed);
        },
        py::arg("model"), py::arg("n_samples") = 10000, py::arg("seed") = 1);

    // loop space
    m.def("mean_exp_r", &mean_exp_r);
    m.def("area", &area);
    m.def("constraint_residual", &constraint_residual);
    m.def("project_Pi", &project_Pi);
    m.def("d_dt", &d_dt);
    m.def("l2_inner", &l2_inner);
    m.def("loop_distance", &loop_distance);

    // functionals
    m.def("h", &h);
    m.def("h_prime", &h_prime);
    m.def("action_theta", &action_theta);
    m.def("action_rabinowitz", &action_rabinowitz);
    m.def("action_area", &action_area);
    m.def("scaling_tau", &scaling_tau);
    m.def("grad", &grad);
    m.def("grad_check", &grad_check, py::arg("v"), py::arg("rule"), py::arg("vhat"),
          py::arg("eps") = 1e-4);

    // flow engine
    m.def("flow_step", &flow_step, py::arg("v"), py::arg("rule"), py::arg("ds"),
          py::arg("reproject") = true);
    m.def("integrate", &integrate);
    m.def("find_critical", &find_critical);
    m.def("energy", &energy);
    m.def("multiplier_law_residual", &multiplier_law_residual);

    // correspondence
    m.def("tau_series", &tau_series);
    m.def("verify_der", &verify_der);
    m.def("verify_lemma2", &verify_lemma2);
    m.def("verify_laplacian", &verify_laplacian);
    m.def("pushforward_Pi", &pushforward_Pi);
    m.def("gradrab2_residual", &gradrab2_residual);
    m.def("gradvd_residual", &gradvd_residual);
    m.def("inverse_D", &inverse_D);
    m.def("lift_R", &lift_R);
    m.def("roundtrip_check", &roundtrip_check);

    // initial data
    m.def(
        "constant_loop",
        [](const std::string& id, int n, double r0, const std::vector<double>& base) {
            return constant_loop(model_arg(id), n, r0, vec_arg(base));
        },
        py::arg("model"), py::arg("N"), py::arg("r0"),
        py::arg("base") = std::vector<double>{1.0, 0.0, 0.0, 0.0});
    m.def(
        "reeb_orbit_loop",
        [](const std::string& id, int n, int k, double r0, const std::vector<double>& base) {
            return reeb_orbit_loop(model_arg(id), n, k, r0, vec_arg(base));
        },
        py::arg("model"), py::arg("N"), py::arg("k"), py::arg("r0"),
        py::arg("base") = std::vector<double>{1.0, 0.0, 0.0, 0.0});
    m.def(
        "perturbed_loop",
        [](const DiscreteLoop& base, int modes, double amplitude, bool stable_pair,
           std::uint64_t seed) {
            PerturbationSpec spec;
            spec.modes = modes;
            spec.amplitude = amplitude;
            spec.stable_pair = stable_pair;
            spec.seed = seed;
            return perturbed_loop(base, spec);
        },
        py::arg("base"), py::arg("modes") = 3, py::arg("amplitude") = 0.01,
        py::arg("stable_pair") = true, py::arg("seed") = 0);
    m.def("shift_tau_stationary", &shift_tau_stationary);
    m.def(
        "random_loop",
        [](const std::string& id, int n, int modes, double amplitude, std::uint64_t seed) {
            return random_loop(model_arg(id), n, modes, amplitude, seed);
        },
        py::arg("model"), py::arg("N"), py::arg("modes") = 3, py::arg("amplitude") = 0.2,
        py::arg("seed") = 0);
    m.def("random_tangent_field", &random_tangent_field, py::arg("v"), py::arg("modes") = 3,
          py::arg("amplitude") = 0.2, py::arg("seed") = 0);

    // serialization
    m.def(
        "save_trajectory",
        [](const Trajectory& traj, const std::filesystem::path& dir) {
            write_trajectory_jsonl(dir / "trajectory.jsonl", traj);
            write_series_csv(dir / "series.csv", traj);
            write_trajectory_meta(dir / "trajectory.meta.json", traj, {});
        },
        py::arg("trajectory"), py::arg("directory"));
    m.def("load_trajectory", &read_trajectory, py::arg("jsonl_path"));
    m.def("loop_to_json", [](const DiscreteLoop& v) { return loop_to_json(v).dump(); });
    m.def("loop_from_json",
          [](const std::string& text) { return loop_from_json(json::parse(text)); });

    py::register_exception<OffConstraintError>(m, "OffConstraintError", PyExc_ValueError);
}
