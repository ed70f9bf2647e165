#include "reeblab/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace reeblab {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);  // binary: byte-identical outputs
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    return out;
}

std::string rule_name(const ScalingRule& rule) {
    switch (rule.kind) {
        case ScalingRule::Kind::Theta: return "theta";
        case ScalingRule::Kind::RabinowitzMultiplier: return "rabinowitz";
        case ScalingRule::Kind::ConstrainedArea: return "constrained_area";
    }
    return "?";
}

ScalingRule rule_from_json(const json& j) {
    const std::string name = j.at("rule").get<std::string>();
    if (name == "theta") return ScalingRule::theta_rule(j.at("theta").get<double>());
    if (name == "rabinowitz") return ScalingRule::rabinowitz(j.at("tau0").get<double>());
    if (name == "constrained_area") return ScalingRule::constrained_area();
    throw std::invalid_argument("unknown rule: " + name);
}

}  // namespace

std::string format_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

json loop_to_json(const DiscreteLoop& v) {
    return json{{"model", std::string(model_id(v.model()))},
                {"N", v.size()},
                {"r", v.r_data()},
                {"z", v.z_data()}};
}

DiscreteLoop loop_from_json(const json& j) {
    const Model m = model_from_id(j.at("model").get<std::string>());
    auto r = j.at("r").get<std::vector<double>>();
    auto z = j.at("z").get<std::vector<double>>();
    if (static_cast<int>(r.size()) != j.at("N").get<int>())
        throw std::invalid_argument("loop_from_json: N mismatch");
    return DiscreteLoop(m, std::move(r), std::move(z));
}

json validation_report_to_json(const ValidationReport& rep) {
    return json{{"n_samples", rep.n_samples},
                {"max_lambda_reeb_err", rep.max_lambda_reeb_err},
                {"max_dlambda_reeb", rep.max_dlambda_reeb},
                {"max_J_squared_err", rep.max_J_squared_err},
                {"min_compatibility", rep.min_compatibility},
                {"passed", rep.passed}};
}

json critical_report_to_json(const CriticalReport& rep) {
    return json{{"converged", rep.converged},
                {"steps", rep.steps},
                {"r_bar", rep.r_bar},
                {"r_flatness", rep.r_flatness},
                {"reeb_residual", rep.reeb_residual},
                {"action", rep.action},
                {"action_formula_gap", rep.action_formula_gap}};
}

json lemma2_report_to_json(const Lemma2Report& rep) {
    return json{{"min_dtau", rep.min_dtau},
                {"strict_bound_ok", rep.strict_bound_ok},
                {"window_bound", rep.window_bound},
                {"window_bound_ok", rep.window_bound_ok},
                {"der_residual_max", rep.der_residual_max}};
}

json flow_config_to_json(const FlowConfig& cfg) {
    json j{{"rule", rule_name(cfg.rule)},
           {"ds", cfg.ds},
           {"max_steps", cfg.max_steps},
           {"grad_tol", cfg.grad_tol},
           {"integrator", cfg.integrator == IntegratorKind::Euler ? "euler" : "rk4"},
           {"record_every", cfg.record_every},
           {"reproject", cfg.reproject},
           {"backward", cfg.backward}};
    if (cfg.rule.kind == ScalingRule::Kind::Theta) j["theta"] = cfg.rule.theta;
    if (cfg.rule.kind == ScalingRule::Kind::RabinowitzMultiplier) j["tau0"] = cfg.rule.tau;
    return j;
}

FlowConfig flow_config_from_json(const json& j) {
    FlowConfig cfg;
    cfg.rule = rule_from_json(j);
    cfg.ds = j.at("ds").get<double>();
    cfg.max_steps = j.at("max_steps").get<long>();
    cfg.grad_tol = j.at("grad_tol").get<double>();
    cfg.integrator = j.at("integrator").get<std::string>() == "euler"
                         ? IntegratorKind::Euler
                         : IntegratorKind::RK4;
    cfg.record_every = j.at("record_every").get<int>();
    cfg.reproject = j.value("reproject", true);
    cfg.backward = j.value("backward", false);
    return cfg;
}

void write_trajectory_jsonl(const std::filesystem::path& path, const Trajectory& traj) {
    std::ofstream out = open_out(path);
    for (std::size_t i = 0; i < traj.loops.size(); ++i) {
        json rec{{"s", traj.s_values[i]},
                 {"action", traj.actions[i]},
                 {"grad_norm", traj.grad_norms[i]},
                 {"loop", loop_to_json(traj.loops[i])}};
        rec["tau"] = traj.multiplier ? json((*traj.multiplier)[i]) : json(nullptr);
        out << rec.dump() << "\n";
    }
}

void write_series_csv(const std::filesystem::path& path, const Trajectory& traj) {
    std::ofstream out = open_out(path);
    out << "s,action,grad_norm,tau\n";
    for (const StepRecord& rec : traj.series) {
        out << format_g17(rec.s) << ',' << format_g17(rec.action) << ','
            << format_g17(rec.grad_norm) << ',';
        if (std::isfinite(rec.tau)) out << format_g17(rec.tau);
        out << "\n";
    }
}

void write_trajectory_meta(const std::filesystem::path& path, const Trajectory& traj,
                           const json& extra) {
    json j{{"model", std::string(model_id(traj.model))},
           {"config", flow_config_to_json(traj.config)},
           {"status", traj.status == FlowStatus::Converged  ? "converged"
                      : traj.status == FlowStatus::MaxSteps ? "max_steps"
                                                            : "diverged"},
           {"steps_taken", traj.steps_taken},
           {"rng", "mt19937_64"}};
    for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
    std::ofstream out = open_out(path);
    out << j.dump(2) << "\n";
}

Trajectory read_trajectory(const std::filesystem::path& jsonl_path) {
    std::filesystem::path meta_path = jsonl_path;
    meta_path.replace_extension();  // drop .jsonl
    meta_path += ".meta.json";

    Trajectory traj;
    {
        std::ifstream in(meta_path);
        if (!in) throw std::runtime_error("missing trajectory sidecar: " + meta_path.string());
        json j = json::parse(in);
        traj.model = model_from_id(j.at("model").get<std::string>());
        traj.config = flow_config_from_json(j.at("config"));
        const std::string st = j.value("status", "max_steps");
        traj.status = st == "converged"  ? FlowStatus::Converged
                      : st == "diverged" ? FlowStatus::Diverged
                                         : FlowStatus::MaxSteps;
        traj.steps_taken = j.value("steps_taken", 0L);
    }

    std::ifstream in(jsonl_path);
    if (!in) throw std::runtime_error("cannot open trajectory: " + jsonl_path.string());
    std::string line;
    bool any_tau = false;
    std::vector<double> taus;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json rec = json::parse(line);
        traj.s_values.push_back(rec.at("s").get<double>());
        traj.actions.push_back(rec.at("action").get<double>());
        traj.grad_norms.push_back(rec.at("grad_norm").get<double>());
        traj.loops.push_back(loop_from_json(rec.at("loop")));
        if (rec.contains("tau") && !rec.at("tau").is_null()) {
            any_tau = true;
            taus.push_back(rec.at("tau").get<double>());
        } else {
            taus.push_back(0.0);
        }
    }
    if (any_tau) traj.multiplier = std::move(taus);
    return traj;
}

void write_series_csv(const std::filesystem::path& path, const ScalarSeries& series,
                      const std::string& value_name) {
    std::ofstream out = open_out(path);
    out << "s," << value_name << "\n";
    for (std::size_t i = 0; i < series.s.size(); ++i)
        out << format_g17(series.s[i]) << ',' << format_g17(series.values[i]) << "\n";
}

}  // namespace reeblab
