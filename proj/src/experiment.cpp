#include "reeblab/experiment.hpp"

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "reeblab/initial_data.hpp"

namespace reeblab {

namespace {

int log_level() {
    static const int level = [] {
        const char* env = std::getenv("REEBLAB_LOG");
        if (!env) return 1;
        const std::string v(env);
        if (v == "quiet") return 0;
        if (v == "debug") return 2;
        return 1;
    }();
    return level;
}

std::vector<double> parse_vector(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    return out;
}

void apply_key(ExperimentConfig& cfg, const std::string& key, const json& value) {
    auto as_bool = [&]() {
        if (value.is_boolean()) return value.get<bool>();
        const std::string s = value.get<std::string>();
        return s == "true" || s == "1" || s == "yes";
    };
    auto as_double = [&]() {
        return value.is_number() ? value.get<double>() : std::stod(value.get<std::string>());
    };
    auto as_long = [&]() {
        return value.is_number() ? value.get<long>() : std::stol(value.get<std::string>());
    };
    auto as_string = [&]() { return value.get<std::string>(); };

    if (key == "model") cfg.model = as_string();
    else if (key == "N") cfg.N = static_cast<int>(as_long());
    else if (key == "rule") cfg.rule = as_string();
    else if (key == "theta") cfg.theta = as_double();
    else if (key == "tau0") cfg.tau0 = as_double();
    else if (key == "integrator") cfg.integrator = as_string();
    else if (key == "ds") cfg.ds = as_double();
    else if (key == "grad_tol") cfg.grad_tol = as_double();
    else if (key == "max_steps") cfg.max_steps = as_long();
    else if (key == "record_every") cfg.record_every = static_cast<int>(as_long());
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(as_long());
    else if (key == "reproject") cfg.reproject = as_bool();
    else if (key == "backward") cfg.backward = as_bool();
    else if (key == "initial") cfg.initial = as_string();
    else if (key == "r0") cfg.r0 = as_double();
    else if (key == "base_point")
        cfg.base_point = value.is_array() ? value.get<std::vector<double>>()
                                          : parse_vector(value.get<std::string>());
    else if (key == "k") cfg.k = static_cast<int>(as_long());
    else if (key == "modes") cfg.modes = static_cast<int>(as_long());
    else if (key == "amplitude") cfg.amplitude = as_double();
    else if (key == "pair") cfg.pair = as_bool();
    else if (key == "tau_stationary") cfg.tau_stationary = as_bool();
    else if (key == "tol") cfg.tol = as_double();
    else if (key == "output_dir") cfg.output_dir = as_string();
    else throw std::invalid_argument("unknown config key: " + key);
}

void validate_config(const ExperimentConfig& cfg) {
    model_from_id(cfg.model);  // throws on unknown model
    if (cfg.rule != "theta" && cfg.rule != "rabinowitz" && cfg.rule != "constrained_area")
        throw std::invalid_argument("unknown rule: " + cfg.rule);
    if (cfg.integrator != "euler" && cfg.integrator != "rk4")
        throw std::invalid_argument("unknown integrator: " + cfg.integrator);
    if (cfg.initial != "constant" && cfg.initial != "reeb_orbit" && cfg.initial != "perturbed")
        throw std::invalid_argument("unknown initial variant: " + cfg.initial);
    if (cfg.rule == "theta") ScalingRule::theta_rule(cfg.theta);
    if (cfg.N < 8 || cfg.N % 2 != 0)
        throw std::invalid_argument("N must be even and >= 8");
    if (cfg.ds <= 0.0 || cfg.max_steps < 0 || cfg.record_every < 1)
        throw std::invalid_argument("invalid flow parameters");
}

}  // namespace

bool log_enabled(int level) { return log_level() >= level; }

void log_line(int level, const std::string& msg) {
    if (log_enabled(level)) std::cerr << "[reeblab] " << msg << "\n";
}

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        const json j = json::parse(text);
        for (auto it = j.begin(); it != j.end(); ++it) apply_key(cfg, it.key(), it.value());
    } else {
        std::stringstream ss(text);
        std::string line;
        while (std::getline(ss, line)) {
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            const auto eq = line.find('=');
            if (eq == std::string::npos) {
                if (line.find_first_not_of(" \t\r") != std::string::npos)
                    throw std::invalid_argument("config line without '=': " + line);
                continue;
            }
            auto trim = [](std::string s) {
                const auto a = s.find_first_not_of(" \t\r");
                const auto b = s.find_last_not_of(" \t\r");
                return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
            };
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (key.empty()) throw std::invalid_argument("empty config key");
            apply_key(cfg, key, json(value));
        }
    }
    validate_config(cfg);
    return cfg;
}

ExperimentConfig parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

FlowConfig to_flow_config(const ExperimentConfig& cfg) {
    FlowConfig fc;
    if (cfg.rule == "theta") fc.rule = ScalingRule::theta_rule(cfg.theta);
    else if (cfg.rule == "rabinowitz") fc.rule = ScalingRule::rabinowitz(cfg.tau0);
    else fc.rule = ScalingRule::constrained_area();
    fc.ds = cfg.ds;
    fc.max_steps = cfg.max_steps;
    fc.grad_tol = cfg.grad_tol;
    fc.integrator = cfg.integrator == "euler" ? IntegratorKind::Euler : IntegratorKind::RK4;
    fc.record_every = cfg.record_every;
    fc.reproject = cfg.reproject;
    fc.backward = cfg.backward;
    return fc;
}

DiscreteLoop build_initial_loop(const ExperimentConfig& cfg) {
    const Model m = model_from_id(cfg.model);
    SigmaVec base{};
    if (!cfg.base_point.empty()) {
        for (std::size_t i = 0; i < cfg.base_point.size() && i < 4; ++i)
            base[i] = cfg.base_point[i];
    } else {
        base = random_base_point(m, cfg.seed ^ 0xb5297a4d3f8c2d01ull);
    }

    DiscreteLoop v = cfg.initial == "reeb_orbit" || (cfg.initial == "perturbed" && cfg.k != 0)
                         ? reeb_orbit_loop(m, cfg.N, cfg.k, cfg.r0, base)
                         : constant_loop(m, cfg.N, cfg.r0, base);
    if (cfg.initial == "perturbed") {
        PerturbationSpec spec;
        spec.modes = cfg.modes;
        spec.amplitude = cfg.amplitude;
        spec.stable_pair = cfg.pair;
        spec.seed = cfg.seed;
        v = perturbed_loop(v, spec);
    }
    if (cfg.tau_stationary) v = shift_tau_stationary(v);
    if (cfg.rule == "constrained_area") v = project_Pi(v);
    return v;
}

int run_validate(const std::string& model_id_str, int samples, std::uint64_t seed,
                 std::ostream& out) {
    Model m;
    try {
        m = model_from_id(model_id_str);
    } catch (const std::exception& e) {
        out << json{{"error", e.what()}}.dump(2) << "\n";
        return exit_code::usage;
    }
    const ValidationReport rep = validate_model(m, samples, seed);
    out << validation_report_to_json(rep).dump(2) << "\n";
    return rep.passed ? exit_code::ok : exit_code::check_failed;
}

int run_flow(const ExperimentConfig& cfg, std::ostream& out) {
    log_line(1, "flow: model=" + cfg.model + " rule=" + cfg.rule + " N=" +
                    std::to_string(cfg.N) + " seed=" + std::to_string(cfg.seed));
    const DiscreteLoop v0 = build_initial_loop(cfg);
    const Trajectory traj = integrate(v0, to_flow_config(cfg));
    log_line(2, "flow: " + std::to_string(traj.steps_taken) + " steps, " +
                    std::to_string(traj.loops.size()) + " recorded slices");

    const std::filesystem::path dir(cfg.output_dir);
    write_trajectory_jsonl(dir / "trajectory.jsonl", traj);
    write_series_csv(dir / "series.csv", traj);
    write_trajectory_meta(dir / "trajectory.meta.json", traj,
                          json{{"seed", cfg.seed}, {"initial", cfg.initial}});

    json summary{{"status", traj.status == FlowStatus::Converged  ? "converged"
                            : traj.status == FlowStatus::MaxSteps ? "max_steps"
                                                                  : "diverged"},
                 {"steps", traj.steps_taken},
                 {"final_action", traj.actions.back()},
                 {"final_grad_norm", traj.grad_norms.back()},
                 {"final_s", traj.s_values.back()},
                 {"output_dir", cfg.output_dir}};
    out << summary.dump(2) << "\n";
    return traj.status == FlowStatus::Diverged ? exit_code::diverged : exit_code::ok;
}

int run_verify(const std::filesystem::path& trajectory_file, const std::string& which,
               double tol, std::ostream& out) {
    Trajectory traj;
    try {
        traj = read_trajectory(trajectory_file);
    } catch (const std::exception& e) {
        out << json{{"error", e.what()}}.dump(2) << "\n";
        return exit_code::usage;
    }
    try {
        json rep;
        bool pass = true;
        if (which == "der") {
            const double res = verify_der(traj);
            pass = res <= tol;
            rep = json{{"which", "der"}, {"max_residual", res}, {"tolerance", tol}};
        } else if (which == "lemma2") {
            const Lemma2Report l2 = verify_lemma2(traj);
            pass = l2.strict_bound_ok;
            rep = lemma2_report_to_json(l2);
            rep["which"] = "lemma2";
        } else if (which == "laplacian") {
            const double min_lap = verify_laplacian(traj);
            pass = min_lap >= -1.0 - 1e-2;
            rep = json{{"which", "laplacian"}, {"min_laplacian", min_lap}};
        } else if (which == "rab2") {
            const double res = gradrab2_residual(traj);
            pass = res <= tol;
            rep = json{{"which", "rab2"}, {"max_residual", res}, {"tolerance", tol}};
        } else if (which == "roundtrip") {
            const double dist = roundtrip_check(traj);
            pass = dist <= tol;
            rep = json{{"which", "roundtrip"}, {"sup_distance", dist}, {"tolerance", tol}};
        } else {
            out << json{{"error", "unknown check: " + which}}.dump(2) << "\n";
            return exit_code::usage;
        }
        rep["passed"] = pass;
        out << rep.dump(2) << "\n";
        return pass ? exit_code::ok : exit_code::check_failed;
    } catch (const std::invalid_argument& e) {
        out << json{{"error", e.what()}}.dump(2) << "\n";
        return exit_code::usage;
    } catch (const OffConstraintError& e) {
        out << json{{"error", e.what()}}.dump(2) << "\n";
        return exit_code::usage;
    }
}

int run_bijection(const ExperimentConfig& cfg, std::ostream& out) {
    if (cfg.rule != "theta" || cfg.theta != 1.0) {
        out << json{{"error", "bijection requires rule = theta with theta = 1"}}.dump(2)
            << "\n";
        return exit_code::usage;
    }
    const DiscreteLoop v0 = build_initial_loop(cfg);
    const Trajectory traj = integrate(v0, to_flow_config(cfg));
    if (traj.status == FlowStatus::Diverged) {
        out << json{{"error", "flow diverged"}}.dump(2) << "\n";
        return exit_code::diverged;
    }

    const Trajectory pushed = pushforward_Pi(traj);
    const double rab2_res = gradrab2_residual(pushed);
    const double dist_back = roundtrip_check(traj);    // R after Pi vs original
    const double dist_forth = roundtrip_check(pushed);  // Pi after R vs pushforward
    const Trajectory lifted = lift_R(pushed);
    const double lift_res = gradvd_residual(lifted);

    const bool pass = rab2_res <= cfg.tol && dist_back <= cfg.tol && dist_forth <= cfg.tol &&
                      lift_res <= cfg.tol;
    json rep{{"gradrab2_residual", rab2_res},
             {"roundtrip_R_after_Pi", dist_back},
             {"roundtrip_Pi_after_R", dist_forth},
             {"lift_gradvd_residual", lift_res},
             {"tolerance", cfg.tol},
             {"passed", pass}};
    out << rep.dump(2) << "\n";
    return pass ? exit_code::ok : exit_code::check_failed;
}

int run_batch(const std::vector<std::filesystem::path>& configs, int jobs,
              std::ostream& out) {
    if (configs.empty()) {
        out << json{{"error", "no config files"}}.dump(2) << "\n";
        return exit_code::usage;
    }
    if (jobs < 1) jobs = 1;
    log_line(1, "batch: " + std::to_string(configs.size()) + " experiments on " +
                    std::to_string(jobs) + " workers");

    std::vector<json> results(configs.size());
    std::atomic<std::size_t> next{0};
    std::atomic<bool> any_failed{false};

    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= configs.size()) return;
            json entry{{"config", configs[i].string()}};
            try {
                const ExperimentConfig cfg = parse_config_file(configs[i]);
                std::ostringstream sink;
                const int rc = run_flow(cfg, sink);
                entry["exit"] = rc;
                entry["summary"] = json::parse(sink.str());
                if (rc != exit_code::ok) any_failed = true;
            } catch (const std::exception& e) {
                entry["exit"] = exit_code::usage;
                entry["error"] = e.what();
                any_failed = true;
            }
            results[i] = std::move(entry);
        }
    };

    std::vector<std::thread> pool;
    const int nthreads = std::min<int>(jobs, static_cast<int>(configs.size()));
    pool.reserve(nthreads);
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();

    json rep{{"experiments", results}, {"failed", any_failed.load()}};
    out << rep.dump(2) << "\n";
    return any_failed ? exit_code::check_failed : exit_code::ok;
}

}  // namespace reeblab
