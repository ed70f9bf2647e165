#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "reeblab/experiment.hpp"
#include "reeblab/initial_data.hpp"

using namespace reeblab;

namespace {

std::filesystem::path temp_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "reeblab_tests" / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

}  // namespace

TEST_CASE("config parsing: flat file, json, unknown keys") {
    const std::string flat = R"(# cylinder oracle
model = cyl
N = 64
rule = theta
theta = 1.0
integrator = rk4
ds = 1e-3
max_steps = 50
record_every = 5
seed = 7
initial = constant
r0 = 0.5
output_dir = out
)";
    const ExperimentConfig a = parse_config_text(flat);
    CHECK(a.model == "cyl");
    CHECK(a.N == 64);
    CHECK(a.theta == 1.0);
    CHECK(a.ds == 1e-3);
    CHECK(a.record_every == 5);
    CHECK(a.seed == 7);
    CHECK(a.r0 == 0.5);

    const ExperimentConfig b = parse_config_text(
        R"({"model": "s3", "N": 32, "rule": "rabinowitz", "tau0": 0.25, "max_steps": 10})");
    CHECK(b.model == "s3");
    CHECK(b.tau0 == 0.25);

    CHECK_THROWS_AS(parse_config_text("model = s3\nbogus_key = 1\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_text("model = mars\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_text("model = s3\nN = 7\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_text("rule = theta\ntheta = 1.5\n"), std::domain_error);
}

TEST_CASE("loop json round-trip preserves coordinates") {
    const DiscreteLoop v = random_loop(Model::Sphere3, 64, 3, 0.3, 321);
    const DiscreteLoop back = loop_from_json(loop_to_json(v));
    CHECK(back.model() == v.model());
    CHECK(back.size() == v.size());
    CHECK(loop_distance(v, back) <= 1e-15);
}

TEST_CASE("trajectory write/read round-trip") {
    const auto dir = temp_dir("roundtrip");
    const DiscreteLoop v0 = constant_loop(Model::Cylinder1, 16, 0.4, {});
    FlowConfig cfg;
    cfg.rule = ScalingRule::theta_rule(1.0);
    cfg.ds = 1e-3;
    cfg.max_steps = 20;
    cfg.grad_tol = 1e-12;
    const Trajectory traj = integrate(v0, cfg);

    write_trajectory_jsonl(dir / "t.jsonl", traj);
    write_trajectory_meta(dir / "t.meta.json", traj, {});
    const Trajectory back = read_trajectory(dir / "t.jsonl");

    REQUIRE(back.loops.size() == traj.loops.size());
    for (std::size_t i = 0; i < traj.loops.size(); ++i) {
        CHECK(loop_distance(back.loops[i], traj.loops[i]) <= 1e-15);
        CHECK(back.s_values[i] == traj.s_values[i]);
        CHECK(back.actions[i] == traj.actions[i]);
    }
    CHECK(back.config.rule.kind == ScalingRule::Kind::Theta);
    CHECK(back.config.rule.theta == 1.0);
    CHECK_FALSE(back.multiplier.has_value());
}

TEST_CASE("run_validate exit codes") {
    std::ostringstream out;
    CHECK(run_validate("s3", 2000, 1, out) == exit_code::ok);
    CHECK(run_validate("cyl", 2000, 1, out) == exit_code::ok);
    CHECK(run_validate("bogus", 100, 1, out) == exit_code::usage);
}

TEST_CASE("run_flow writes outputs and is byte-deterministic") {
    const auto dir = temp_dir("flow");
    ExperimentConfig cfg;
    cfg.model = "cyl";
    cfg.N = 64;
    cfg.rule = "theta";
    cfg.theta = 1.0;
    cfg.ds = 1e-3;
    cfg.max_steps = 200;
    cfg.grad_tol = 1e-12;
    cfg.record_every = 10;
    cfg.seed = 5;
    cfg.initial = "perturbed";
    cfg.amplitude = 1e-3;
    cfg.output_dir = (dir / "a").string();

    std::ostringstream out;
    CHECK(run_flow(cfg, out) == exit_code::ok);
    CHECK(std::filesystem::exists(dir / "a" / "trajectory.jsonl"));
    CHECK(std::filesystem::exists(dir / "a" / "series.csv"));
    CHECK(std::filesystem::exists(dir / "a" / "trajectory.meta.json"));

    const std::string csv = slurp(dir / "a" / "series.csv");
    CHECK(csv.rfind("s,action,grad_norm,tau\n", 0) == 0);

    cfg.output_dir = (dir / "b").string();
    std::ostringstream out2;
    CHECK(run_flow(cfg, out2) == exit_code::ok);
    CHECK(slurp(dir / "b" / "series.csv") == csv);  // identical config + seed

    // the cylinder oracle value at the end of the window
    ExperimentConfig oracle = cfg;
    oracle.initial = "constant";
    oracle.r0 = 0.5;
    oracle.max_steps = 5000;
    oracle.output_dir = (dir / "c").string();
    std::ostringstream out3;
    CHECK(run_flow(oracle, out3) == exit_code::ok);
    const Trajectory traj = read_trajectory(dir / "c" / "trajectory.jsonl");
    CHECK(std::abs(traj.loops.back().r(0) - 0.5 * std::exp(-5.0)) <= 1e-6);

    // max_steps = 0 still writes the initial slice
    ExperimentConfig empty = cfg;
    empty.max_steps = 0;
    empty.output_dir = (dir / "d").string();
    std::ostringstream out4;
    CHECK(run_flow(empty, out4) == exit_code::ok);
    CHECK(read_trajectory(dir / "d" / "trajectory.jsonl").loops.size() == 1);
}

TEST_CASE("run_verify dispatch and rule gating") {
    const auto dir = temp_dir("verify");
    ExperimentConfig cfg;
    cfg.model = "s3";
    cfg.N = 64;
    cfg.rule = "theta";
    cfg.theta = 1.0;
    cfg.ds = 1e-3;
    cfg.max_steps = 40;
    cfg.grad_tol = -1.0;
    cfg.seed = 11;
    cfg.initial = "perturbed";
    cfg.amplitude = 5e-3;
    cfg.pair = true;
    cfg.tau_stationary = true;
    cfg.output_dir = dir.string();
    std::ostringstream sink;
    REQUIRE(run_flow(cfg, sink) == exit_code::ok);
    const auto traj_file = dir / "trajectory.jsonl";

    std::ostringstream out;
    CHECK(run_verify(traj_file, "der", 1e-3, out) == exit_code::ok);
    CHECK(run_verify(traj_file, "lemma2", 1e-3, out) == exit_code::ok);
    CHECK(run_verify(traj_file, "laplacian", 1e-3, out) == exit_code::ok);
    CHECK(run_verify(traj_file, "roundtrip", 1e-3, out) == exit_code::ok);
    // a delay-flow trajectory is off the constraint set: rab2 refuses
    CHECK(run_verify(traj_file, "rab2", 1e-3, out) == exit_code::usage);
    CHECK(run_verify(traj_file, "unknown", 1e-3, out) == exit_code::usage);
    CHECK(run_verify(dir / "missing.jsonl", "der", 1e-3, out) == exit_code::usage);
}

TEST_CASE("run_bijection end to end") {
    const auto dir = temp_dir("bijection");
    ExperimentConfig cfg;
    cfg.model = "s3";
    cfg.N = 128;
    cfg.rule = "theta";
    cfg.theta = 1.0;
    cfg.integrator = "rk4";
    cfg.ds = 5e-4;
    cfg.max_steps = 120;
    cfg.grad_tol = -1.0;
    cfg.seed = 3;
    cfg.initial = "perturbed";
    cfg.amplitude = 8e-3;
    cfg.pair = true;
    cfg.tau_stationary = true;
    cfg.tol = 1e-3;
    cfg.output_dir = dir.string();

    std::ostringstream out;
    CHECK(run_bijection(cfg, out) == exit_code::ok);
    const json rep = json::parse(out.str());
    CHECK(rep.at("passed").get<bool>());
    CHECK(rep.at("gradrab2_residual").get<double>() <= 1e-3);
    CHECK(rep.at("roundtrip_R_after_Pi").get<double>() <= 1e-3);
    CHECK(rep.at("roundtrip_Pi_after_R").get<double>() <= 1e-3);

    ExperimentConfig bad = cfg;
    bad.theta = 0.5;
    std::ostringstream out2;
    CHECK(run_bijection(bad, out2) == exit_code::usage);
}

TEST_CASE("run_batch aggregates over workers") {
    const auto dir = temp_dir("batch");
    const std::string good = "model = cyl\nN = 32\nrule = theta\ntheta = 1\nds = 1e-3\n"
                             "max_steps = 20\ninitial = constant\nr0 = 0.3\noutput_dir = " +
                             (dir / "g").string() + "\n";
    const std::string bad = "model = cyl\nbogus = 1\n";
    spit(dir / "good1.cfg", good);
    spit(dir / "good2.cfg", good);
    spit(dir / "bad.cfg", bad);

    std::ostringstream out;
    CHECK(run_batch({dir / "good1.cfg", dir / "good2.cfg"}, 2, out) == exit_code::ok);

    std::ostringstream out2;
    CHECK(run_batch({dir / "good1.cfg", dir / "bad.cfg"}, 2, out2) ==
          exit_code::check_failed);

    std::ostringstream out3;
    CHECK(run_batch({}, 2, out3) == exit_code::usage);
}
