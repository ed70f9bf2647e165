#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "reeblab/io.hpp"

namespace reeblab {

/// Exit codes shared by the CLI commands.
namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int check_failed = 1;
inline constexpr int usage = 2;
inline constexpr int diverged = 3;
}  // namespace exit_code

/// Parsed experiment description. Accepts a flat key = value file or JSON
/// with the same keys; unknown keys are rejected.
struct ExperimentConfig {
    std::string model = "s3";
    int N = 256;
    std::string rule = "theta";  // theta | rabinowitz | constrained_area
    double theta = 1.0;
    double tau0 = 0.0;
    std::string integrator = "rk4";  // euler | rk4
    double ds = 1e-3;
    double grad_tol = 1e-8;
    long max_steps = 1000;
    int record_every = 1;
    std::uint64_t seed = 0;
    bool reproject = true;
    bool backward = false;

    std::string initial = "constant";  // constant | reeb_orbit | perturbed
    double r0 = 0.0;
    std::vector<double> base_point;  // empty: seeded random point
    int k = 0;                       // orbit winding (reeb_orbit / perturbed base)
    int modes = 3;
    double amplitude = 0.01;
    bool pair = true;             // stable-paired perturbation
    bool tau_stationary = false;  // apply the delay-stationary r shift

    double tol = 1e-3;  // bijection tolerances
    std::string output_dir = "out";
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::filesystem::path& path);

FlowConfig to_flow_config(const ExperimentConfig& cfg);
DiscreteLoop build_initial_loop(const ExperimentConfig& cfg);

/// Log level from REEBLAB_LOG (quiet | info | debug), default info.
bool log_enabled(int level);  // 1 = info, 2 = debug
void log_line(int level, const std::string& msg);

int run_validate(const std::string& model_id_str, int samples, std::uint64_t seed,
                 std::ostream& out);
int run_flow(const ExperimentConfig& cfg, std::ostream& out);
int run_verify(const std::filesystem::path& trajectory_file, const std::string& which,
               double tol, std::ostream& out);
int run_bijection(const ExperimentConfig& cfg, std::ostream& out);
int run_batch(const std::vector<std::filesystem::path>& configs, int jobs,
              std::ostream& out);

}  // namespace reeblab
