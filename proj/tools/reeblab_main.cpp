#include <iostream>

#include <CLI11.hpp>

#include "reeblab/experiment.hpp"

int main(int argc, char** argv) {
    CLI::App app{"reeblab: flow-equation laboratory on symplectizations"};
    app.require_subcommand(1);

    // validate
    std::string model = "s3";
    int samples = 10000;
    std::uint64_t seed = 1;
    CLI::App* validate = app.add_subcommand("validate", "check the contact model identities");
    validate->add_option("--model", model, "model id (s3 | cyl)");
    validate->add_option("--samples", samples, "number of random samples");
    validate->add_option("--seed", seed, "rng seed");

    // flow
    std::string config_path;
    std::string out_dir;
    CLI::App* flow = app.add_subcommand("flow", "integrate a flow from a config file");
    flow->add_option("--config", config_path, "experiment config file")->required();
    flow->add_option("--out", out_dir, "override output directory");

    // verify
    std::string traj_path;
    std::string which;
    double tol = 1e-3;
    CLI::App* verify = app.add_subcommand("verify", "run a check on a stored trajectory");
    verify->add_option("trajectory", traj_path, "trajectory .jsonl file")->required();
    verify->add_option("--which", which, "der | lemma2 | laplacian | rab2 | roundtrip")
        ->required();
    verify->add_option("--tol", tol, "residual tolerance");

    // bijection
    CLI::App* bijection =
        app.add_subcommand("bijection", "flow, push forward, lift, and compare");
    std::string bij_config;
    std::string bij_out;
    bijection->add_option("--config", bij_config, "experiment config file")->required();
    bijection->add_option("--out", bij_out, "override output directory");

    // batch
    std::vector<std::string> batch_configs;
    int jobs = 1;
    CLI::App* batch = app.add_subcommand("batch", "run several experiments concurrently");
    batch->add_option("configs", batch_configs, "experiment config files");
    batch->add_option("--jobs", jobs, "number of worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : reeblab::exit_code::usage;
    }

    try {
        if (validate->parsed()) return reeblab::run_validate(model, samples, seed, std::cout);
        if (flow->parsed()) {
            reeblab::ExperimentConfig cfg = reeblab::parse_config_file(config_path);
            if (!out_dir.empty()) cfg.output_dir = out_dir;
            return reeblab::run_flow(cfg, std::cout);
        }
        if (verify->parsed()) return reeblab::run_verify(traj_path, which, tol, std::cout);
        if (bijection->parsed()) {
            reeblab::ExperimentConfig cfg = reeblab::parse_config_file(bij_config);
            if (!bij_out.empty()) cfg.output_dir = bij_out;
            return reeblab::run_bijection(cfg, std::cout);
        }
        if (batch->parsed()) {
            std::vector<std::filesystem::path> paths(batch_configs.begin(),
                                                     batch_configs.end());
            return reeblab::run_batch(paths, jobs, std::cout);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return reeblab::exit_code::usage;
    }
    return reeblab::exit_code::usage;
}
