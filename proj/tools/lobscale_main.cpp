// lobscale: reproducible experiment driver for the order-book scaling suite.
//
// Usage: lobscale <experiment> [--config <path>] [--seed <u64>]
//                 [--replications <k>] [--threads <k>] [--out <dir>]
//
// Exit codes: 0 success, 2 configuration error, 3 numerical degeneracy.

#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "lobscale/experiments.hpp"

int main(int argc, char** argv) {
    CLI::App app{"lobscale - limit order book scaling experiments"};
    app.require_subcommand(1);

    lobscale::ExperimentConfig cfg;
    std::string config_path;

    const char* env_out = std::getenv("LOBSCALE_OUT");
    cfg.out_dir = env_out ? env_out : "out";

    for (const std::string& name : lobscale::experiment_names()) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "JSON config file");
        sub->add_option("--seed", cfg.seed, "base RNG seed");
        sub->add_option("--replications", cfg.replications, "replication count (0 = default)");
        sub->add_option("--threads", cfg.threads, "worker threads");
        sub->add_option("--out", cfg.out_dir, "output directory");
        sub->callback([&cfg, name] { cfg.name = name; });
    }

    CLI11_PARSE(app, argc, argv);

    try {
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw lobscale::config_error("cannot read config file: " + config_path);
            try {
                cfg.params = lobscale::json::parse(in);
            } catch (const std::exception& e) {
                throw lobscale::config_error(std::string("config parse error: ") + e.what());
            }
        }
        lobscale::json summary = lobscale::run_experiment(cfg);
        std::cout << summary.dump(2) << "\n";
        return 0;
    } catch (const lobscale::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const lobscale::degeneracy_error& e) {
        std::cerr << "degeneracy error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
