// knds <command> --config <file> --out <dir> [--seed N]
#include <iostream>

#include "CLI11.hpp"
#include "knds/config.hpp"
#include "knds/errors.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Dirac scattering on Kerr-Newman-de Sitter exteriors"};
    std::string command, config, out;
    unsigned seed = 0;
    app.add_option("command", command, "geometry | angular | scatter | asymptotics | inverse | compare")
        ->required();
    app.add_option("--config", config, "flat key=value configuration file")->required();
    app.add_option("--out", out, "output directory")->required();
    auto* seed_opt = app.add_option("--seed", seed, "seed for optional noise injection");
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error=config reason=\"" << e.what() << "\"\n";
        return 2;
    }
    knds::RunConfig rc;
    rc.command = command;
    rc.out_dir = out;
    if (seed_opt->count()) rc.seed = seed;
    try {
        rc.values = knds::KeyValueConfig::load(config);
    } catch (const knds::ConfigError& e) {
        std::cerr << "error=config reason=\"" << e.what() << "\"\n";
        return 2;
    }
    return knds::run(rc);
}
