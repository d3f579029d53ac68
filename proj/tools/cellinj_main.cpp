// cellinj: simulate the motion stage, map points between frames, run the property suite.

#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "cellinj/commands.hpp"

namespace cmd = cellinj::commands;

int main(int argc, char** argv) {
    CLI::App app{"Cell-injection stage geometry and dynamics"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    auto* simulate = app.add_subcommand("simulate", "Integrate the stage dynamics and write a trajectory CSV");
    simulate->add_option("--config", config_path, "Scenario config file")->required();
    simulate->add_option("--out", out_path, "Output CSV path")->required();

    double x = 0.0;
    double y = 0.0;
    auto* transform = app.add_subcommand("transform", "Map a stage point to camera and image coordinates");
    transform->add_option("--config", config_path, "Scenario config file")->required();
    transform->add_option("--x", x, "Stage x")->required();
    transform->add_option("--y", y, "Stage y")->required();

    std::size_t samples = 1000;
    std::uint64_t seed = 42;
    auto* verify = app.add_subcommand("verify", "Check every registered property on random samples");
    verify->add_option("--samples", samples, "Draws per property")->check(CLI::PositiveNumber);
    verify->add_option("--seed", seed, "Generator seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? cmd::kOk : cmd::kUsageError;
    }

    if (*simulate) return cmd::cmd_simulate(config_path, out_path, std::cerr);

    if (*transform) {
        try {
            return cmd::cmd_transform(cmd::load_config(config_path), x, y, std::cout);
        } catch (const cellinj::ParseError& e) {
            std::cerr << "transform: config error: " << e.what() << '\n';
            return cmd::kUsageError;
        }
    }

    return cmd::cmd_verify(samples, seed, std::cout);
}
