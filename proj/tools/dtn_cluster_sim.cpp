// dtn-cluster-sim: run, validate and generate interest-group DTN scenarios.

#include <iostream>

#include <CLI11.hpp>

#include "dtnsim/config.hpp"
#include "dtnsim/error.hpp"
#include "dtnsim/sweep.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"Trace-driven DTN simulator with interest-group routing"};
    app.require_subcommand(1);

    std::string config_path;
    std::string seed, router, mode, categories, out_dir;
    bool strict = false;

    auto* run = app.add_subcommand("run", "Run a sweep over category counts and seeds");
    run->add_option("--config", config_path, "Config file (key = value)")->required();
    run->add_option("--seed", seed, "Single seed, replaces the configured seed list");
    run->add_option("--router", router, "cluster | epidemic");
    run->add_option("--mode", mode, "exact | kmeans");
    run->add_flag("--strict", strict, "Close the contact on the first non-member peer");
    run->add_option("--categories", categories, "Comma-separated category counts");
    run->add_option("--out", out_dir, "Output directory");

    auto* validate = app.add_subcommand("validate", "Check trace/profile consistency only");
    validate->add_option("--config", config_path, "Config file")->required();

    auto* gen = app.add_subcommand("gen-trace", "Write synthetic trace and profile files");
    gen->add_option("--config", config_path, "Config file")->required();
    gen->add_option("--out", out_dir, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : dtnsim::exit_config_error;
    }

    dtnsim::ConfigOverrides overrides;
    if (!seed.empty())
        overrides.emplace_back("seeds", seed);
    if (!router.empty())
        overrides.emplace_back("router", router);
    if (!mode.empty())
        overrides.emplace_back("mode", mode);
    if (strict)
        overrides.emplace_back("strict", "true");
    if (!categories.empty())
        overrides.emplace_back("categories", categories);
    if (!out_dir.empty())
        overrides.emplace_back("output_dir", out_dir);

    dtnsim::RunConfig config;
    try {
        config = dtnsim::parse_config(config_path, overrides);
    } catch (const dtnsim::Error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return dtnsim::exit_config_error;
    }

    if (*run)
        return dtnsim::run_sweep(config, std::cerr);
    if (*validate)
        return dtnsim::validate_command(config, std::cout, std::cerr);
    return dtnsim::gen_trace_command(config, std::cerr);
}
