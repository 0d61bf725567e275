#include <iostream>

#include <CLI11.hpp>

#include "ffinv/cli_runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Far-field invisibility designer and Helmholtz scattering tools"};
    app.require_subcommand(1);

    std::string config;
    ffinv::RunOptions options;
    ffinv::ValidateOptions validate;
    bool corrupt = false;

    for (const char* name : {"solve", "scan", "design"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config, "JSON run configuration")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", options.out_dir, "output directory (overrides output.directory)");
        sub->add_option("--threads", options.threads, "worker threads")->check(CLI::PositiveNumber);
    }
    auto* val = app.add_subcommand("validate", "run the oracle and identity checks");
    val->add_option("--threads", options.threads, "worker threads")->check(CLI::PositiveNumber);
    val->add_flag("--corrupt-tolerance", corrupt, "test hook: shrink every threshold so the checks fail")
        ->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : ffinv::kExitConfigError;
    }
    if (corrupt) validate.tolerance_scale = 1e-30;
    const std::string command = app.get_subcommands().front()->get_name();
    return ffinv::run_command(command, config, options, std::cout, std::cerr, validate);
}
