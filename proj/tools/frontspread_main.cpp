#include "frontspread/errors.hpp"
#include "frontspread/runner.hpp"
#include "frontspread/verify.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace frontspread;

int main(int argc, char **argv) {
    CLI::App app{std::string(kVersion) +
                 " - two-species nonlocal-dispersal simulator with a moving range"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::string level = "quick";

    const auto add_run_command = [&](const std::string &name, const std::string &help) {
        CLI::App *cmd = app.add_subcommand(name, help);
        cmd->add_option("--config", config_path, "experiment config (JSON)")->required();
        cmd->add_option("--out", out_dir, "output directory (overrides outputs.dir)");
        return cmd;
    };

    add_run_command("simulate", "integrate the coupled system and classify the outcome");
    add_run_command("eigen", "principal eigenvalue and eigenfunction of the interval operator");
    add_run_command("critical-length", "zero crossings of the eigenvalue in the interval length");
    add_run_command("mu-sweep", "bracket the boundary-coefficient threshold by bisection");
    add_run_command("asymptotics", "squeeze sequences and coexistence limits");

    CLI::App *verify_cmd = app.add_subcommand("verify", "run the verification battery");
    verify_cmd->add_option("--level", level, "quick or full")
        ->check(CLI::IsMember({"quick", "full"}));
    verify_cmd->add_option("--out", out_dir, "output directory for verify.json");
    verify_cmd->add_option("--config", config_path, "optional config carrying a verify block");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        return app.exit(e);
    }

    try {
        ExperimentConfig cfg;
        if (!config_path.empty())
            cfg = load_config(config_path);
        const std::string subcommand = app.get_subcommands().front()->get_name();
        if (subcommand == "verify") {
            cfg.kind = "verify";
            if (verify_cmd->count("--level"))
                cfg.verify.level = level;
        } else {
            if (!cfg.kind.empty() && cfg.kind != subcommand) {
                std::cerr << "error: config kind '" << cfg.kind << "' does not match subcommand '"
                          << subcommand << "'\n";
                return 2;
            }
            cfg.kind = subcommand;
        }
        const RunRecord record = dispatch(cfg, out_dir);
        if (!record.summary.is_null() && cfg.kind != "verify")
            std::cout << record.summary.dump(2) << "\n";
        return record.exit_code;
    } catch (const Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(e.code());
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
