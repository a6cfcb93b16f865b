#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sdd/cli.hpp"
#include "sdd/kernels.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Spectral simulator for semilinear parabolic equations with "
                 "discrete state-dependent delay"};
    app.require_subcommand(1);
    app.fallthrough();  // accept global flags after the subcommand name

    int threads = 0;
    app.add_option("--threads", threads, "Worker threads for kernels and sweeps")
        ->envname("SDD_SIM_THREADS");

    std::string config_path;
    std::string out_path;
    bool print_config = false;
    CLI::App* run = app.add_subcommand("run", "Solve one scenario and write the trajectory CSV");
    run->add_option("--config", config_path, "Scenario config file")->required();
    run->add_option("--out", out_path, "Override output.path");
    run->add_flag("--print-config", print_config, "Echo the normalized config and exit");

    std::string suite = "all";
    std::string verify_out;
    CLI::App* verify = app.add_subcommand("verify", "Run the named verification suite");
    verify->add_option("suite", suite,
                       "all | H | oracle | dissipation | holder | dependence | apriori");
    verify->add_option("--out", verify_out, "Also write each check's trajectory CSV here");

    std::string sweep_config, sweep_param, sweep_out = "sweep_out";
    std::vector<std::string> sweep_values;
    CLI::App* sweep = app.add_subcommand("sweep", "Re-run one scenario over a parameter list");
    sweep->add_option("--config", sweep_config, "Base scenario config file")->required();
    sweep->add_option("--param", sweep_param, "Config key to vary")->required();
    sweep->add_option("--values", sweep_values, "Values for the key")->required()->delimiter(',');
    sweep->add_option("--out", sweep_out, "Output directory");

    std::string presets_out;
    CLI::App* presets = app.add_subcommand("presets", "List bundled presets or write them out");
    presets->add_option("--out", presets_out, "Directory to write preset .cfg files");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : sdd::cli::kExitConfig;
    }

    sdd::kernels::set_threads(threads);

    if (run->parsed())
        return sdd::cli::cmd_run(config_path,
                                 out_path.empty() ? std::nullopt
                                                  : std::make_optional(out_path),
                                 print_config);
    if (verify->parsed()) return sdd::cli::cmd_verify(suite, verify_out);
    if (sweep->parsed())
        return sdd::cli::cmd_sweep(sweep_config, sweep_param, sweep_values, sweep_out,
                                   threads > 0 ? threads : sdd::kernels::max_threads());
    if (presets->parsed())
        return sdd::cli::cmd_presets(presets_out.empty() ? std::nullopt
                                                         : std::make_optional(presets_out));
    return sdd::cli::kExitConfig;
}
