// Command-line front end: one verb per construction, JSON config in,
// deterministic artifacts out.

#include <filesystem>
#include <iostream>
#include <map>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "hsurf/acceptance.hpp"
#include "hsurf/error.hpp"
#include "hsurf/experiment.hpp"
#include "hsurf/io.hpp"

namespace {

struct CommonFlags {
    std::string config_path;
    std::string out_dir = ".";
    int resolution = 0;
    bool quick = false;
    std::uint64_t seed = 0;
};

void attach(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "JSON configuration file");
    cmd->add_option("--out", flags.out_dir, "output directory");
    cmd->add_option("--resolution", flags.resolution, "grid/lattice resolution override");
    cmd->add_option("--seed", flags.seed, "seed for randomized sweeps");
    cmd->add_flag("--quick", flags.quick, "reduced resolutions, widened tolerances");
}

int execute(const std::string& name, const CommonFlags& flags) {
    nlohmann::json params = nlohmann::json::object();
    if (!flags.config_path.empty()) params = hsurf::read_json_file(flags.config_path);

    hsurf::RunOptions opts;
    opts.out_dir = flags.out_dir;
    opts.resolution = flags.resolution;
    opts.quick = flags.quick;
    opts.seed = flags.seed;

    if (name == "reproduce") {
        hsurf::AcceptanceOptions ao;
        ao.quick = flags.quick;
        if (flags.seed) ao.seed = flags.seed;
        const auto results = hsurf::run_acceptance(ao);
        const int failures = hsurf::print_acceptance(std::cout, results);
        // Deterministic artifact (runtimes stay on stdout only).
        nlohmann::json entries = nlohmann::json::array();
        for (const auto& r : results)
            entries.push_back(
                {{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
        std::filesystem::create_directories(flags.out_dir);
        hsurf::write_json_file(
            (std::filesystem::path(flags.out_dir) / "acceptance.json").string(),
            nlohmann::json{{"criteria", entries}, {"all_pass", failures == 0}});
        return failures == 0 ? 0 : 1;
    }

    const auto config = hsurf::ExperimentConfig::parse(name, params);
    const nlohmann::json summary = hsurf::run_command(config, opts);
    std::cout << summary.dump(2) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for surfaces of prescribed mean curvature"};
    app.require_subcommand(1);

    std::map<std::string, CommonFlags> flags;
    for (const std::string& name : hsurf::command_names()) {
        CLI::App* cmd = app.add_subcommand(name);
        attach(cmd, flags[name]);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const std::string name = app.get_subcommands().front()->get_name();
    try {
        return execute(name, flags[name]);
    } catch (const hsurf::ConfigError& e) {
        std::cerr << nlohmann::json{{"error", "config"}, {"message", e.what()}}.dump()
                  << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << nlohmann::json{{"error", "computation"}, {"message", e.what()}}.dump()
                  << "\n";
        return 1;
    }
}
