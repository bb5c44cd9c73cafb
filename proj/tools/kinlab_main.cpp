/// kinlab: verification lab for kinematic conservation laws of compressible
/// flow on Riemannian charts. Subcommands read a scenario config, write CSV
/// series plus a JSON summary, and exit 0 iff all asserted tolerances pass.

#include <CLI11.hpp>
#include <json.hpp>

#include "kinlab/scenario.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace kinlab;

namespace {

struct CommonOpts {
    std::string scenario_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    int threads = 1;
    bool allow_incompatible = false;
    CLI::Option* seed_opt = nullptr;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--scenario", opts.scenario_path, "scenario config (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", opts.out_dir, "output directory (default: <out-root>/<name>)");
    opts.seed_opt = cmd->add_option("--seed", opts.seed, "override the scenario seed");
    cmd->add_option("--threads", opts.threads, "worker threads")->default_val(1);
    cmd->add_flag("--allow-incompatible", opts.allow_incompatible,
                  "skip the density/EOS compatibility gate (falsification runs)");
}

int run_driver(const CommonOpts& opts,
               Report (*driver)(const Scenario&, const std::string&)) {
    set_default_threads(opts.threads);
    Scenario sc;
    try {
        std::ifstream in(opts.scenario_path);
        if (!in) {
            std::cerr << "config error: cannot read " << opts.scenario_path << "\n";
            return 2;
        }
        std::stringstream ss;
        ss << in.rdbuf();
        std::string text = ss.str();
        if (opts.allow_incompatible) {
            // Re-parse with the gate disabled; keep the original bytes for the manifest.
            nlohmann::json j = nlohmann::json::parse(text);
            j["allow_incompatible"] = true;
            sc = parse_scenario(j.dump());
            sc.raw_config = text;
        } else {
            sc = parse_scenario(text);
        }
    } catch (const ClassificationError& e) {
        std::cerr << "incompatible density/EOS pairing: " << e.what() << "\n"
                  << "(use --allow-incompatible for deliberate falsification runs)\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    if (opts.seed_opt && opts.seed_opt->count() > 0) sc.seed = opts.seed;

    std::string out = opts.out_dir;
    if (out.empty()) {
        const char* root = std::getenv("KINLAB_OUT_ROOT");
        out = (root ? std::string(root) : std::string("out")) + "/" + sc.name;
    }
    try {
        Report rep = driver(sc, out);
        rep.print(std::cout);
        return rep.pass() ? 0 : 1;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"kinlab: conserved-integral verification for compressible flow on charts"};
    app.require_subcommand(1);

    struct Cmd {
        const char* name;
        const char* help;
        Report (*driver)(const Scenario&, const std::string&);
        CLI::App* sub = nullptr;
    };
    Cmd cmds[] = {
        {"simulate", "integrate the fluid system and write snapshots", drive_simulate, nullptr},
        {"verify-densities", "flux-balance series for the catalogued densities",
         drive_verify_densities, nullptr},
        {"verify-circulation", "circulation transport along marker curves",
         drive_verify_circulation, nullptr},
        {"verify-determining", "determining-equation residuals on random jets",
         drive_verify_determining, nullptr},
        {"verify-hamiltonian", "Hamiltonian flow, Casimir, and symmetry checks",
         drive_verify_hamiltonian, nullptr},
        {"geometry-report", "curvature and Killing residual tables", drive_geometry_report,
         nullptr},
    };

    constexpr std::size_t kCmdCount = sizeof(cmds) / sizeof(cmds[0]);
    std::vector<CommonOpts> opts(kCmdCount);
    for (std::size_t k = 0; k < kCmdCount; ++k) {
        cmds[k].sub = app.add_subcommand(cmds[k].name, cmds[k].help);
        add_common(cmds[k].sub, opts[k]);
    }

    CLI11_PARSE(app, argc, argv);
    for (std::size_t k = 0; k < kCmdCount; ++k)
        if (cmds[k].sub->parsed()) return run_driver(opts[k], cmds[k].driver);
    return 2;
}
