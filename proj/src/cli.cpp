#include "screenlab/cli.hpp"

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "screenlab/errors.hpp"
#include "screenlab/experiment.hpp"

namespace screenlab {

namespace {

StrategyKind kind_from_name(const std::string& name) {
    if (name == "fixed_threshold") return StrategyKind::fixed_threshold;
    if (name == "fixed_capacity") return StrategyKind::fixed_capacity;
    throw ConfigError("unknown strategy kind '" + name +
                      "' (expected fixed_threshold or fixed_capacity)");
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"staged-screening posterior analysis"};
    app.require_subcommand(1);

    std::string posterior_cfg;
    CLI::App* posterior =
        app.add_subcommand("posterior", "Solve one strategy; write posterior "
                                        "CDF/PDF, strategy, and summary files");
    posterior->add_option("config", posterior_cfg, "experiment config (JSON)")
        ->required();

    std::string compare_cfg_a;
    std::string compare_cfg_b;
    CLI::App* compare = app.add_subcommand(
        "compare", "Stochastic-dominance comparison of two experiment posteriors");
    compare->add_option("config_a", compare_cfg_a, "experiment config A (JSON)")
        ->required();
    compare->add_option("config_b", compare_cfg_b, "experiment config B (JSON)")
        ->required();

    std::string converge_cfg;
    std::vector<int> converge_ks;
    std::vector<std::string> converge_kinds;
    CLI::App* converge = app.add_subcommand(
        "converge", "Distance to the noiseless-screening target as the stage "
                    "count grows");
    converge->add_option("config", converge_cfg, "experiment config (JSON)")
        ->required();
    converge->add_option("--ks", converge_ks, "stage counts, comma separated")
        ->required()
        ->delimiter(',');
    converge
        ->add_option("--kinds", converge_kinds,
                     "strategy kinds to sweep (fixed_threshold,fixed_capacity); "
                     "defaults to the config's kind")
        ->delimiter(',');

    std::string repro_out = "reproduce-intro";
    std::uint64_t repro_samples = 1000000;
    std::uint64_t repro_seed = 1;
    CLI::App* repro = app.add_subcommand(
        "reproduce-intro", "Built-in worked example: one- vs two-stage curves, "
                           "expected values, verdicts, MC cross-checks");
    repro->add_option("--mc-samples", repro_samples, "Monte Carlo sample count");
    repro->add_option("--seed", repro_seed, "Monte Carlo seed");
    repro->add_option("--out", repro_out, "output directory");

    std::string cost_spec_path;
    CLI::App* cost = app.add_subcommand("cost", "Evaluate screening cost functions");
    cost->require_subcommand(1);
    CLI::App* cost_accuracy_cmd =
        cost->add_subcommand("accuracy", "accuracy-weighted cost of the split");
    cost_accuracy_cmd->add_option("spec", cost_spec_path, "cost spec (JSON)")
        ->required();
    CLI::App* cost_capacity_cmd =
        cost->add_subcommand("capacity", "capacity cost, -sum ln p_i");
    cost_capacity_cmd->add_option("spec", cost_spec_path, "cost spec (JSON)")
        ->required();

    try {
        try {
            app.parse(argc, argv);
        } catch (const CLI::ParseError& e) {
            if (e.get_exit_code() == 0) return app.exit(e);
            std::cerr << "error: " << e.what() << "\n";
            return 2;
        }

        if (posterior->parsed()) {
            cmd_posterior(load_experiment_config(posterior_cfg));
        } else if (compare->parsed()) {
            cmd_compare(load_experiment_config(compare_cfg_a),
                        load_experiment_config(compare_cfg_b));
        } else if (converge->parsed()) {
            std::vector<StrategyKind> kinds;
            kinds.reserve(converge_kinds.size());
            for (const std::string& name : converge_kinds)
                kinds.push_back(kind_from_name(name));
            cmd_converge(load_experiment_config(converge_cfg), converge_ks,
                         std::move(kinds));
        } else if (repro->parsed()) {
            cmd_reproduce_intro(repro_out, repro_samples, repro_seed);
        } else if (cost->parsed()) {
            const CostSpec spec = load_cost_spec(cost_spec_path);
            nlohmann::json out;
            if (cost_accuracy_cmd->parsed()) {
                out["kind"] = "accuracy";
                out["cost"] = cost_accuracy(spec);
            } else {
                out["kind"] = "capacity";
                out["cost"] = cost_capacity(spec.stage_capacities);
            }
            out["log_base"] = "natural";
            std::cout << out.dump(2) << "\n";
        }
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ReproductionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace screenlab
