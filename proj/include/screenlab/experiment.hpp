#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "screenlab/analysis.hpp"
#include "screenlab/distribution.hpp"
#include "screenlab/montecarlo.hpp"
#include "screenlab/screening.hpp"

namespace screenlab {

/// How a config file pins down the strategy: a stationary kind to be solved,
/// or an explicit list of thresholds or per-stage capacities (exactly one
/// list for the explicit kind, none for the stationary kinds).
struct StrategySpec {
    StrategyKind kind = StrategyKind::fixed_capacity;
    std::vector<double> thresholds;
    std::vector<double> stage_capacities;
};

/// One experiment: problem data plus strategy choice and output location.
struct ExperimentConfig {
    BoundedDistribution impact;
    std::vector<NoiseSpec> noises;
    double capacity = 0.0;
    StrategySpec strategy;
    std::optional<MCConfig> mc;
    std::string output_dir;
    int grid_resolution = kDefaultGridResolution;
};

/// Accuracy-cost inputs: per-stage accuracy indices and the capacity split.
struct CostSpec {
    std::vector<double> alphas;
    std::vector<double> stage_capacities;
    double overall = 0.0;
};

/// Effective evaluation grid: the SCREENLAB_GRID environment variable wins,
/// then the config value, then the library default. Rejects non-numeric or
/// out-of-range values with ConfigError.
int effective_grid_resolution(std::optional<int> from_config);

/// Parse and validate a config file. Unknown fields, malformed JSON, and
/// out-of-range values all raise ConfigError.
ExperimentConfig load_experiment_config(const std::string& path);
CostSpec load_cost_spec(const std::string& path);

/// Solve or apply the configured strategy and return the resulting posterior.
std::pair<FactorizedPosterior, ThresholdStrategy> solve_strategy(
    const ExperimentConfig& cfg);

/// Sum over stages of alpha_i * ln(p_1...p_{i-1} / p); the empty prefix
/// counts as 1, so stage 1 contributes alpha_1 * ln(1/p).
double cost_accuracy(const CostSpec& spec);
/// -sum ln(p_i), which telescopes to -ln of the overall capacity.
double cost_capacity(const std::vector<double>& stage_capacities);

/// posterior_cdf.csv, posterior_pdf.csv, strategy.json, summary.json into
/// cfg.output_dir. Runs the MC cross-check when cfg.mc is set.
void cmd_posterior(const ExperimentConfig& cfg);
/// dominance.json and gap.csv into a.output_dir. Requires matching impacts.
void cmd_compare(const ExperimentConfig& a, const ExperimentConfig& b);
/// convergence.csv (one kind) or convergence_<kind>.csv (several) into
/// cfg.output_dir. kinds empty means: use the kind from the config.
void cmd_converge(const ExperimentConfig& cfg, const std::vector<int>& ks,
                  std::vector<StrategyKind> kinds);
/// The built-in worked example: four CDF curves, the expected-value table,
/// dominance verdicts, and MC cross-checks of every quadrature claim.
/// Throws ReproductionError when any built-in assertion fails; files and
/// reproduction.json are written either way.
void cmd_reproduce_intro(const std::string& out_dir, std::uint64_t mc_samples,
                         std::uint64_t seed);

/// 12-significant-digit CSV with a mandatory header and \n line endings.
void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<double>>& rows);

struct CsvTable {
    std::string header;
    std::vector<std::vector<double>> rows;
};
CsvTable read_csv(const std::string& path);

}  // namespace screenlab
