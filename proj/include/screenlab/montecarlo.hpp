#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "screenlab/screening.hpp"

namespace screenlab {

struct MCConfig {
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
};

/// Sampling estimates of the screened law. Standard errors are sample-based:
/// binomial for the acceptance rate, mean SE for the accepted mean.
struct MCEstimate {
    double acceptance_rate = 0.0;
    double acceptance_rate_se = 0.0;
    double accepted_mean = 0.0;
    double accepted_mean_se = 0.0;
    /// Conditional CDF of accepted draws on a fixed 513-point grid spanning
    /// the impact support.
    std::vector<std::pair<double, double>> empirical_cdf;
    std::uint64_t accepted_count = 0;
    std::uint64_t samples = 0;
};

/// Quadrature-vs-sampling agreement report for one strategy run.
struct CrossValidationReport {
    MCEstimate estimate;
    double quadrature_acceptance = 0.0;
    double quadrature_mean = 0.0;
    double acceptance_z = 0.0;
    double mean_z = 0.0;
    double cdf_sup_gap = 0.0;
    /// Dvoretzky-Kiefer-Wolfowitz 99% band for the accepted-sample count.
    double dkw_band = 0.0;
    bool acceptance_ok = false;
    bool mean_ok = false;
    bool cdf_ok = false;
    bool all_ok() const { return acceptance_ok && mean_ok && cdf_ok; }
};

/// Counter-based uniform draw in (0,1), keyed by (seed, sample, stage).
/// Pure function of its arguments, so any evaluation schedule reproduces
/// the same stream.
double uniform01(std::uint64_t seed, std::uint64_t sample, std::uint64_t stage);

/// Simulate the cohort: draw v once per sample (inverse CDF), then per stage
/// an independent noise draw; accept iff v + n_i >= t_i at every stage.
/// Throws InsufficientAcceptanceError when fewer than 100 samples survive.
MCEstimate simulate(const ScreeningProblem& sp,
                    const std::vector<double>& thresholds, const MCConfig& cfg);

/// Run simulate and the quadrature engine on the same strategy; report
/// z-scores (flag beyond 4 SE) and the sup CDF gap against the DKW band.
CrossValidationReport cross_validate(const ScreeningProblem& sp,
                                     const std::vector<double>& thresholds,
                                     const MCConfig& cfg);

}  // namespace screenlab
