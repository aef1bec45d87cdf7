#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "screenlab/distribution.hpp"

namespace screenlab {

/// A k-stage screening problem: impact law, per-stage noise laws, and the
/// mandated overall acceptance fraction.
struct ScreeningProblem {
    BoundedDistribution impact;
    std::vector<NoiseSpec> noises;
    double capacity;

    ScreeningProblem(BoundedDistribution impact_, std::vector<NoiseSpec> noises_,
                     double capacity_);
    std::size_t stages() const { return noises.size(); }
};

enum class StrategyKind { fixed_threshold, fixed_capacity, explicit_thresholds };

std::string to_string(StrategyKind kind);

/// A realized threshold strategy: cutoffs plus the per-stage acceptance
/// fractions actually achieved (from quadrature, not the requested targets).
struct ThresholdStrategy {
    StrategyKind kind = StrategyKind::explicit_thresholds;
    std::vector<double> thresholds;
    std::vector<double> stage_capacities;

    double overall_capacity() const;
    /// Stages whose threshold sat below the lower score bound (capacity 1).
    std::vector<std::size_t> no_op_stages() const;
};

/// The conditional law of the impact after surviving a set of stages, kept in
/// factorized form: f(x) = f_base(x) * prod_i G_i(t_i - x) / normalization.
/// Immutable; apply_stage returns a new value.
class FactorizedPosterior {
  public:
    struct Factor {
        NoiseSpec noise;
        double threshold;
    };

    static FactorizedPosterior prior(BoundedDistribution base);

    /// Condition on surviving one more stage: score x + noise must reach t.
    /// Throws ZeroCapacityError when t sits at or above the upper score bound.
    FactorizedPosterior apply_stage(const NoiseSpec& noise, double t) const;

    /// Normalized posterior density; zero outside [support_lo_effective, hi].
    double density(double x) const;
    /// Pr(X + noise >= t) for X distributed per this posterior.
    double stage_survival(const NoiseSpec& noise, double t) const;
    /// Quadrature mean of the posterior.
    double mean() const;

    /// Accumulated probability of surviving all applied stages.
    double normalization() const { return norm_; }
    double support_lo_effective() const { return lo_eff_; }
    double support_hi() const { return base_.support_hi(); }
    const BoundedDistribution& base() const { return base_; }
    const std::vector<Factor>& factors() const { return factors_; }
    const std::vector<double>& stage_capacities() const { return caps_; }

    /// Sample the normalized density onto the evaluation grid and rebuild it
    /// as a standalone distribution. Throws NormalizationDriftError when the
    /// sampled density integrates away from 1 by 1e-4 or more.
    BoundedDistribution to_distribution() const;

  private:
    explicit FactorizedPosterior(BoundedDistribution base);

    double raw_density(double x) const;
    std::vector<double> breakpoints() const;

    BoundedDistribution base_;
    std::vector<Factor> factors_;
    std::vector<double> caps_;
    double norm_ = 1.0;
    double lo_eff_;
};

/// Threshold t with Pr(current + noise >= t) = stage_capacity, by bisection.
double solve_stage_threshold(const FactorizedPosterior& post,
                             const NoiseSpec& noise, double stage_capacity);

/// Fold apply_stage over the problem's stages with the given cutoffs.
std::pair<FactorizedPosterior, ThresholdStrategy> run_strategy(
    const ScreeningProblem& sp, const std::vector<double>& thresholds);

/// One scalar cutoff for all stages such that the overall acceptance equals
/// the problem capacity. Requires identically distributed noises.
ThresholdStrategy solve_fixed_threshold(const ScreeningProblem& sp);

/// Per-stage acceptance fixed at capacity^(1/k); cutoffs solved sequentially
/// against the evolving posterior.
ThresholdStrategy solve_fixed_capacity(const ScreeningProblem& sp);

/// The law of V conditioned on V >= v_p where Pr(V >= v_p) = p: the outcome of
/// a noiseless screen that keeps exactly the top-p mass.
BoundedDistribution perfect_screening_target(const BoundedDistribution& V,
                                             double p);

}  // namespace screenlab
