#pragma once

#include <vector>

#include "screenlab/distribution.hpp"
#include "screenlab/screening.hpp"

namespace screenlab {

enum class Verdict { a_dominates, b_dominates, crossing, indistinguishable };

std::string to_string(Verdict v);

/// Outcome of a first-order stochastic dominance comparison. A dominates B
/// when F_A stays at or below F_B everywhere (A is stochastically larger);
/// the gaps let callers assert strictness with whatever margin they need.
struct DominanceReport {
    Verdict verdict = Verdict::indistinguishable;
    double max_gap_a_over_b = 0.0;  // max over the grid of F_A - F_B
    double max_gap_b_over_a = 0.0;  // max over the grid of F_B - F_A
    std::vector<double> cdf_crossings;
    std::vector<double> density_crossings;
    double tolerance = 1e-6;
};

/// Distances to the noiseless-screening limit as the stage count grows.
struct ConvergenceCurve {
    std::vector<int> stage_counts;
    std::vector<double> distances;
    StrategyKind strategy_kind = StrategyKind::fixed_capacity;
};

/// Compare CDFs on the union grid of both supports and classify:
/// gaps both within tol -> indistinguishable; one-sided -> dominance;
/// otherwise crossing. Sign changes of F_A - F_B are bisection-refined
/// to 1e-8 and reported, as are density crossings.
DominanceReport check_fosd(const BoundedDistribution& A,
                           const BoundedDistribution& B, double tol = 1e-6);

/// Interior sign changes of f_A - f_B on the intersection of supports,
/// bisection-refined and sorted. Two guards keep quadrature noise out of the
/// count: a sign flip only registers between lobes reaching 1e-6 of the peak
/// density, and crossings within one grid cell of either end of the
/// intersection are dropped (both densities vanish toward the effective
/// lower bound, which makes sign flips there meaningless).
std::vector<double> find_density_crossings(const BoundedDistribution& A,
                                           const BoundedDistribution& B);

/// sup |F_A - F_B| over the union grid (plus cell midpoints).
double kolmogorov_distance(const BoundedDistribution& A,
                           const BoundedDistribution& B);

enum class Distinctness { not_distinct, eps_distinct, fully_eps_distinct };

std::string to_string(Distinctness d);

/// Classify a two-stage capacity split: distinct when max{p1,p2} < 1-eps,
/// fully distinct when additionally eps < p2 < 1-eps.
Distinctness classify_distinctness(double p1, double p2, double eps);

/// Margin c = upper(N) - n0 with Pr(N >= n0) = eps. For any impact law
/// supported on an interval shorter than c, a stage that accepts with
/// probability above eps must have its cutoff below support_lo + upper(N),
/// i.e. the cutoff cannot sit flush against the top of the score range.
double interior_threshold_margin(const NoiseSpec& noise, double eps);

/// For each k in ks: solve the stationary strategy of the given kind on the
/// k-stage i.i.d. problem, materialize the posterior, and measure its
/// Kolmogorov distance to perfect_screening_target(V, p).
ConvergenceCurve convergence_curve(const BoundedDistribution& V,
                                   const NoiseSpec& noise, double p,
                                   const std::vector<int>& ks,
                                   StrategyKind kind);

}  // namespace screenlab
