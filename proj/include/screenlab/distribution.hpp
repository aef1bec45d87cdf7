#pragma once

#include <vector>

namespace screenlab {

inline constexpr int kDefaultGridResolution = 4096;

/// One vertex of a piecewise-linear density.
struct Knot {
    double x;
    double f;
};

/// A probability law with bounded support and piecewise-linear density.
/// Immutable after construction. The density is renormalized to integrate to 1;
/// the CDF is the exact piecewise-quadratic integral of the knots, so
/// cdf(support_hi) == 1 identically.
class BoundedDistribution {
  public:
    BoundedDistribution(std::vector<Knot> knots,
                        int grid_resolution = kDefaultGridResolution);

    double support_lo() const { return knots_.front().x; }
    double support_hi() const { return knots_.back().x; }
    int grid_resolution() const { return grid_resolution_; }
    const std::vector<Knot>& knots() const { return knots_; }
    /// Factor the raw knot densities were divided by to reach total mass 1.
    double renormalization() const { return renorm_; }

    /// 0 outside the support, linear interpolation of the knots inside.
    double density(double x) const;
    /// Exact integral of the density; clamped to [0,1] outside the support.
    double cdf(double x) const;
    /// Pr(X >= x): 1 at or below support_lo, 0 at or above support_hi.
    double survivor(double x) const;
    /// v with Pr(X >= v) = p, bisection-located. Requires 0 < p < 1.
    double quantile_upper(double p) const;
    /// Simpson quadrature of x*f(x) at grid_resolution.
    double mean() const;

    /// Knot abscissae, for use as quadrature breakpoints.
    std::vector<double> knot_positions() const;

  private:
    std::vector<Knot> knots_;
    std::vector<double> cum_;  // cumulative mass at each knot; cum_.back() == 1
    double renorm_ = 1.0;
    int grid_resolution_ = kDefaultGridResolution;
};

BoundedDistribution make_uniform(double lo, double hi,
                                 int grid_resolution = kDefaultGridResolution);
BoundedDistribution make_piecewise_linear(
    std::vector<Knot> knots, int grid_resolution = kDefaultGridResolution);

/// True when the two laws have the same support (within 1e-12) and densities
/// agreeing within 1e-9 on the union of knots and the evaluation grid.
bool same_law(const BoundedDistribution& a, const BoundedDistribution& b);

/// An additive evaluation-error law: bounded and symmetric about zero.
class NoiseSpec {
  public:
    explicit NoiseSpec(BoundedDistribution law);

    const BoundedDistribution& law() const { return law_; }
    double lower() const { return law_.support_lo(); }
    double upper() const { return law_.support_hi(); }
    /// G(x) = Pr(N >= x).
    double survivor(double x) const { return law_.survivor(x); }

  private:
    BoundedDistribution law_;
};

/// Pr(V + N >= t), by quadrature of f_V(x) * Pr(N >= t - x).
double sum_survivor(const BoundedDistribution& V, const NoiseSpec& N, double t);

}  // namespace screenlab
