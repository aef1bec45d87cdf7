#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <vector>

namespace screenlab {

/// Composite Simpson quadrature over [lo, hi]. Interval endpoints are snapped to
/// the supplied breakpoints (kinks of the integrand), so piecewise-cubic
/// integrands are integrated exactly. `cells` is the total panel budget,
/// distributed over the sub-intervals proportionally to their length.
double integrate(const std::function<double(double)>& f, double lo, double hi,
                 std::span<const double> breakpoints, int cells);

/// Solve g(x) = target for a continuous nonincreasing g on [lo, hi] by bisection.
/// Stops when |g(mid) - target| <= value_tol or the bracket shrinks to x_tol.
/// Throws SolverError if the final residual still exceeds residual_limit.
double bisect_nonincreasing(const std::function<double(double)>& g, double lo,
                            double hi, double target, double value_tol,
                            double x_tol, double residual_limit);

/// Order-insensitive compensated accumulator (Kahan-Babuska).
class KahanSum {
  public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Sorted unique merge of breakpoint sets, clamped to (lo, hi) and including the
/// endpoints. Points closer than (hi-lo)*1e-13 collapse to one.
std::vector<double> merge_breakpoints(double lo, double hi,
                                      std::span<const double> pts);

}  // namespace screenlab
