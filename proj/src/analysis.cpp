#include "screenlab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "screenlab/numerics.hpp"

namespace screenlab {

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::a_dominates: return "A_dominates";
        case Verdict::b_dominates: return "B_dominates";
        case Verdict::crossing: return "crossing";
        case Verdict::indistinguishable: return "indistinguishable";
    }
    throw std::invalid_argument("unknown verdict");
}

std::string to_string(Distinctness d) {
    switch (d) {
        case Distinctness::not_distinct: return "not_distinct";
        case Distinctness::eps_distinct: return "eps_distinct";
        case Distinctness::fully_eps_distinct: return "fully_eps_distinct";
    }
    throw std::invalid_argument("unknown distinctness class");
}

namespace {

// Union evaluation grid over [lo, hi]: both knot sets plus a uniform mesh at
// the finer of the two resolutions.
std::vector<double> union_grid(const BoundedDistribution& A,
                               const BoundedDistribution& B, double lo,
                               double hi) {
    const int res = std::max(A.grid_resolution(), B.grid_resolution());
    std::vector<double> pts = A.knot_positions();
    const std::vector<double> pb = B.knot_positions();
    pts.insert(pts.end(), pb.begin(), pb.end());
    pts.reserve(pts.size() + static_cast<std::size_t>(res));
    for (int i = 1; i < res; ++i)
        pts.push_back(lo + (hi - lo) * static_cast<double>(i) /
                               static_cast<double>(res));
    return merge_breakpoints(lo, hi, pts);
}

// Refine a bracketed sign change of g to an abscissa tolerance of 1e-8.
double refine_crossing(const std::function<double(double)>& g, double a,
                       double b) {
    double fa = g(a);
    for (int iter = 0; iter < 80 && (b - a) > 1e-8; ++iter) {
        const double m = 0.5 * (a + b);
        const double fm = g(m);
        if ((fa <= 0.0) == (fm <= 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

DominanceReport check_fosd(const BoundedDistribution& A,
                           const BoundedDistribution& B, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");

    const double lo = std::min(A.support_lo(), B.support_lo());
    const double hi = std::max(A.support_hi(), B.support_hi());
    const std::vector<double> grid = union_grid(A, B, lo, hi);

    DominanceReport rep;
    rep.tolerance = tol;

    auto gap = [&A, &B](double x) { return A.cdf(x) - B.cdf(x); };
    std::vector<double> d(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        d[i] = gap(grid[i]);
        rep.max_gap_a_over_b = std::max(rep.max_gap_a_over_b, d[i]);
        rep.max_gap_b_over_a = std::max(rep.max_gap_b_over_a, -d[i]);
    }

    for (std::size_t i = 0; i + 1 < grid.size(); ++i)
        if (d[i] * d[i + 1] < 0.0)
            rep.cdf_crossings.push_back(refine_crossing(gap, grid[i], grid[i + 1]));

    const bool a_flat = rep.max_gap_a_over_b <= tol;
    const bool b_flat = rep.max_gap_b_over_a <= tol;
    if (a_flat && b_flat)
        rep.verdict = Verdict::indistinguishable;
    else if (a_flat)
        rep.verdict = Verdict::a_dominates;
    else if (b_flat)
        rep.verdict = Verdict::b_dominates;
    else
        rep.verdict = Verdict::crossing;

    rep.density_crossings = find_density_crossings(A, B);
    return rep;
}

std::vector<double> find_density_crossings(const BoundedDistribution& A,
                                           const BoundedDistribution& B) {
    const double lo = std::max(A.support_lo(), B.support_lo());
    const double hi = std::min(A.support_hi(), B.support_hi());
    if (!(hi > lo)) return {};

    const int res = std::max(A.grid_resolution(), B.grid_resolution());
    const double cell = (hi - lo) / static_cast<double>(res);
    const std::vector<double> grid = union_grid(A, B, lo, hi);

    auto diff = [&A, &B](double x) { return A.density(x) - B.density(x); };
    std::vector<double> d(grid.size());
    double peak = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double fa = A.density(grid[i]);
        const double fb = B.density(grid[i]);
        d[i] = fa - fb;
        peak = std::max({peak, fa, fb});
    }
    // Sign flips count only between lobes that clear a resolution floor;
    // identically distributed inputs differ by quadrature noise alone and
    // must report no crossings.
    const double noise_floor = 1e-6 * peak;

    std::vector<double> out;
    std::size_t last = 0;
    int last_sign = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (std::abs(d[i]) < noise_floor) continue;
        const int sign = d[i] > 0.0 ? 1 : -1;
        if (last_sign != 0 && sign != last_sign) {
            const double x = refine_crossing(diff, grid[last], grid[i]);
            if (x > lo + cell && x < hi - cell) out.push_back(x);
        }
        last = i;
        last_sign = sign;
    }
    return out;
}

double kolmogorov_distance(const BoundedDistribution& A,
                           const BoundedDistribution& B) {
    const double lo = std::min(A.support_lo(), B.support_lo());
    const double hi = std::max(A.support_hi(), B.support_hi());
    const std::vector<double> grid = union_grid(A, B, lo, hi);
    double sup = 0.0;
    double prev = grid[0];
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double x = grid[i];
        sup = std::max(sup, std::abs(A.cdf(x) - B.cdf(x)));
        if (i > 0) {
            const double m = 0.5 * (prev + x);
            sup = std::max(sup, std::abs(A.cdf(m) - B.cdf(m)));
        }
        prev = x;
    }
    return sup;
}

Distinctness classify_distinctness(double p1, double p2, double eps) {
    if (!(eps > 0.0 && eps < 0.5))
        throw std::invalid_argument("eps must lie in (0, 1/2)");
    if (!(p1 > 0.0 && p1 <= 1.0 && p2 > 0.0 && p2 <= 1.0))
        throw std::invalid_argument("stage capacities must lie in (0, 1]");
    if (!(std::max(p1, p2) < 1.0 - eps)) return Distinctness::not_distinct;
    if (p2 > eps && p2 < 1.0 - eps) return Distinctness::fully_eps_distinct;
    return Distinctness::eps_distinct;
}

double interior_threshold_margin(const NoiseSpec& noise, double eps) {
    if (!(eps > 0.0 && eps < 1.0))
        throw std::invalid_argument("eps must lie in (0, 1)");
    const double n0 = noise.law().quantile_upper(eps);
    return noise.upper() - n0;
}

ConvergenceCurve convergence_curve(const BoundedDistribution& V,
                                   const NoiseSpec& noise, double p,
                                   const std::vector<int>& ks,
                                   StrategyKind kind) {
    if (ks.empty()) throw std::invalid_argument("stage count list is empty");
    for (int k : ks)
        if (k < 1) throw std::invalid_argument("stage counts must be >= 1");
    if (kind == StrategyKind::explicit_thresholds)
        throw std::invalid_argument(
            "convergence curves are defined for stationary strategy kinds");

    const BoundedDistribution target = perfect_screening_target(V, p);
    ConvergenceCurve curve;
    curve.strategy_kind = kind;
    for (int k : ks) {
        ScreeningProblem sp(V, std::vector<NoiseSpec>(static_cast<std::size_t>(k), noise), p);
        const ThresholdStrategy strat = (kind == StrategyKind::fixed_threshold)
                                            ? solve_fixed_threshold(sp)
                                            : solve_fixed_capacity(sp);
        auto [post, run] = run_strategy(sp, strat.thresholds);
        curve.stage_counts.push_back(k);
        curve.distances.push_back(
            kolmogorov_distance(post.to_distribution(), target));
    }
    return curve;
}

}  // namespace screenlab
