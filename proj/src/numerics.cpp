#include "screenlab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "screenlab/errors.hpp"

namespace screenlab {

std::vector<double> merge_breakpoints(double lo, double hi,
                                      std::span<const double> pts) {
    std::vector<double> out;
    out.reserve(pts.size() + 2);
    out.push_back(lo);
    for (double p : pts)
        if (p > lo && p < hi) out.push_back(p);
    out.push_back(hi);
    std::sort(out.begin(), out.end());
    const double eps = (hi - lo) * 1e-13;
    std::vector<double> dedup;
    dedup.reserve(out.size());
    for (double p : out) {
        if (dedup.empty() || p - dedup.back() > eps) dedup.push_back(p);
    }
    dedup.back() = hi;  // the merge must preserve the exact right endpoint
    return dedup;
}

double integrate(const std::function<double(double)>& f, double lo, double hi,
                 std::span<const double> breakpoints, int cells) {
    if (!(hi > lo)) return 0.0;
    if (cells < 1) cells = 1;
    const std::vector<double> seg = merge_breakpoints(lo, hi, breakpoints);
    const double total = hi - lo;
    KahanSum acc;
    for (std::size_t s = 0; s + 1 < seg.size(); ++s) {
        const double a = seg[s];
        const double b = seg[s + 1];
        const auto n = std::max<std::int64_t>(
            1, std::llround(static_cast<double>(cells) * (b - a) / total));
        const double h = (b - a) / static_cast<double>(n);
        for (std::int64_t i = 0; i < n; ++i) {
            const double x0 = a + h * static_cast<double>(i);
            const double x1 = (i + 1 == n) ? b : a + h * static_cast<double>(i + 1);
            const double xm = 0.5 * (x0 + x1);
            acc.add((x1 - x0) / 6.0 * (f(x0) + 4.0 * f(xm) + f(x1)));
        }
    }
    return acc.value();
}

double bisect_nonincreasing(const std::function<double(double)>& g, double lo,
                            double hi, double target, double value_tol,
                            double x_tol, double residual_limit) {
    double mid = 0.5 * (lo + hi);
    double val = g(mid);
    for (int iter = 0; iter < 200; ++iter) {
        if (std::abs(val - target) <= value_tol || (hi - lo) <= x_tol) break;
        if (val > target)
            lo = mid;
        else
            hi = mid;
        mid = 0.5 * (lo + hi);
        val = g(mid);
    }
    if (std::abs(val - target) > residual_limit)
        throw SolverError("bisection residual " + std::to_string(std::abs(val - target)) +
                          " above limit " + std::to_string(residual_limit));
    return mid;
}

}  // namespace screenlab
