#include "screenlab/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "screenlab/numerics.hpp"

namespace screenlab {

BoundedDistribution::BoundedDistribution(std::vector<Knot> knots,
                                         int grid_resolution)
    : knots_(std::move(knots)), grid_resolution_(grid_resolution) {
    if (knots_.size() < 2)
        throw std::invalid_argument("density needs at least two knots");
    if (grid_resolution_ < 4)
        throw std::invalid_argument("grid_resolution must be at least 4");
    for (std::size_t i = 0; i < knots_.size(); ++i) {
        if (!std::isfinite(knots_[i].x) || !std::isfinite(knots_[i].f))
            throw std::invalid_argument("non-finite density knot");
        if (knots_[i].f < 0.0)
            throw std::invalid_argument("negative density at knot " + std::to_string(i));
        if (i > 0 && !(knots_[i].x > knots_[i - 1].x))
            throw std::invalid_argument("knot positions must be strictly increasing");
        // Positive on the open interior: interior knots may not touch zero.
        if (i > 0 && i + 1 < knots_.size() && knots_[i].f <= 0.0)
            throw std::invalid_argument("density vanishes at interior knot " +
                                        std::to_string(i));
    }

    cum_.assign(knots_.size(), 0.0);
    KahanSum total;
    for (std::size_t i = 1; i < knots_.size(); ++i) {
        const double area = 0.5 * (knots_[i].f + knots_[i - 1].f) *
                            (knots_[i].x - knots_[i - 1].x);
        total.add(area);
        cum_[i] = total.value();
    }
    renorm_ = total.value();
    if (!(renorm_ > 0.0))
        throw std::invalid_argument("density integrates to zero");
    for (auto& k : knots_) k.f /= renorm_;
    for (auto& c : cum_) c /= renorm_;
    cum_.back() = 1.0;
}

double BoundedDistribution::density(double x) const {
    if (x < support_lo() || x > support_hi()) return 0.0;
    auto it = std::upper_bound(knots_.begin(), knots_.end(), x,
                               [](double v, const Knot& k) { return v < k.x; });
    std::size_t i = static_cast<std::size_t>(it - knots_.begin());
    if (i == 0) return knots_.front().f;
    if (i == knots_.size()) return knots_.back().f;
    const Knot& a = knots_[i - 1];
    const Knot& b = knots_[i];
    const double w = (x - a.x) / (b.x - a.x);
    return a.f + w * (b.f - a.f);
}

double BoundedDistribution::cdf(double x) const {
    if (x <= support_lo()) return 0.0;
    if (x >= support_hi()) return 1.0;
    auto it = std::upper_bound(knots_.begin(), knots_.end(), x,
                               [](double v, const Knot& k) { return v < k.x; });
    std::size_t i = static_cast<std::size_t>(it - knots_.begin());
    if (i == 0) return 0.0;
    if (i == knots_.size()) return 1.0;
    const Knot& a = knots_[i - 1];
    const Knot& b = knots_[i];
    const double dx = x - a.x;
    const double slope = (b.f - a.f) / (b.x - a.x);
    const double v = cum_[i - 1] + dx * (a.f + 0.5 * slope * dx);
    return std::clamp(v, 0.0, 1.0);
}

double BoundedDistribution::survivor(double x) const {
    if (x <= support_lo()) return 1.0;
    if (x >= support_hi()) return 0.0;
    return 1.0 - cdf(x);
}

double BoundedDistribution::quantile_upper(double p) const {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("quantile level must lie in (0,1)");
    double lo = support_lo();
    double hi = support_hi();
    const double x_tol =
        1e-12 * std::max({1.0, std::abs(lo), std::abs(hi)});
    for (int i = 0; i < 200 && hi - lo > x_tol; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (survivor(mid) > p)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double BoundedDistribution::mean() const {
    const std::vector<double> pts = knot_positions();
    return integrate([this](double x) { return x * density(x); }, support_lo(),
                     support_hi(), pts, grid_resolution_);
}

std::vector<double> BoundedDistribution::knot_positions() const {
    std::vector<double> pts;
    pts.reserve(knots_.size());
    for (const auto& k : knots_) pts.push_back(k.x);
    return pts;
}

BoundedDistribution make_uniform(double lo, double hi, int grid_resolution) {
    if (!(lo < hi)) throw std::invalid_argument("uniform needs lo < hi");
    const double h = 1.0 / (hi - lo);
    return BoundedDistribution({{lo, h}, {hi, h}}, grid_resolution);
}

BoundedDistribution make_piecewise_linear(std::vector<Knot> knots,
                                          int grid_resolution) {
    return BoundedDistribution(std::move(knots), grid_resolution);
}

bool same_law(const BoundedDistribution& a, const BoundedDistribution& b) {
    const double scale = std::max({1.0, std::abs(a.support_lo()), std::abs(a.support_hi())});
    if (std::abs(a.support_lo() - b.support_lo()) > 1e-12 * scale) return false;
    if (std::abs(a.support_hi() - b.support_hi()) > 1e-12 * scale) return false;
    std::vector<double> pts = a.knot_positions();
    for (double x : b.knot_positions()) pts.push_back(x);
    const double lo = a.support_lo();
    const double w = a.support_hi() - lo;
    for (int i = 0; i <= 256; ++i)
        pts.push_back(lo + w * static_cast<double>(i) / 256.0);
    for (double x : pts)
        if (std::abs(a.density(x) - b.density(x)) > 1e-9) return false;
    return true;
}

NoiseSpec::NoiseSpec(BoundedDistribution law) : law_(std::move(law)) {
    const double hi = law_.support_hi();
    if (std::abs(law_.support_lo() + hi) > 1e-12 * std::max(1.0, hi))
        throw std::invalid_argument("noise support must be symmetric about zero");
    const int n = law_.grid_resolution();
    for (int i = 0; i <= n; ++i) {
        const double x = -hi + 2.0 * hi * static_cast<double>(i) / n;
        if (std::abs(law_.density(x) - law_.density(-x)) > 1e-9)
            throw std::invalid_argument("noise density must be symmetric about zero");
    }
}

double sum_survivor(const BoundedDistribution& V, const NoiseSpec& N, double t) {
    if (t <= V.support_lo() + N.lower()) return 1.0;
    if (t >= V.support_hi() + N.upper()) return 0.0;
    std::vector<double> pts = V.knot_positions();
    for (double nx : N.law().knot_positions()) pts.push_back(t - nx);
    const double val =
        integrate([&](double x) { return V.density(x) * N.survivor(t - x); },
                  V.support_lo(), V.support_hi(), pts, V.grid_resolution());
    return std::clamp(val, 0.0, 1.0);
}

}  // namespace screenlab
