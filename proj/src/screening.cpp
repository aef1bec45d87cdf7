#include "screenlab/screening.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "screenlab/errors.hpp"
#include "screenlab/numerics.hpp"

namespace screenlab {

ScreeningProblem::ScreeningProblem(BoundedDistribution impact_,
                                   std::vector<NoiseSpec> noises_,
                                   double capacity_)
    : impact(std::move(impact_)), noises(std::move(noises_)), capacity(capacity_) {
    if (noises.empty())
        throw std::invalid_argument("screening problem needs at least one stage");
    if (!(capacity > 0.0 && capacity < 1.0))
        throw std::invalid_argument("overall capacity must lie in (0, 1)");
}

std::string to_string(StrategyKind kind) {
    switch (kind) {
        case StrategyKind::fixed_threshold: return "fixed_threshold";
        case StrategyKind::fixed_capacity: return "fixed_capacity";
        case StrategyKind::explicit_thresholds: return "explicit";
    }
    throw std::invalid_argument("unknown strategy kind");
}

double ThresholdStrategy::overall_capacity() const {
    double p = 1.0;
    for (double c : stage_capacities) p *= c;
    return p;
}

std::vector<std::size_t> ThresholdStrategy::no_op_stages() const {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < stage_capacities.size(); ++i)
        if (stage_capacities[i] == 1.0) idx.push_back(i);
    return idx;
}

FactorizedPosterior::FactorizedPosterior(BoundedDistribution base)
    : base_(std::move(base)), lo_eff_(base_.support_lo()) {}

FactorizedPosterior FactorizedPosterior::prior(BoundedDistribution base) {
    return FactorizedPosterior(std::move(base));
}

double FactorizedPosterior::raw_density(double x) const {
    double f = base_.density(x);
    for (const Factor& fac : factors_) {
        if (f == 0.0) return 0.0;
        f *= fac.noise.survivor(fac.threshold - x);
    }
    return f;
}

std::vector<double> FactorizedPosterior::breakpoints() const {
    std::vector<double> pts = base_.knot_positions();
    for (const Factor& fac : factors_)
        for (double nx : fac.noise.law().knot_positions())
            pts.push_back(fac.threshold - nx);
    return pts;
}

double FactorizedPosterior::density(double x) const {
    if (x < lo_eff_) return 0.0;
    return raw_density(x) / norm_;
}

FactorizedPosterior FactorizedPosterior::apply_stage(const NoiseSpec& noise,
                                                     double t) const {
    const double hi = base_.support_hi();
    if (t >= hi + noise.upper())
        throw ZeroCapacityError(
            factors_.size(),
            "stage " + std::to_string(factors_.size()) + " threshold " +
                std::to_string(t) + " is at or above the top achievable score " +
                std::to_string(hi + noise.upper()));

    FactorizedPosterior next = *this;
    next.factors_.push_back(Factor{noise, t});

    if (t <= lo_eff_ + noise.lower()) {
        // The cutoff clears even the worst score with the worst noise draw:
        // the stage passes everything and the law is unchanged.
        next.caps_.push_back(1.0);
        return next;
    }

    next.lo_eff_ = std::max(lo_eff_, t - noise.upper());
    const std::vector<double> pts = next.breakpoints();
    const double mass =
        integrate([&next](double x) { return next.raw_density(x); }, next.lo_eff_,
                  hi, pts, base_.grid_resolution());
    double p = mass / norm_;
    if (!(p > 0.0))
        throw ZeroCapacityError(factors_.size(),
                                "stage " + std::to_string(factors_.size()) +
                                    " threshold " + std::to_string(t) +
                                    " leaves no acceptance mass");
    p = std::min(p, 1.0);
    next.caps_.push_back(p);
    next.norm_ = norm_ * p;
    return next;
}

double FactorizedPosterior::stage_survival(const NoiseSpec& noise,
                                           double t) const {
    const double hi = base_.support_hi();
    if (t <= lo_eff_ + noise.lower()) return 1.0;
    if (t >= hi + noise.upper()) return 0.0;
    const double lo = std::max(lo_eff_, t - noise.upper());
    std::vector<double> pts = breakpoints();
    for (double nx : noise.law().knot_positions()) pts.push_back(t - nx);
    const double mass =
        integrate([this, &noise, t](double x) {
                      return raw_density(x) * noise.survivor(t - x);
                  },
                  lo, hi, pts, base_.grid_resolution());
    return std::clamp(mass / norm_, 0.0, 1.0);
}

double FactorizedPosterior::mean() const {
    const double hi = base_.support_hi();
    const std::vector<double> pts = breakpoints();
    return integrate([this](double x) { return x * raw_density(x); }, lo_eff_, hi,
                     pts, base_.grid_resolution()) /
           norm_;
}

BoundedDistribution FactorizedPosterior::to_distribution() const {
    if (factors_.empty()) return base_;

    const double hi = base_.support_hi();
    std::vector<double> pts = breakpoints();
    const int res = base_.grid_resolution();
    pts.reserve(pts.size() + static_cast<std::size_t>(res) + 1);
    for (int i = 1; i < res; ++i)
        pts.push_back(lo_eff_ + (hi - lo_eff_) * static_cast<double>(i) /
                                    static_cast<double>(res));
    const std::vector<double> grid = merge_breakpoints(lo_eff_, hi, pts);

    std::vector<Knot> knots;
    knots.reserve(grid.size());
    for (double x : grid) knots.push_back(Knot{x, density(x)});

    // Deep stacks of survivor factors underflow to zero just above the
    // effective lower bound; drop that flat prefix, keeping one zero vertex
    // as the new left endpoint. The discarded mass is below representable.
    std::size_t first = 0;
    while (first < knots.size() && knots[first].f == 0.0) ++first;
    if (first + 1 >= knots.size())
        throw NormalizationDriftError(
            0.0, "posterior density vanished everywhere on the sampling grid");
    const std::size_t start = (first > 0) ? first - 1 : 0;
    if (start > 0)
        knots.erase(knots.begin(),
                    knots.begin() + static_cast<std::ptrdiff_t>(start));

    BoundedDistribution out(std::move(knots), res);
    if (std::abs(out.renormalization() - 1.0) >= 1e-4)
        throw NormalizationDriftError(
            out.renormalization(),
            "sampled posterior density integrates to " +
                std::to_string(out.renormalization()) +
                ", drift from 1 exceeds 1e-4");
    return out;
}

double solve_stage_threshold(const FactorizedPosterior& post,
                             const NoiseSpec& noise, double stage_capacity) {
    if (!(stage_capacity > 0.0 && stage_capacity < 1.0))
        throw std::invalid_argument("stage capacity must lie in (0, 1)");
    const double lo = post.support_lo_effective() + noise.lower();
    const double hi = post.support_hi() + noise.upper();
    const double x_tol = 1e-13 * std::max({1.0, std::abs(lo), std::abs(hi)});
    return bisect_nonincreasing(
        [&post, &noise](double t) { return post.stage_survival(noise, t); }, lo,
        hi, stage_capacity, 1e-9, x_tol, 1e-8);
}

std::pair<FactorizedPosterior, ThresholdStrategy> run_strategy(
    const ScreeningProblem& sp, const std::vector<double>& thresholds) {
    if (thresholds.size() != sp.stages())
        throw std::invalid_argument("threshold count must match stage count");
    FactorizedPosterior post = FactorizedPosterior::prior(sp.impact);
    for (std::size_t i = 0; i < thresholds.size(); ++i)
        post = post.apply_stage(sp.noises[i], thresholds[i]);
    ThresholdStrategy strat;
    strat.kind = StrategyKind::explicit_thresholds;
    strat.thresholds = thresholds;
    strat.stage_capacities = post.stage_capacities();
    return {std::move(post), std::move(strat)};
}

ThresholdStrategy solve_fixed_threshold(const ScreeningProblem& sp) {
    const std::size_t k = sp.stages();
    for (std::size_t i = 1; i < k; ++i)
        if (!same_law(sp.noises[i].law(), sp.noises[0].law()))
            throw std::invalid_argument(
                "fixed-threshold strategy requires identically distributed noise");

    const NoiseSpec& noise = sp.noises[0];
    const BoundedDistribution& V = sp.impact;
    const double lo = V.support_lo() + noise.lower();
    const double hi = V.support_hi() + noise.upper();

    // Overall acceptance at cutoff t: all k stages are independent copies,
    // so Pr(accept all) = E[ G(t - V)^k ].
    auto overall = [&](double t) {
        if (t <= lo) return 1.0;
        if (t >= hi) return 0.0;
        const double a = std::max(V.support_lo(), t - noise.upper());
        std::vector<double> pts = V.knot_positions();
        for (double nx : noise.law().knot_positions()) pts.push_back(t - nx);
        const double mass = integrate(
            [&](double x) {
                const double g = noise.survivor(t - x);
                return V.density(x) * std::pow(g, static_cast<double>(k));
            },
            a, V.support_hi(), pts, V.grid_resolution());
        return std::clamp(mass, 0.0, 1.0);
    };

    const double x_tol = 1e-13 * std::max({1.0, std::abs(lo), std::abs(hi)});
    const double t =
        bisect_nonincreasing(overall, lo, hi, sp.capacity, 1e-9, x_tol, 1e-8);

    auto [post, strat] =
        run_strategy(sp, std::vector<double>(k, t));
    strat.kind = StrategyKind::fixed_threshold;
    return strat;
}

ThresholdStrategy solve_fixed_capacity(const ScreeningProblem& sp) {
    const std::size_t k = sp.stages();
    const double q = std::pow(sp.capacity, 1.0 / static_cast<double>(k));
    FactorizedPosterior post = FactorizedPosterior::prior(sp.impact);
    std::vector<double> ts;
    ts.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        const double t = solve_stage_threshold(post, sp.noises[i], q);
        post = post.apply_stage(sp.noises[i], t);
        ts.push_back(t);
    }
    ThresholdStrategy strat;
    strat.kind = StrategyKind::fixed_capacity;
    strat.thresholds = std::move(ts);
    strat.stage_capacities = post.stage_capacities();
    return strat;
}

BoundedDistribution perfect_screening_target(const BoundedDistribution& V,
                                             double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("perfect screening fraction must lie in (0, 1)");
    const double vp = V.quantile_upper(p);
    const double eps =
        1e-12 * std::max({1.0, std::abs(V.support_lo()), std::abs(V.support_hi())});
    std::vector<Knot> knots;
    knots.push_back(Knot{vp, V.density(vp)});
    for (const Knot& kn : V.knots())
        if (kn.x > vp + eps) knots.push_back(kn);
    // The constructor renormalizes, which is exactly the division by p.
    return BoundedDistribution(std::move(knots), V.grid_resolution());
}

}  // namespace screenlab
