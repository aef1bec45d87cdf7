#include "screenlab/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "screenlab/errors.hpp"
#include "screenlab/numerics.hpp"

namespace screenlab {

namespace {

constexpr std::uint64_t kMinAccepted = 100;
constexpr std::size_t kCdfGridPoints = 513;

std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

double draw(const BoundedDistribution& law, double u) {
    // u ~ U(0,1) strictly inside the interval, so the upper-tail quantile is
    // a valid inverse-CDF sampler (1-u would round to 1.0 for tiny u).
    return law.quantile_upper(u);
}

double safe_z(double diff, double se) {
    if (se > 0.0) return diff / se;
    return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

}  // namespace

double uniform01(std::uint64_t seed, std::uint64_t sample, std::uint64_t stage) {
    const std::uint64_t h = mix64(mix64(mix64(seed) ^ sample) ^ stage);
    return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
}

MCEstimate simulate(const ScreeningProblem& sp,
                    const std::vector<double>& thresholds,
                    const MCConfig& cfg) {
    const std::size_t k = sp.stages();
    if (thresholds.size() != k)
        throw std::invalid_argument("threshold count must match stage count");
    if (cfg.samples < 1) throw std::invalid_argument("sample count must be >= 1");

    const double lo = sp.impact.support_lo();
    const double hi = sp.impact.support_hi();
    const double span = hi - lo;

    std::uint64_t accepted = 0;
    KahanSum sum_v;
    KahanSum sum_v2;
    // counts[j] = accepted draws falling in (grid[j-1], grid[j]]; prefix sums
    // below turn this into the empirical CDF at the grid points.
    std::vector<std::uint64_t> counts(kCdfGridPoints, 0);

    for (std::uint64_t s = 0; s < cfg.samples; ++s) {
        const double v = draw(sp.impact, uniform01(cfg.seed, s, 0));
        bool ok = true;
        for (std::size_t i = 0; i < k; ++i) {
            const double n =
                draw(sp.noises[i].law(), uniform01(cfg.seed, s, i + 1));
            if (v + n < thresholds[i]) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        ++accepted;
        sum_v.add(v);
        sum_v2.add(v * v);
        const double pos = (v - lo) / span * static_cast<double>(kCdfGridPoints - 1);
        auto j = static_cast<std::size_t>(
            std::clamp(std::ceil(pos), 0.0,
                       static_cast<double>(kCdfGridPoints - 1)));
        ++counts[j];
    }

    if (accepted < kMinAccepted)
        throw InsufficientAcceptanceError(
            accepted, "only " + std::to_string(accepted) +
                          " of " + std::to_string(cfg.samples) +
                          " samples accepted; at least " +
                          std::to_string(kMinAccepted) +
                          " are needed for conditional estimates");

    MCEstimate est;
    est.samples = cfg.samples;
    est.accepted_count = accepted;
    const auto m = static_cast<double>(cfg.samples);
    const auto n = static_cast<double>(accepted);
    est.acceptance_rate = n / m;
    est.acceptance_rate_se =
        std::sqrt(est.acceptance_rate * (1.0 - est.acceptance_rate) / m);
    est.accepted_mean = sum_v.value() / n;
    const double var =
        std::max(0.0, (sum_v2.value() - n * est.accepted_mean * est.accepted_mean) /
                          (n - 1.0));
    est.accepted_mean_se = std::sqrt(var / n);

    est.empirical_cdf.reserve(kCdfGridPoints);
    std::uint64_t running = 0;
    for (std::size_t j = 0; j < kCdfGridPoints; ++j) {
        running += counts[j];
        const double x =
            lo + span * static_cast<double>(j) / static_cast<double>(kCdfGridPoints - 1);
        est.empirical_cdf.emplace_back(x, static_cast<double>(running) / n);
    }
    return est;
}

CrossValidationReport cross_validate(const ScreeningProblem& sp,
                                     const std::vector<double>& thresholds,
                                     const MCConfig& cfg) {
    CrossValidationReport rep;
    rep.estimate = simulate(sp, thresholds, cfg);

    auto [post, strat] = run_strategy(sp, thresholds);
    rep.quadrature_acceptance = post.normalization();
    rep.quadrature_mean = post.mean();
    const BoundedDistribution law = post.to_distribution();

    rep.acceptance_z = safe_z(rep.estimate.acceptance_rate - rep.quadrature_acceptance,
                              rep.estimate.acceptance_rate_se);
    rep.mean_z = safe_z(rep.estimate.accepted_mean - rep.quadrature_mean,
                        rep.estimate.accepted_mean_se);

    for (const auto& [x, f_hat] : rep.estimate.empirical_cdf)
        rep.cdf_sup_gap = std::max(rep.cdf_sup_gap, std::abs(f_hat - law.cdf(x)));
    rep.dkw_band = std::sqrt(std::log(200.0) /
                             (2.0 * static_cast<double>(rep.estimate.accepted_count)));

    rep.acceptance_ok = std::abs(rep.acceptance_z) <= 4.0;
    rep.mean_ok = std::abs(rep.mean_z) <= 4.0;
    rep.cdf_ok = rep.cdf_sup_gap <= rep.dkw_band;
    return rep;
}

}  // namespace screenlab
