#ifndef XCAUSAL_CAUSAL_HPP
#define XCAUSAL_CAUSAL_HPP

/// @file
/// Causal read-outs from correlograms: Lead-Lag Ratio, characteristic delay,
/// direction, Monte Carlo percentile bands and day averages.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "xcausal/core.hpp"

namespace xcausal {

enum class Direction { XCausesY, YCausesX, Symmetric };

inline const char* to_string(Direction d) noexcept {
    switch (d) {
        case Direction::XCausesY: return "X_causes_Y";
        case Direction::YCausesX: return "Y_causes_X";
        case Direction::Symmetric: return "symmetric";
    }
    return "unknown";
}

struct LlrResult {
    /// sum_{h>0} rho^2 / sum_{h<0} rho^2; +inf when the denominator vanishes.
    double llr = 1.0;
    /// Lag of the correlogram maximum, seconds.
    double delay = 0.0;
    double peak_rho = 0.0;
    Direction direction = Direction::Symmetric;
    std::size_t n_pos = 0;
    std::size_t n_neg = 0;
};

inline constexpr double kDefaultSymmetricBand = 0.2;

/// Index of max rho; ties go to the smallest |h|, then to positive h.
inline std::size_t argmax_lag(const CrossCorrelogram& c) {
    const std::size_t mid = c.lag_grid.center();
    std::size_t best = mid;
    for (std::size_t i = 0; i < c.rho.size(); ++i) {
        if (c.rho[i] > c.rho[best]) {
            best = i;
        } else if (c.rho[i] == c.rho[best]) {
            const auto di = static_cast<std::ptrdiff_t>(i) - static_cast<std::ptrdiff_t>(mid);
            const auto db = static_cast<std::ptrdiff_t>(best) - static_cast<std::ptrdiff_t>(mid);
            if (std::abs(di) < std::abs(db) || (std::abs(di) == std::abs(db) && di > 0)) best = i;
        }
    }
    return best;
}

/// Lead-Lag Ratio of a correlogram. Zero lag is excluded from both sums.
/// With rho(h) = corr(X_{t-h}, Y_t), llr > 1 + theta reads as X causing Y.
inline LlrResult llr(const CrossCorrelogram& c, double theta = kDefaultSymmetricBand) {
    const std::size_t half = c.lag_grid.half_count;
    if (half < 1) throw Error(ErrorKind::InvalidArgument, "LLR needs at least one nonzero lag on each side");
    double pos = 0.0;
    double neg = 0.0;
    for (std::size_t k = 1; k <= half; ++k) {
        const double rp = c.rho[half + k];
        const double rn = c.rho[half - k];
        pos += rp * rp;
        neg += rn * rn;
    }
    LlrResult r;
    r.n_pos = half;
    r.n_neg = half;
    if (neg == 0.0) {
        r.llr = pos == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
    } else {
        r.llr = pos / neg;
    }
    const std::size_t best = argmax_lag(c);
    r.delay = c.lag_grid.lag(best);
    r.peak_rho = c.rho[best];
    if (r.llr > 1.0 + theta)
        r.direction = Direction::XCausesY;
    else if (r.llr < 1.0 / (1.0 + theta))
        r.direction = Direction::YCausesX;
    else
        r.direction = Direction::Symmetric;
    return r;
}

struct PercentileBand {
    LagGrid lag_grid;
    std::vector<double> p05;
    std::vector<double> p50;
    std::vector<double> p95;
};

/// Empirical q-quantile of sorted data, linear between order statistics.
inline double quantile_sorted(std::span<const double> sorted, double q) {
    if (sorted.empty()) throw Error(ErrorKind::InvalidArgument, "quantile of empty sample");
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

inline double quantile(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    return quantile_sorted(v, q);
}

inline void require_common_grid(std::span<const CrossCorrelogram> cs) {
    for (const auto& c : cs)
        if (!(c.lag_grid == cs.front().lag_grid)) throw Error(ErrorKind::GridMismatch, "correlograms use different lag grids");
}

inline constexpr std::size_t kMinBandTrials = 20;

/// Per-lag 5th, 50th and 95th percentiles over trials.
inline PercentileBand percentile_band(std::span<const CrossCorrelogram> trials, std::size_t min_trials = kMinBandTrials) {
    if (trials.size() < min_trials || trials.empty())
        throw Error(ErrorKind::TooFewTrials, "percentile band needs at least " + std::to_string(min_trials) + " trials");
    require_common_grid(trials);
    const LagGrid grid = trials.front().lag_grid;
    PercentileBand band{grid, std::vector<double>(grid.size()), std::vector<double>(grid.size()),
                        std::vector<double>(grid.size())};
    std::vector<double> col(trials.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        for (std::size_t k = 0; k < trials.size(); ++k) col[k] = trials[k].rho[i];
        std::sort(col.begin(), col.end());
        band.p05[i] = quantile_sorted(col, 0.05);
        band.p50[i] = quantile_sorted(col, 0.50);
        band.p95[i] = quantile_sorted(col, 0.95);
    }
    return band;
}

/// Element-wise mean over days; the residual diagnostic is the worst day's.
inline CrossCorrelogram daily_average(std::span<const CrossCorrelogram> days) {
    if (days.empty()) throw Error(ErrorKind::TooFewTrials, "no correlograms to average");
    require_common_grid(days);
    std::vector<double> acc(days.front().rho.size(), 0.0);
    double residual = 0.0;
    for (const auto& d : days) {
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += d.rho[i];
        residual = std::max(residual, d.imag_residual);
    }
    for (double& a : acc) a /= static_cast<double>(days.size());
    return {days.front().lag_grid, std::move(acc), residual};
}

/// Correlogram of (Y, X) from that of (X, Y): rho_yx(h) = rho_xy(-h).
inline CrossCorrelogram reversed(const CrossCorrelogram& c) {
    std::vector<double> r(c.rho.rbegin(), c.rho.rend());
    return {c.lag_grid, std::move(r), c.imag_residual};
}

}  // namespace xcausal

#endif  // XCAUSAL_CAUSAL_HPP
