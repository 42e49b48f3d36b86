#ifndef XCAUSAL_EXPERIMENTS_HPP
#define XCAUSAL_EXPERIMENTS_HPP

/// @file
/// Seeded Monte Carlo studies: LOCF versus Fourier lead-lag bias, the LRD
/// erasure band, Hayashi-Yoshida on long memory, lag recovery from a causal
/// kernel, and the variance of the correlogram against P.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "xcausal/baselines.hpp"
#include "xcausal/causal.hpp"
#include "xcausal/core.hpp"
#include "xcausal/lrd.hpp"
#include "xcausal/parallel.hpp"
#include "xcausal/pipeline.hpp"
#include "xcausal/random.hpp"
#include "xcausal/spectral.hpp"
#include "xcausal/synth.hpp"

namespace xcausal {

struct MeanStd {
    double mean = 0.0;
    /// Sample standard deviation (n - 1 denominator).
    double std = 0.0;
};

inline MeanStd summarize(const std::vector<double>& v) { return {mean(v), stdev(v)}; }

/// Irregular samples of a pair of fine-grid paths, drawn with independent
/// sub-streams of `seed`.
inline std::pair<IrregularSeries, IrregularSeries> sample_pair(const PathPair& paths, std::size_t n_x, std::size_t n_y,
                                                               std::uint64_t seed) {
    return {sample_irregular(paths.x, n_x, stream_seed(seed, 1), "X"),
            sample_irregular(paths.y, n_y, stream_seed(seed, 2), "Y")};
}

// ---------------------------------------------------------------------------
// LOCF versus Fourier on simultaneously correlated Brownian motions

struct Table1Config {
    std::size_t n1 = 10000;
    std::size_t fine_steps = std::size_t{1} << 17;
    double span = 1.0;
    std::size_t projections = 1000;
    double rho = 0.9;
    std::size_t half_lags = 40;
    /// Fourier lag step; 0 means span / projections.
    double fourier_lag_step = 0.0;
    Centering centering = Centering::Bridge;
    std::size_t trials = 100;
    std::uint64_t seed = 1;
    std::size_t threads = 1;
};

struct Table1Row {
    double ratio = 1.0;
    MeanStd locf;
    MeanStd fourier;
};

/// LLR of the LOCF regular-grid estimator on differenced resampled paths.
/// The grid step is the denser series' mean gap (span / N1) and the grid
/// starts at the later first observation.
inline LlrResult locf_llr(const IrregularSeries& x, const IrregularSeries& y, double step, std::size_t half_lags) {
    const double start = std::max(x.start(), y.start());
    const double stop = std::min(x.end(), y.end());
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step)) + 1;
    const RegularSeries dx = demean(difference(locf_resample(x, start, step, count)));
    const RegularSeries dy = demean(difference(locf_resample(y, start, step, count)));
    return llr(regular_xcov(dx, dy, half_lags));
}

inline Table1Row locf_llr_experiment(double ratio, const Table1Config& cfg) {
    detail::require(ratio >= 1.0, ErrorKind::InvalidArgument, "ratio must be >= 1");
    detail::require(cfg.trials >= 2, ErrorKind::TooFewTrials, "need at least 2 trials");
    const double step = cfg.span / static_cast<double>(cfg.fine_steps);
    const auto n2 = static_cast<std::size_t>(std::llround(static_cast<double>(cfg.n1) / ratio));
    const FrequencyGrid grid = span_grid(cfg.span, cfg.projections);
    const double dh = cfg.fourier_lag_step > 0 ? cfg.fourier_lag_step : cfg.span / static_cast<double>(cfg.projections);
    const LagGrid lags(dh, cfg.half_lags);
    const double locf_step = cfg.span / static_cast<double>(cfg.n1);
    FourierOptions o;
    o.centering = cfg.centering;

    std::vector<double> locf(cfg.trials);
    std::vector<double> fourier(cfg.trials);
    parallel_for(cfg.trials, cfg.threads, [&](std::size_t i) {
        const std::uint64_t s = trial_seed(cfg.seed, i);
        const PathPair paths = correlated_fbm_paths(0.5, cfg.rho, cfg.fine_steps, step, stream_seed(s, 0));
        const auto [x, y] = sample_pair(paths, cfg.n1, n2, s);
        locf[i] = locf_llr(x, y, locf_step, cfg.half_lags).llr;
        fourier[i] = llr(fourier_correlogram(x, y, grid, lags, o).correlogram).llr;
    });
    return {ratio, summarize(locf), summarize(fourier)};
}

// ---------------------------------------------------------------------------
// Correlogram band of independent fBm pairs with and without erasure

struct LrdBandConfig {
    double hurst = 0.4;
    std::size_t n_x = 9998;
    std::size_t n_y = 6000;
    std::size_t fine_steps = std::size_t{1} << 17;
    double span = 1.0;
    std::size_t projections = 600;
    std::size_t half_lags = 20;
    /// 0 means span / projections.
    double lag_step = 0.0;
    double low_fraction = 0.1;
    Centering centering = Centering::Mean;
    std::size_t trials = 100;
    std::uint64_t seed = 2;
    std::size_t threads = 1;
};

struct LrdBandResult {
    PercentileBand raw;
    PercentileBand erased;
    std::vector<double> hurst_estimates;
};

/// Smallest p05 and largest p95 over nonzero lags.
inline std::pair<double, double> band_extent(const PercentileBand& b) {
    double lo = 0.0;
    double hi = 0.0;
    for (std::size_t i = 0; i < b.p05.size(); ++i) {
        if (i == b.lag_grid.center()) continue;
        lo = std::min(lo, b.p05[i]);
        hi = std::max(hi, b.p95[i]);
    }
    return {lo, hi};
}

inline LrdBandResult lrd_band_experiment(const LrdBandConfig& cfg) {
    const double step = cfg.span / static_cast<double>(cfg.fine_steps);
    const FrequencyGrid grid = span_grid(cfg.span, cfg.projections);
    const double dh = cfg.lag_step > 0 ? cfg.lag_step : cfg.span / static_cast<double>(cfg.projections);
    const LagGrid lags(dh, cfg.half_lags);
    std::vector<CrossCorrelogram> raw(cfg.trials, CrossCorrelogram(lags, std::vector<double>(lags.size())));
    std::vector<CrossCorrelogram> erased(raw);
    std::vector<double> hurst(cfg.trials);
    FourierOptions none;
    none.whitening = Whitening::None;
    FourierOptions estimated;
    estimated.whitening = Whitening::Estimated;
    estimated.low_fraction = cfg.low_fraction;
    parallel_for(cfg.trials, cfg.threads, [&](std::size_t i) {
        const std::uint64_t s = trial_seed(cfg.seed, i);
        // rho = 0 gives two independent fBm paths
        const PathPair paths = correlated_fbm_paths(cfg.hurst, 0.0, cfg.fine_steps, step, stream_seed(s, 0));
        const auto [x, y] = sample_pair(paths, cfg.n_x, cfg.n_y, s);
        const FourierProjection px = project(center(x, cfg.centering), grid);
        const FourierProjection py = project(center(y, cfg.centering), grid);
        raw[i] = fourier_correlogram(px, py, lags, none).correlogram;
        const FourierPairResult e = fourier_correlogram(px, py, lags, estimated);
        erased[i] = e.correlogram;
        hurst[i] = e.x.hurst->hurst;
    });
    return {percentile_band(raw), percentile_band(erased), std::move(hurst)};
}

// ---------------------------------------------------------------------------
// Lagged Hayashi-Yoshida versus erased Fourier on correlated long memory

struct HyFailureConfig {
    double hurst = 0.8;
    double rho = 0.9;
    std::size_t n_x = 9998;
    std::size_t n_y = 6000;
    std::size_t fine_steps = std::size_t{1} << 17;
    double span = 1.0;
    std::size_t projections = 1000;
    std::size_t half_lags = 20;
    /// 0 means the denser series' mean gap, span / n_x.
    double lag_step = 0.0;
    /// Lags with |k| > far_steps enter the medians.
    std::size_t far_steps = 5;
    double low_fraction = 0.1;
    Centering centering = Centering::Bridge;
    std::size_t trials = 100;
    std::uint64_t seed = 3;
    std::size_t threads = 1;
};

struct HyFailureResult {
    double hy_median_far = 0.0;
    double fourier_median_far = 0.0;
    std::vector<CrossCorrelogram> hy;
    std::vector<CrossCorrelogram> fourier;
};

inline double median_abs_far(const std::vector<CrossCorrelogram>& cs, std::size_t far_steps) {
    std::vector<double> v;
    for (const auto& c : cs) {
        const auto half = static_cast<std::ptrdiff_t>(c.lag_grid.half_count);
        for (std::ptrdiff_t k = -half; k <= half; ++k)
            if (static_cast<std::size_t>(std::abs(k)) > far_steps) v.push_back(std::abs(c.at_lag_index(k)));
    }
    return quantile(std::move(v), 0.5);
}

inline HyFailureResult hy_failure_experiment(const HyFailureConfig& cfg) {
    const double step = cfg.span / static_cast<double>(cfg.fine_steps);
    const FrequencyGrid grid = span_grid(cfg.span, cfg.projections);
    const double dh = cfg.lag_step > 0 ? cfg.lag_step : cfg.span / static_cast<double>(cfg.n_x);
    const LagGrid lags(dh, cfg.half_lags);
    HyFailureResult r;
    r.hy.assign(cfg.trials, CrossCorrelogram(lags, std::vector<double>(lags.size())));
    r.fourier = r.hy;
    FourierOptions estimated;
    estimated.whitening = Whitening::Estimated;
    estimated.low_fraction = cfg.low_fraction;
    estimated.centering = cfg.centering;
    parallel_for(cfg.trials, cfg.threads, [&](std::size_t i) {
        const std::uint64_t s = trial_seed(cfg.seed, i);
        const PathPair paths = correlated_fbm_paths(cfg.hurst, cfg.rho, cfg.fine_steps, step, stream_seed(s, 0));
        const auto [x, y] = sample_pair(paths, cfg.n_x, cfg.n_y, s);
        r.hy[i] = hy_lagged_correlogram(x, y, lags);
        r.fourier[i] = fourier_correlogram(x, y, grid, lags, estimated).correlogram;
    });
    r.hy_median_far = median_abs_far(r.hy, cfg.far_steps);
    r.fourier_median_far = median_abs_far(r.fourier, cfg.far_steps);
    return r;
}

// ---------------------------------------------------------------------------
// Delay recovery from a kernel-driven pair

struct LagRecoveryConfig {
    CausalKernel kernel{0.013, 400.0, 200.0};
    double noise_amplitude = 1.0;
    double span = 0.25;
    std::size_t fine_steps = std::size_t{1} << 18;
    std::size_t n_obs = 60000;
    std::size_t projections = 3000;
    /// Lag grid step; the frequency grid tops out at its Nyquist frequency.
    double lag_step = 0.002;
    double max_lag = 0.05;
    double alpha = 1.0;
    double tolerance = 0.005;
    std::size_t trials = 100;
    std::uint64_t seed = 6;
    std::size_t threads = 1;
};

struct LagRecoveryResult {
    std::vector<LlrResult> trials;
    std::vector<std::size_t> n_obs_x;
    std::size_t recovered = 0;
};

inline LagRecoveryResult lag_recovery_experiment(const LagRecoveryConfig& cfg) {
    const double step = cfg.span / static_cast<double>(cfg.fine_steps);
    const FrequencyGrid grid = lag_resolution_grid(cfg.lag_step, cfg.projections);
    const LagGrid lags(cfg.lag_step, static_cast<std::size_t>(std::llround(cfg.max_lag / cfg.lag_step)));
    FourierOptions o;
    o.centering = Centering::Bridge;
    o.alpha = cfg.alpha;
    LagRecoveryResult r;
    r.trials.resize(cfg.trials);
    r.n_obs_x.resize(cfg.trials);
    parallel_for(cfg.trials, cfg.threads, [&](std::size_t i) {
        const std::uint64_t s = trial_seed(cfg.seed, i);
        const PathPair paths = kernel_driven_paths(cfg.kernel, cfg.fine_steps, step, stream_seed(s, 0), cfg.noise_amplitude);
        const auto [x, y] = sample_pair(paths, cfg.n_obs, cfg.n_obs, s);
        r.n_obs_x[i] = x.size();
        r.trials[i] = llr(fourier_correlogram(x, y, grid, lags, o).correlogram);
    });
    for (const auto& t : r.trials)
        if (std::abs(t.delay - cfg.kernel.tau) <= cfg.tolerance + 1e-12 && t.direction == Direction::XCausesY)
            ++r.recovered;
    return r;
}

// ---------------------------------------------------------------------------
// Spread of rho(h0) against the number of projections

struct VarianceStudyConfig {
    std::vector<std::size_t> projections{10, 100, 1000, 10000};
    std::size_t n_obs = 10000;
    std::size_t fine_steps = std::size_t{1} << 17;
    double span = 1.0;
    double lag_step = 0.001;
    std::size_t half_lags = 5;
    Centering centering = Centering::Bridge;
    std::size_t trials = 100;
    std::uint64_t seed = 7;
    std::size_t threads = 1;
};

struct VarianceRow {
    std::size_t projections = 0;
    /// Standard deviation of rho at each lag across trials.
    std::vector<double> std_by_lag;
};

/// Independent Brownian pairs, differentiated in frequency. Every P uses the
/// same simulated trials.
inline std::vector<VarianceRow> variance_study(const VarianceStudyConfig& cfg) {
    for (std::size_t p : cfg.projections)
        detail::require(p >= 2, ErrorKind::InvalidArgument, "frequency grid requires P >= 2");
    const double step = cfg.span / static_cast<double>(cfg.fine_steps);
    const LagGrid lags(cfg.lag_step, cfg.half_lags);
    const std::size_t np = cfg.projections.size();
    std::vector<std::vector<std::vector<double>>> rho(np, std::vector<std::vector<double>>(cfg.trials));
    parallel_for(cfg.trials, cfg.threads, [&](std::size_t i) {
        const std::uint64_t s = trial_seed(cfg.seed, i);
        const PathPair paths = correlated_fbm_paths(0.5, 0.0, cfg.fine_steps, step, stream_seed(s, 0));
        const auto [x, y] = sample_pair(paths, cfg.n_obs, cfg.n_obs, s);
        const IrregularSeries cx = center(x, cfg.centering);
        const IrregularSeries cy = center(y, cfg.centering);
        for (std::size_t j = 0; j < np; ++j) {
            const FrequencyGrid grid = span_grid(cfg.span, cfg.projections[j]);
            rho[j][i] = fourier_correlogram(project(cx, grid), project(cy, grid), lags).correlogram.rho;
        }
    });
    std::vector<VarianceRow> out;
    for (std::size_t j = 0; j < np; ++j) {
        VarianceRow row{cfg.projections[j], std::vector<double>(lags.size())};
        for (std::size_t k = 0; k < lags.size(); ++k) {
            std::vector<double> col(cfg.trials);
            for (std::size_t i = 0; i < cfg.trials; ++i) col[i] = rho[j][i][k];
            row.std_by_lag[k] = stdev(col);
        }
        out.push_back(std::move(row));
    }
    return out;
}

}  // namespace xcausal

#endif  // XCAUSAL_EXPERIMENTS_HPP
