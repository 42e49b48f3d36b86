#ifndef XCAUSAL_LRD_HPP
#define XCAUSAL_LRD_HPP

/// @file
/// Long-range dependence: Hurst exponent from the low-frequency periodogram,
/// fractional pole elimination on projections, and time-domain fractional
/// differencing used to cross-check it.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "xcausal/core.hpp"
#include "xcausal/spectral.hpp"

namespace xcausal {

struct HurstEstimate {
    double hurst = 0.5;
    /// Slope of log power against log frequency.
    double slope = 0.0;
    /// Standard error of the Hurst estimate (half the slope's).
    double stderr_hurst = 0.0;
    std::size_t n_freqs_used = 0;
    bool clipped = false;
};

inline constexpr double kHurstMin = 0.01;
inline constexpr double kHurstMax = 0.99;

struct LogLogFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    std::size_t n = 0;
};

/// OLS of log(power) on log(frequency) over bins 1..bins (positive power only).
inline LogLogFit log_log_fit(const CrossSpectrum& spec, std::size_t bins) {
    std::vector<double> lx;
    std::vector<double> ly;
    for (std::size_t l = 0; l < std::min(bins, spec.values.size()); ++l) {
        const double p = spec.values[l].real();
        if (p > 0 && std::isfinite(p)) {
            lx.push_back(std::log(spec.grid.frequency(l + 1)));
            ly.push_back(std::log(p));
        }
    }
    LogLogFit fit;
    fit.n = lx.size();
    if (fit.n < 3) return fit;
    const double mx = mean(lx);
    const double my = mean(ly);
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double rss = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        const double r = ly[i] - fit.intercept - fit.slope * lx[i];
        rss += r * r;
    }
    fit.slope_stderr = std::sqrt(rss / static_cast<double>(fit.n - 2) / sxx);
    return fit;
}

inline constexpr std::size_t kMinHurstFrequencies = 8;

/// Periodogram regression over the lowest ceil(low_fraction * P) bins. An
/// fBm spectrum behaves as f^-(2H+1) near zero, so H = (-slope - 1) / 2.
inline HurstEstimate estimate_hurst(const CrossSpectrum& auto_spec, double low_fraction = 0.1) {
    detail::require(low_fraction > 0.0 && low_fraction <= 0.5, ErrorKind::InvalidArgument,
                    "low_fraction must lie in (0, 0.5]");
    const auto bins = static_cast<std::size_t>(std::ceil(low_fraction * static_cast<double>(auto_spec.values.size())));
    const LogLogFit fit = log_log_fit(auto_spec, bins);
    if (fit.n < kMinHurstFrequencies)
        throw Error(ErrorKind::TooFewFrequencies, "Hurst regression needs at least 8 usable frequencies");
    HurstEstimate est;
    est.slope = fit.slope;
    est.stderr_hurst = fit.slope_stderr / 2.0;
    est.n_freqs_used = fit.n;
    const double h = (-fit.slope - 1.0) / 2.0;
    est.hurst = std::clamp(h, kHurstMin, kHurstMax);
    est.clipped = est.hurst != h;
    return est;
}

/// Multiplies bin l by (i l df)^alpha, principal branch:
/// (i f)^alpha = f^alpha exp(i alpha pi / 2) for f > 0.
inline FourierProjection pole_eliminate(const FourierProjection& p, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 2.0)) throw Error(ErrorKind::AlphaOutOfRange, "alpha must lie in [0, 2]");
    if (alpha == 0.0) return p;
    const Complex phase = std::polar(1.0, alpha * std::numbers::pi / 2.0);
    std::vector<Complex> c(p.coeffs);
    for (std::size_t l = 0; l < c.size(); ++l) c[l] *= std::pow(p.grid.frequency(l + 1), alpha) * phase;
    return {p.grid, std::move(c), p.n_obs, p.label};
}

inline constexpr double kMaxWhiteningAlpha = 1.5;

/// Order of pole elimination for a Hurst exponent, H + 1/2 clamped to [0, 1.5].
inline double whitening_alpha(double hurst) { return std::clamp(hurst + 0.5, 0.0, kMaxWhiteningAlpha); }

struct WhitenedPair {
    FourierProjection x;
    FourierProjection y;
    double alpha_x;
    double alpha_y;
    /// Low-frequency log-log slopes of the whitened auto-spectra.
    double slope_x;
    double slope_y;
    /// Both slopes within +-0.3 of zero.
    bool flat;
};

inline WhitenedPair whiten_pair(const FourierProjection& px, const FourierProjection& py, double hurst_x,
                                double hurst_y, double low_fraction = 0.1) {
    const double ax = whitening_alpha(hurst_x);
    const double ay = whitening_alpha(hurst_y);
    FourierProjection wx = pole_eliminate(px, ax);
    FourierProjection wy = pole_eliminate(py, ay);
    const auto bins = static_cast<std::size_t>(std::ceil(low_fraction * static_cast<double>(px.coeffs.size())));
    const double sx = log_log_fit(cross_spectrum(wx, wx), bins).slope;
    const double sy = log_log_fit(cross_spectrum(wy, wy), bins).slope;
    const bool flat = std::abs(sx) <= 0.3 && std::abs(sy) <= 0.3;
    return {std::move(wx), std::move(wy), ax, ay, sx, sy, flat};
}

/// Binomial weights of (1 - B)^alpha: w_0 = 1, w_h = w_{h-1} (h - 1 - alpha) / h.
inline std::vector<double> frac_diff_weights(double alpha, std::size_t truncation) {
    std::vector<double> w(truncation + 1);
    w[0] = 1.0;
    for (std::size_t h = 1; h <= truncation; ++h)
        w[h] = w[h - 1] * (static_cast<double>(h) - 1.0 - alpha) / static_cast<double>(h);
    return w;
}

struct FracDiffResult {
    RegularSeries series;
    /// Leading outputs computed from fewer than truncation + 1 terms.
    std::size_t burn_in;
};

/// Time-domain fractional difference (Delta^alpha X)_t = sum_{h=0}^{K} w_h X_{t-h}.
/// Values before the series start are taken as zero.
inline FracDiffResult frac_diff_time(const RegularSeries& s, double alpha, std::size_t truncation = 256) {
    if (!(alpha >= 0.0 && alpha <= 2.0)) throw Error(ErrorKind::AlphaOutOfRange, "alpha must lie in [0, 2]");
    if (truncation > s.size()) throw Error(ErrorKind::TruncationTooLong, "truncation exceeds series length");
    const std::vector<double> w = frac_diff_weights(alpha, truncation);
    const auto& x = s.values();
    std::vector<double> out(x.size());
    for (std::size_t t = 0; t < x.size(); ++t) {
        double acc = 0.0;
        const std::size_t hmax = std::min(truncation, t);
        for (std::size_t h = 0; h <= hmax; ++h) acc += w[h] * x[t - h];
        out[t] = acc;
    }
    return {RegularSeries(s.start(), s.step(), std::move(out)), truncation};
}

}  // namespace xcausal

#endif  // XCAUSAL_LRD_HPP
