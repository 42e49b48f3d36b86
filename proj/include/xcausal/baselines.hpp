#ifndef XCAUSAL_BASELINES_HPP
#define XCAUSAL_BASELINES_HPP

/// @file
/// Time-domain comparators: last-observation-carried-forward resampling with
/// the regular-grid cross-covariance estimator, and the Hayashi-Yoshida
/// estimator with a lagged correlogram built on it.

#include <algorithm>
#include <cmath>
#include <vector>

#include "xcausal/core.hpp"

namespace xcausal {

/// Value of the last observation at or before each grid point
/// start + n * step, n = 0..count-1.
inline RegularSeries locf_resample(const IrregularSeries& s, double start, double step, std::size_t count) {
    if (start < s.start()) throw Error(ErrorKind::GridBeforeData, "LOCF grid starts before the first observation");
    std::vector<double> out(count);
    const auto& t = s.timestamps();
    const auto& v = s.values();
    std::size_t j = 0;
    for (std::size_t n = 0; n < count; ++n) {
        const double g = start + step * static_cast<double>(n);
        while (j + 1 < t.size() && t[j + 1] <= g) ++j;
        out[n] = v[j];
    }
    return {start, step, std::move(out)};
}

/// First differences of a regular series (one sample shorter).
inline RegularSeries difference(const RegularSeries& s) {
    const auto& v = s.values();
    std::vector<double> d(v.size() - 1);
    for (std::size_t i = 0; i + 1 < v.size(); ++i) d[i] = v[i + 1] - v[i];
    return {s.start() + s.step(), s.step(), std::move(d)};
}

inline RegularSeries demean(const RegularSeries& s) {
    std::vector<double> v(s.values());
    const double m = mean(v);
    for (double& x : v) x -= m;
    return {s.start(), s.step(), std::move(v)};
}

/// gamma(h) = sum_n x_{n-h} y_n / (N - |h| - 1) for h = -L..L grid steps,
/// normalized by sqrt(gamma_xx(0) gamma_yy(0)). Inputs are used as given
/// (no centering).
inline CrossCorrelogram regular_xcov(const RegularSeries& x, const RegularSeries& y, std::size_t max_lag_steps) {
    if (!x.same_grid(y)) throw Error(ErrorKind::GridMismatch, "regular series are on different grids");
    const std::size_t n = x.size();
    if (2 * max_lag_steps >= n) throw Error(ErrorKind::InvalidArgument, "max lag must be below N/2");
    const auto& xv = x.values();
    const auto& yv = y.values();
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += xv[i] * xv[i];
        syy += yv[i] * yv[i];
    }
    const double denom0 = static_cast<double>(n - 1);
    const double norm = std::sqrt((sxx / denom0) * (syy / denom0));
    if (!(norm > 0.0)) throw Error(ErrorKind::DegenerateVariance, "constant input to regular_xcov");
    const LagGrid grid(x.step(), max_lag_steps);
    std::vector<double> rho(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const auto h = static_cast<std::ptrdiff_t>(k) - static_cast<std::ptrdiff_t>(max_lag_steps);
        const std::size_t a = static_cast<std::size_t>(std::abs(h));
        double acc = 0.0;
        if (h >= 0) {
            for (std::size_t i = a; i < n; ++i) acc += xv[i - a] * yv[i];
        } else {
            for (std::size_t i = 0; i + a < n; ++i) acc += xv[i + a] * yv[i];
        }
        rho[k] = acc / static_cast<double>(n - a - 1) / norm;
    }
    return {grid, std::move(rho)};
}

struct HyResult {
    double covariance = 0.0;
    double correlation = 0.0;
};

/// Sum of dx_i dy_j over pairs of inter-observation intervals (t_i, t_{i+1}]
/// and (s_j, s_{j+1}] that overlap with positive length. Two-pointer sweep.
inline double hayashi_yoshida_covariance(const IrregularSeries& x, const IrregularSeries& y) {
    const auto& tx = x.timestamps();
    const auto& ty = y.timestamps();
    const auto& vx = x.values();
    const auto& vy = y.values();
    if (std::max(x.start(), y.start()) >= std::min(x.end(), y.end()))
        throw Error(ErrorKind::NoOverlap, "'" + x.label() + "' and '" + y.label() + "' do not overlap in time");
    const std::size_t nx = tx.size() - 1;
    const std::size_t ny = ty.size() - 1;
    double acc = 0.0;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < nx && j < ny) {
        if (std::max(tx[i], ty[j]) < std::min(tx[i + 1], ty[j + 1]))
            acc += (vx[i + 1] - vx[i]) * (vy[j + 1] - vy[j]);
        if (tx[i + 1] < ty[j + 1]) {
            ++i;
        } else if (ty[j + 1] < tx[i + 1]) {
            ++j;
        } else {
            ++i;
            ++j;
        }
    }
    return acc;
}

/// Realized variance, the estimator of a series with itself.
inline double realized_variance(const IrregularSeries& s) {
    const auto& v = s.values();
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < v.size(); ++i) acc += (v[i + 1] - v[i]) * (v[i + 1] - v[i]);
    return acc;
}

inline HyResult hayashi_yoshida(const IrregularSeries& x, const IrregularSeries& y) {
    const double c = hayashi_yoshida_covariance(x, y);
    const double norm = std::sqrt(realized_variance(x) * realized_variance(y));
    if (!(norm > 0.0)) throw Error(ErrorKind::DegenerateVariance, "constant series in Hayashi-Yoshida");
    return {c, c / norm};
}

/// HY correlation between x and y with y's timestamps moved by -h, per lag h.
/// Same convention as the Fourier correlogram: a copy of x delayed by d
/// peaks at h = +d.
inline CrossCorrelogram hy_lagged_correlogram(const IrregularSeries& x, const IrregularSeries& y, const LagGrid& lags) {
    const double norm = std::sqrt(realized_variance(x) * realized_variance(y));
    if (!(norm > 0.0)) throw Error(ErrorKind::DegenerateVariance, "constant series in Hayashi-Yoshida");
    std::vector<double> rho(lags.size());
    for (std::size_t i = 0; i < rho.size(); ++i)
        rho[i] = hayashi_yoshida_covariance(x, y.shifted(-lags.lag(i))) / norm;
    return {lags, std::move(rho)};
}

}  // namespace xcausal

#endif  // XCAUSAL_BASELINES_HPP
