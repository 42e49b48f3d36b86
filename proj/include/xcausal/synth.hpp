#ifndef XCAUSAL_SYNTH_HPP
#define XCAUSAL_SYNTH_HPP

/// @file
/// Synthetic processes: fractional Gaussian noise by circulant embedding,
/// correlated pairs, causal-kernel driven responses and irregular sampling
/// of fine-grid paths. Every generator is a pure function of its arguments.

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <memory>
#include <mutex>
#include <random>
#include <vector>

#include "xcausal/core.hpp"
#include "xcausal/random.hpp"

namespace xcausal {

/// phi(t) = alpha * exp(-beta (t - tau)) for t >= tau, zero before.
struct CausalKernel {
    double tau = 0.0;
    double alpha = 1.0;
    double beta = 0.0;

    double operator()(double t) const noexcept { return t < tau ? 0.0 : alpha * std::exp(-beta * (t - tau)); }

    void validate() const {
        detail::require(tau >= 0 && std::isfinite(tau), ErrorKind::InvalidArgument, "kernel tau must be >= 0");
        detail::require(beta >= 0 && std::isfinite(beta), ErrorKind::InvalidArgument, "kernel beta must be >= 0");
        detail::require(std::isfinite(alpha), ErrorKind::NonFinite, "kernel alpha is not finite");
    }
};

/// Two paths on a common fine grid.
struct PathPair {
    RegularSeries x;
    RegularSeries y;
    double hurst;
    double rho;
    double tau;
};

/// Autocovariance of unit-variance fractional Gaussian noise at integer lag k.
inline double fgn_autocovariance(double hurst, double k) {
    const double h2 = 2.0 * hurst;
    return 0.5 * (std::pow(std::abs(k + 1.0), h2) - 2.0 * std::pow(std::abs(k), h2) + std::pow(std::abs(k - 1.0), h2));
}

namespace detail {

inline std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftwDeleter {
    void operator()(fftw_complex* p) const noexcept { fftw_free(p); }
};

/// In-place forward complex DFT of `data` (FFTW sign convention, unnormalized).
inline void fft_forward(std::vector<std::complex<double>>& data) {
    const int n = static_cast<int>(data.size());
    std::unique_ptr<fftw_complex, FftwDeleter> buf(fftw_alloc_complex(data.size()));
    fftw_plan plan;
    {
        // only plan creation is not thread safe
        std::lock_guard lock(fftw_planner_mutex());
        plan = fftw_plan_dft_1d(n, buf.get(), buf.get(), FFTW_FORWARD, FFTW_ESTIMATE);
    }
    for (std::size_t i = 0; i < data.size(); ++i) {
        buf.get()[i][0] = data[i].real();
        buf.get()[i][1] = data[i].imag();
    }
    fftw_execute(plan);
    for (std::size_t i = 0; i < data.size(); ++i) data[i] = {buf.get()[i][0], buf.get()[i][1]};
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
}

}  // namespace detail

/// Eigenvalues of the minimal circulant embedding (size 2n) of the fGn covariance.
inline std::vector<double> fgn_circulant_spectrum(double hurst, std::size_t n) {
    const std::size_t m = 2 * n;
    std::vector<std::complex<double>> c(m);
    for (std::size_t k = 0; k <= n; ++k) c[k] = fgn_autocovariance(hurst, static_cast<double>(k));
    for (std::size_t k = n + 1; k < m; ++k) c[k] = c[m - k];
    detail::fft_forward(c);
    std::vector<double> lambda(m);
    for (std::size_t k = 0; k < m; ++k) lambda[k] = c[k].real();
    return lambda;
}

struct FgnOptions {
    /// Negative eigenvalues below -tolerance * max eigenvalue are an error
    /// unless clipping is allowed.
    double negative_tolerance = 1e-9;
    bool clip_negative = false;
};

/// Fractional Gaussian noise with unit variance per step: n increments whose
/// cumulative sum is a fractional Brownian motion path. Exact covariance via
/// circulant embedding. `clipped`, if given, reports whether negative
/// eigenvalues had to be zeroed.
inline std::vector<double> simulate_fgn(double hurst, std::size_t n, std::uint64_t seed, const FgnOptions& opts = {},
                                        bool* clipped = nullptr) {
    detail::require(hurst > 0.0 && hurst < 1.0, ErrorKind::InvalidArgument, "Hurst exponent must lie in (0, 1)");
    detail::require(n >= 2, ErrorKind::InvalidArgument, "fGn needs n >= 2");
    std::vector<double> lambda = fgn_circulant_spectrum(hurst, n);
    const double lmax = *std::max_element(lambda.begin(), lambda.end());
    bool any_clipped = false;
    for (double& l : lambda) {
        if (l < 0.0) {
            if (l < -opts.negative_tolerance * lmax && !opts.clip_negative)
                throw Error(ErrorKind::EmbeddingFailure, "circulant embedding has a negative eigenvalue");
            any_clipped = any_clipped || l < -opts.negative_tolerance * lmax;
            l = 0.0;
        }
    }
    if (clipped) *clipped = any_clipped;

    const std::size_t m = lambda.size();
    Rng rng = make_rng(seed);
    std::normal_distribution<double> normal;
    std::vector<std::complex<double>> w(m);
    for (std::size_t k = 0; k < m; ++k) {
        const double s = std::sqrt(lambda[k] / static_cast<double>(m));
        const double re = normal(rng);
        const double im = normal(rng);
        w[k] = {s * re, s * im};
    }
    detail::fft_forward(w);
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = w[k].real();
    return out;
}

/// Two fGn sequences with instantaneous increment correlation rho:
/// second = rho * first + sqrt(1 - rho^2) * independent fGn.
inline std::pair<std::vector<double>, std::vector<double>> correlated_pair(double hurst, double rho, std::size_t n,
                                                                           std::uint64_t seed) {
    detail::require(std::abs(rho) <= 1.0, ErrorKind::InvalidArgument, "|rho| must be <= 1");
    std::vector<double> a = simulate_fgn(hurst, n, stream_seed(seed, 0));
    std::vector<double> b(n);
    const double c = std::sqrt(std::max(0.0, 1.0 - rho * rho));
    if (c == 0.0) {
        for (std::size_t i = 0; i < n; ++i) b[i] = rho * a[i];
    } else {
        std::vector<double> z = simulate_fgn(hurst, n, stream_seed(seed, 1));
        for (std::size_t i = 0; i < n; ++i) b[i] = rho * a[i] + c * z[i];
    }
    return {std::move(a), std::move(b)};
}

/// Increments dY_n = noise_amplitude * dW_n + sum_{k>=0} phi(k step) dX_{n-k} step,
/// with dW i.i.d. normal of variance `step`. The kernel is truncated once
/// phi < 1e-8 alpha (never when beta = 0). Runs in O(n) by the exponential
/// recurrence over the truncated window.
inline std::vector<double> kernel_drive(const std::vector<double>& x_increments, const CausalKernel& kernel,
                                        double step, std::uint64_t noise_seed, double noise_amplitude = 1.0) {
    kernel.validate();
    detail::require(step > 0 && std::isfinite(step), ErrorKind::InvalidArgument, "step must be positive");
    const std::size_t n = x_increments.size();
    std::vector<double> y(n, 0.0);

    // window [k0, k1] of lags with phi(k step) >= 1e-8 alpha
    const auto k0 = static_cast<std::size_t>(std::max(0.0, std::ceil(kernel.tau / step - 1e-9)));
    const bool truncated = kernel.beta > 0.0;
    std::size_t k1 = n;
    if (truncated) {
        const double horizon = kernel.tau + std::log(1e8) / kernel.beta;
        k1 = static_cast<std::size_t>(std::floor(horizon / step + 1e-9));
    }
    const double r = std::exp(-kernel.beta * step);
    const double c_first = kernel(static_cast<double>(k0) * step) * step;
    const double c_after = truncated ? kernel(static_cast<double>(k1 + 1) * step) * step : 0.0;

    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        s *= r;
        if (i >= k0) s += c_first * x_increments[i - k0];
        if (truncated && i >= k1 + 1) s -= c_after * x_increments[i - k1 - 1];
        y[i] = s;
    }
    if (noise_amplitude != 0.0) {
        Rng rng = make_rng(noise_seed);
        std::normal_distribution<double> normal(0.0, std::sqrt(step) * noise_amplitude);
        for (double& v : y) v += normal(rng);
    }
    return y;
}

/// Path X_n = sum_{k<=n} increments_k on start + n * step.
inline RegularSeries cumulative_path(const std::vector<double>& increments, double start, double step) {
    std::vector<double> v(increments.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        acc += increments[i];
        v[i] = acc;
    }
    return {start, step, std::move(v)};
}

/// Draws n_obs uniform times on the path's span, snaps each to the nearest
/// grid point and drops collisions. Asking for at least the path length
/// returns the whole path.
inline IrregularSeries sample_irregular(const RegularSeries& path, std::size_t n_obs, std::uint64_t seed,
                                        std::string label = {}) {
    detail::require(n_obs >= 2, ErrorKind::InvalidArgument, "n_obs must be >= 2");
    const std::size_t len = path.size();
    if (n_obs >= len) return path.to_irregular(std::move(label));
    Rng rng = make_rng(seed);
    const double span = path.step() * static_cast<double>(len - 1);
    std::uniform_real_distribution<double> uniform(0.0, span);
    std::vector<std::size_t> idx(n_obs);
    for (auto& i : idx) {
        const double u = uniform(rng);
        i = std::min(len - 1, static_cast<std::size_t>(std::llround(u / path.step())));
    }
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    if (idx.size() < 2) throw Error(ErrorKind::EmptySeries, "irregular sample collapsed to fewer than 2 points");
    std::vector<double> t(idx.size());
    std::vector<double> v(idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k) {
        t[k] = path.time_at(idx[k]);
        v[k] = path.values()[idx[k]];
    }
    return {std::move(t), std::move(v), std::move(label)};
}

/// Noisy lagged copy of an observed series: same values plus i.i.d. normal
/// observation noise, timestamps moved by +tau.
inline IrregularSeries lagged_surrogate(const IrregularSeries& x, double tau, double noise_sd, std::uint64_t seed,
                                        std::string label = {}) {
    Rng rng = make_rng(seed);
    std::normal_distribution<double> normal(0.0, noise_sd);
    std::vector<double> t(x.timestamps());
    std::vector<double> v(x.values());
    for (std::size_t i = 0; i < t.size(); ++i) {
        t[i] += tau;
        if (noise_sd > 0) v[i] += normal(rng);
    }
    return {std::move(t), std::move(v), std::move(label)};
}

/// Correlated fBm pair on a fine grid of n steps of size `step`.
inline PathPair correlated_fbm_paths(double hurst, double rho, std::size_t n, double step, std::uint64_t seed) {
    auto [a, b] = correlated_pair(hurst, rho, n, seed);
    const double scale = std::pow(step, hurst);
    for (double& v : a) v *= scale;
    for (double& v : b) v *= scale;
    return {cumulative_path(a, 0.0, step), cumulative_path(b, 0.0, step), hurst, rho, 0.0};
}

/// Brownian driver X and kernel-driven response Y on a fine grid.
inline PathPair kernel_driven_paths(const CausalKernel& kernel, std::size_t n, double step, std::uint64_t seed,
                                    double noise_amplitude = 1.0) {
    Rng rng = make_rng(stream_seed(seed, 0));
    std::normal_distribution<double> normal(0.0, std::sqrt(step));
    std::vector<double> dx(n);
    for (double& v : dx) v = normal(rng);
    std::vector<double> dy = kernel_drive(dx, kernel, step, stream_seed(seed, 1), noise_amplitude);
    return {cumulative_path(dx, 0.0, step), cumulative_path(dy, 0.0, step), 0.5, 0.0, kernel.tau};
}

}  // namespace xcausal

#endif  // XCAUSAL_SYNTH_HPP
