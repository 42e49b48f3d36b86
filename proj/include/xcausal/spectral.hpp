#ifndef XCAUSAL_SPECTRAL_HPP
#define XCAUSAL_SPECTRAL_HPP

/// @file
/// Non-uniform Fourier projection of irregular observations, cross-spectra,
/// frequency smoothing and inversion to a normalized cross-correlogram.

#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstring>
#include <istream>
#include <numbers>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "xcausal/core.hpp"

namespace xcausal {

using Complex = std::complex<double>;

/// Coefficients of one series on a frequency grid; coeffs[l-1] holds bin l.
/// Partial projections of the same series merge by addition.
struct FourierProjection {
    FrequencyGrid grid;
    std::vector<Complex> coeffs;
    std::uint64_t n_obs = 0;
    std::string label;

    FourierProjection(FrequencyGrid g, std::vector<Complex> c, std::uint64_t n, std::string lbl = {})
        : grid(g), coeffs(std::move(c)), n_obs(n), label(std::move(lbl)) {
        detail::require(coeffs.size() == grid.count, ErrorKind::InvalidArgument, "coefficient count differs from P");
        for (const auto& z : coeffs)
            detail::require(std::isfinite(z.real()) && std::isfinite(z.imag()), ErrorKind::NonFinite,
                            "projection coefficient is not finite");
    }

    static FourierProjection zero(FrequencyGrid g, std::string lbl = {}) {
        return {g, std::vector<Complex>(g.count), 0, std::move(lbl)};
    }
};

/// Element-wise product px * conj(py) on a shared grid.
struct CrossSpectrum {
    FrequencyGrid grid;
    std::vector<Complex> values;

    CrossSpectrum(FrequencyGrid g, std::vector<Complex> v) : grid(g), values(std::move(v)) {
        detail::require(values.size() == grid.count, ErrorKind::InvalidArgument, "spectrum length differs from P");
    }
};

/// Frequency grid with fundamental 2 pi / span.
inline FrequencyGrid span_grid(double span, std::size_t count) {
    detail::require(span > 0, ErrorKind::InvalidArgument, "span must be positive");
    return {2.0 * std::numbers::pi / span, count};
}

/// Frequency grid whose top frequency is the Nyquist frequency pi / delta_h
/// of a lag grid, split into `count` bins.
inline FrequencyGrid lag_resolution_grid(double delta_h, std::size_t count) {
    detail::require(delta_h > 0, ErrorKind::InvalidArgument, "delta_h must be positive");
    return {std::numbers::pi / (delta_h * static_cast<double>(count)), count};
}

namespace detail {

inline constexpr std::size_t kProjectionBlock = 8;
/// Phase recurrences restart from an exact exponential this often.
inline constexpr std::size_t kPhaseResync = 256;

/// Adds sum_n v_n exp(-i f_l t_n) into out[l-1] for l = 1..P.
inline void accumulate_projection(std::span<const double> t, std::span<const double> v, const FrequencyGrid& grid,
                                  std::span<Complex> out) {
    constexpr std::size_t B = kProjectionBlock;
    const std::size_t p = grid.count;
    const double df = grid.delta_f;
    std::vector<double> acc_re(p, 0.0);
    std::vector<double> acc_im(p, 0.0);

    std::array<double, B> wr{}, wi{}, zr{}, zi{}, vv{}, tt{};
    for (std::size_t start = 0; start < t.size(); start += B) {
        const std::size_t nb = std::min(B, t.size() - start);
        for (std::size_t j = 0; j < B; ++j) {
            tt[j] = j < nb ? t[start + j] : 0.0;
            vv[j] = j < nb ? v[start + j] : 0.0;
            wr[j] = std::cos(df * tt[j]);
            wi[j] = -std::sin(df * tt[j]);
            zr[j] = wr[j];
            zi[j] = wi[j];
        }
        for (std::size_t l = 0; l < p; ++l) {
            if (l != 0 && l % kPhaseResync == 0) {
                const double f = grid.frequency(l + 1);
                for (std::size_t j = 0; j < B; ++j) {
                    zr[j] = std::cos(f * tt[j]);
                    zi[j] = -std::sin(f * tt[j]);
                }
            }
            double sr = 0.0;
            double si = 0.0;
            for (std::size_t j = 0; j < B; ++j) {
                sr += vv[j] * zr[j];
                si += vv[j] * zi[j];
            }
            acc_re[l] += sr;
            acc_im[l] += si;
            for (std::size_t j = 0; j < B; ++j) {
                const double nr = zr[j] * wr[j] - zi[j] * wi[j];
                const double ni = zr[j] * wi[j] + zi[j] * wr[j];
                zr[j] = nr;
                zi[j] = ni;
            }
        }
    }
    for (std::size_t l = 0; l < p; ++l) out[l] += Complex(acc_re[l], acc_im[l]);
}

inline void require_same_grid(const FrequencyGrid& a, const FrequencyGrid& b) {
    if (!(a == b)) throw Error(ErrorKind::GridMismatch, "frequency grids differ");
}

}  // namespace detail

/// Projection of raw (unsorted, unpartitioned or partial) observations with
/// no centering check. Used by workers that center with a global mean.
inline FourierProjection project_raw(std::span<const double> t, std::span<const double> v, const FrequencyGrid& grid,
                                     std::string label = {}) {
    detail::require(t.size() == v.size(), ErrorKind::InvalidArgument, "timestamps and values differ in length");
    std::vector<Complex> coeffs(grid.count);
    detail::accumulate_projection(t, v, grid, coeffs);
    return {grid, std::move(coeffs), t.size(), std::move(label)};
}

/// coeffs[l] = sum_n values[n] exp(-i l df t_n). The series must be centered.
inline FourierProjection project(const IrregularSeries& s, const FrequencyGrid& grid) {
    const double m = mean(s.values());
    const double sd = stdev(s.values());
    if (!(std::abs(m) <= 1e-9 * sd))
        throw Error(ErrorKind::NotCentered, "series '" + s.label() + "' is not centered");
    return project_raw(s.timestamps(), s.values(), grid, s.label());
}

/// Sum of two partial projections of the same series.
inline FourierProjection merge(const FourierProjection& a, const FourierProjection& b) {
    detail::require_same_grid(a.grid, b.grid);
    if (a.label != b.label) throw Error(ErrorKind::GridMismatch, "cannot merge '" + a.label + "' with '" + b.label + "'");
    std::vector<Complex> c(a.coeffs);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += b.coeffs[i];
    return {a.grid, std::move(c), a.n_obs + b.n_obs, a.label};
}

inline CrossSpectrum cross_spectrum(const FourierProjection& px, const FourierProjection& py) {
    detail::require_same_grid(px.grid, py.grid);
    std::vector<Complex> v(px.coeffs.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = px.coeffs[i] * std::conj(py.coeffs[i]);
    return {px.grid, std::move(v)};
}

/// Moving average over bins l-m..l+m, truncated at the grid edges.
inline CrossSpectrum smooth(const CrossSpectrum& spec, std::size_t half_width) {
    const std::size_t p = spec.values.size();
    if (2 * half_width >= p) throw Error(ErrorKind::WindowTooWide, "smoothing half-width must be < P/2");
    if (half_width == 0) return spec;
    std::vector<Complex> out(p);
    for (std::size_t i = 0; i < p; ++i) {
        const std::size_t lo = i >= half_width ? i - half_width : 0;
        const std::size_t hi = std::min(p - 1, i + half_width);
        Complex acc{};
        for (std::size_t k = lo; k <= hi; ++k) acc += spec.values[k];
        out[i] = acc / static_cast<double>(hi - lo + 1);
    }
    return {spec.grid, std::move(out)};
}

/// Unnormalized (1/P) sum_l values[l] exp(-i f_l h); the real part is the
/// covariance estimate at lag h.
inline Complex inverse_at(const CrossSpectrum& spec, double h) {
    Complex acc{};
    const Complex w = std::polar(1.0, -spec.grid.delta_f * h);
    Complex z = w;
    for (std::size_t l = 0; l < spec.values.size(); ++l) {
        if (l != 0 && l % detail::kPhaseResync == 0) z = std::polar(1.0, -spec.grid.frequency(l + 1) * h);
        acc += spec.values[l] * z;
        z *= w;
    }
    return acc / static_cast<double>(spec.values.size());
}

/// Inverse transform to rho(h) = gamma_xy(h) / sqrt(gamma_xx(0) gamma_yy(0)),
/// keeping the real part. The convention is rho(h) = corr(X_{t-h}, Y_t), so
/// X leading Y by tau peaks at h = +tau.
inline CrossCorrelogram invert_to_correlogram(const CrossSpectrum& cross, const CrossSpectrum& auto_x,
                                              const CrossSpectrum& auto_y, const LagGrid& lags) {
    detail::require_same_grid(cross.grid, auto_x.grid);
    detail::require_same_grid(cross.grid, auto_y.grid);
    const double gxx = inverse_at(auto_x, 0.0).real();
    const double gyy = inverse_at(auto_y, 0.0).real();
    if (!(gxx > 0.0) || !(gyy > 0.0)) throw Error(ErrorKind::DegenerateVariance, "auto-covariance at lag 0 is not positive");
    const double norm = std::sqrt(gxx * gyy);
    std::vector<double> rho(lags.size());
    double residual = 0.0;
    for (std::size_t i = 0; i < rho.size(); ++i) {
        const Complex g = inverse_at(cross, lags.lag(i));
        rho[i] = g.real() / norm;
        residual = std::max(residual, std::abs(g.imag()) / norm);
    }
    return {lags, std::move(rho), residual};
}

/// Correlogram straight from two projections.
inline CrossCorrelogram correlogram(const FourierProjection& px, const FourierProjection& py, const LagGrid& lags) {
    return invert_to_correlogram(cross_spectrum(px, py), cross_spectrum(px, px), cross_spectrum(py, py), lags);
}

// Signature wire format, all little endian:
//   u32 label length, label bytes (UTF-8), f64 delta_f, u64 P, u64 n_obs,
//   then P pairs of f64 (re, im).

namespace detail {

inline void put_u64(std::ostream& os, std::uint64_t x) {
    std::array<char, 8> b{};
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((x >> (8 * i)) & 0xff);
    os.write(b.data(), 8);
}

inline void put_u32(std::ostream& os, std::uint32_t x) {
    std::array<char, 4> b{};
    for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((x >> (8 * i)) & 0xff);
    os.write(b.data(), 4);
}

inline void put_f64(std::ostream& os, double x) { put_u64(os, std::bit_cast<std::uint64_t>(x)); }

inline std::uint64_t get_u64(std::istream& is) {
    std::array<unsigned char, 8> b{};
    if (!is.read(reinterpret_cast<char*>(b.data()), 8)) throw Error(ErrorKind::ParseError, "truncated signature");
    std::uint64_t x = 0;
    for (int i = 7; i >= 0; --i) x = (x << 8) | b[i];
    return x;
}

inline std::uint32_t get_u32(std::istream& is) {
    std::array<unsigned char, 4> b{};
    if (!is.read(reinterpret_cast<char*>(b.data()), 4)) throw Error(ErrorKind::ParseError, "truncated signature");
    std::uint32_t x = 0;
    for (int i = 3; i >= 0; --i) x = (x << 8) | b[i];
    return x;
}

inline double get_f64(std::istream& is) { return std::bit_cast<double>(get_u64(is)); }

}  // namespace detail

/// Bytes before the coefficient block for a given label.
inline std::size_t signature_header_bytes(const std::string& label) { return 4 + label.size() + 8 + 8 + 8; }

inline std::size_t signature_bytes(const FourierProjection& p) {
    return signature_header_bytes(p.label) + 16 * p.coeffs.size();
}

inline void write_signature(std::ostream& os, const FourierProjection& p) {
    detail::put_u32(os, static_cast<std::uint32_t>(p.label.size()));
    os.write(p.label.data(), static_cast<std::streamsize>(p.label.size()));
    detail::put_f64(os, p.grid.delta_f);
    detail::put_u64(os, p.grid.count);
    detail::put_u64(os, p.n_obs);
    for (const auto& z : p.coeffs) {
        detail::put_f64(os, z.real());
        detail::put_f64(os, z.imag());
    }
    if (!os) throw Error(ErrorKind::Io, "failed to write signature");
}

inline FourierProjection read_signature(std::istream& is) {
    const std::uint32_t n = detail::get_u32(is);
    std::string label(n, '\0');
    if (n > 0 && !is.read(label.data(), n)) throw Error(ErrorKind::ParseError, "truncated signature label");
    const double df = detail::get_f64(is);
    const std::uint64_t p = detail::get_u64(is);
    const std::uint64_t n_obs = detail::get_u64(is);
    if (p < 2 || p > (std::uint64_t{1} << 32)) throw Error(ErrorKind::ParseError, "implausible coefficient count");
    std::vector<Complex> c(p);
    for (auto& z : c) {
        const double re = detail::get_f64(is);
        const double im = detail::get_f64(is);
        z = {re, im};
    }
    return {FrequencyGrid(df, p), std::move(c), n_obs, std::move(label)};
}

}  // namespace xcausal

#endif  // XCAUSAL_SPECTRAL_HPP
