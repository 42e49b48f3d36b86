#ifndef XCAUSAL_CORE_HPP
#define XCAUSAL_CORE_HPP

/// @file
/// Shared domain types: irregular and regular series, frequency and lag
/// grids, cross-correlograms, and the error type used throughout xcausal.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace xcausal {

/// Failure categories. The CLI maps these onto exit codes.
enum class ErrorKind {
    EmptySeries,
    NonFinite,
    InvalidArgument,
    NotCentered,
    GridMismatch,
    WindowTooWide,
    DegenerateVariance,
    TooFewFrequencies,
    AlphaOutOfRange,
    TruncationTooLong,
    GridBeforeData,
    NoOverlap,
    TooFewTrials,
    EmbeddingFailure,
    ParseError,
    Io,
};

inline const char* to_string(ErrorKind k) noexcept {
    switch (k) {
        case ErrorKind::EmptySeries: return "EmptySeries";
        case ErrorKind::NonFinite: return "NonFinite";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::NotCentered: return "NotCentered";
        case ErrorKind::GridMismatch: return "GridMismatch";
        case ErrorKind::WindowTooWide: return "WindowTooWide";
        case ErrorKind::DegenerateVariance: return "DegenerateVariance";
        case ErrorKind::TooFewFrequencies: return "TooFewFrequencies";
        case ErrorKind::AlphaOutOfRange: return "AlphaOutOfRange";
        case ErrorKind::TruncationTooLong: return "TruncationTooLong";
        case ErrorKind::GridBeforeData: return "GridBeforeData";
        case ErrorKind::NoOverlap: return "NoOverlap";
        case ErrorKind::TooFewTrials: return "TooFewTrials";
        case ErrorKind::EmbeddingFailure: return "EmbeddingFailure";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::Io: return "Io";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// One (timestamp, value) observation.
struct Observation {
    double t;
    double value;

    friend bool operator==(const Observation&, const Observation&) = default;
};

namespace detail {

inline void require(bool cond, ErrorKind kind, const std::string& msg) {
    if (!cond) throw Error(kind, msg);
}

inline void require_finite(const std::vector<double>& v, const char* what) {
    for (double x : v)
        if (!std::isfinite(x)) throw Error(ErrorKind::NonFinite, std::string(what) + " contains a non-finite value");
}

}  // namespace detail

/// Observations of one process at strictly increasing timestamps (seconds
/// relative to a per-dataset epoch). Immutable after construction.
class IrregularSeries {
public:
    IrregularSeries(std::vector<double> timestamps, std::vector<double> values, std::string label = {})
        : t_(std::move(timestamps)), v_(std::move(values)), label_(std::move(label)) {
        detail::require(t_.size() == v_.size(), ErrorKind::InvalidArgument,
                        "timestamps and values differ in length");
        detail::require(t_.size() >= 2, ErrorKind::EmptySeries, "series '" + label_ + "' needs at least 2 observations");
        detail::require_finite(t_, "timestamps");
        detail::require_finite(v_, "values");
        for (std::size_t i = 1; i < t_.size(); ++i)
            detail::require(t_[i] > t_[i - 1], ErrorKind::InvalidArgument,
                            "timestamps of '" + label_ + "' are not strictly increasing");
    }

    const std::vector<double>& timestamps() const noexcept { return t_; }
    const std::vector<double>& values() const noexcept { return v_; }
    const std::string& label() const noexcept { return label_; }
    std::size_t size() const noexcept { return t_.size(); }
    double start() const noexcept { return t_.front(); }
    double end() const noexcept { return t_.back(); }
    double span() const noexcept { return t_.back() - t_.front(); }
    double mean_gap() const noexcept { return span() / static_cast<double>(t_.size() - 1); }

    IrregularSeries with_label(std::string label) const { return {t_, v_, std::move(label)}; }

    /// Same values, timestamps moved by `delta` seconds.
    IrregularSeries shifted(double delta) const {
        std::vector<double> t(t_);
        for (double& x : t) x += delta;
        return {std::move(t), v_, label_};
    }

private:
    std::vector<double> t_;
    std::vector<double> v_;
    std::string label_;
};

/// Samples on the grid start + n * step.
class RegularSeries {
public:
    RegularSeries(double start, double step, std::vector<double> values)
        : start_(start), step_(step), v_(std::move(values)) {
        detail::require(std::isfinite(start_), ErrorKind::NonFinite, "start is not finite");
        detail::require(step_ > 0 && std::isfinite(step_), ErrorKind::InvalidArgument, "step must be positive");
        detail::require(v_.size() >= 2, ErrorKind::EmptySeries, "regular series needs at least 2 samples");
        detail::require_finite(v_, "values");
    }

    double start() const noexcept { return start_; }
    double step() const noexcept { return step_; }
    const std::vector<double>& values() const noexcept { return v_; }
    std::size_t size() const noexcept { return v_.size(); }
    double time_at(std::size_t n) const noexcept { return start_ + step_ * static_cast<double>(n); }

    bool same_grid(const RegularSeries& o) const noexcept {
        return start_ == o.start_ && step_ == o.step_ && v_.size() == o.v_.size();
    }

    /// View as an irregular series (timestamps on the grid).
    IrregularSeries to_irregular(std::string label = {}) const {
        std::vector<double> t(v_.size());
        for (std::size_t n = 0; n < t.size(); ++n) t[n] = time_at(n);
        return {std::move(t), v_, std::move(label)};
    }

private:
    double start_;
    double step_;
    std::vector<double> v_;
};

/// Angular frequencies l * delta_f for l = 1..count. Zero is never on the grid.
struct FrequencyGrid {
    double delta_f;
    std::size_t count;

    FrequencyGrid(double df, std::size_t p) : delta_f(df), count(p) {
        detail::require(df > 0 && std::isfinite(df), ErrorKind::InvalidArgument, "delta_f must be positive");
        detail::require(p >= 2, ErrorKind::InvalidArgument, "frequency grid requires P >= 2");
    }

    /// Frequency of bin l (1-based).
    double frequency(std::size_t l) const noexcept { return delta_f * static_cast<double>(l); }
    double max_frequency() const noexcept { return frequency(count); }

    friend bool operator==(const FrequencyGrid&, const FrequencyGrid&) = default;
};

/// Symmetric lags k * delta_h for k = -half_count..half_count.
struct LagGrid {
    double delta_h;
    std::size_t half_count;

    LagGrid(double dh, std::size_t half) : delta_h(dh), half_count(half) {
        detail::require(dh > 0 && std::isfinite(dh), ErrorKind::InvalidArgument, "delta_h must be positive");
    }

    std::size_t size() const noexcept { return 2 * half_count + 1; }
    /// Index of the zero lag.
    std::size_t center() const noexcept { return half_count; }
    double lag(std::size_t i) const noexcept {
        return delta_h * (static_cast<double>(i) - static_cast<double>(half_count));
    }
    std::vector<double> lags() const {
        std::vector<double> out(size());
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = lag(i);
        return out;
    }

    friend bool operator==(const LagGrid&, const LagGrid&) = default;
};

inline constexpr double kNormTolerance = 1e-6;

/// Estimated cross-correlation rho(h) on a lag grid, with the convention
/// rho(h) = corr(X_{t-h}, Y_t): a peak at h > 0 means X leads Y.
struct CrossCorrelogram {
    LagGrid lag_grid;
    std::vector<double> rho;
    double imag_residual = 0.0;

    CrossCorrelogram(LagGrid grid, std::vector<double> r, double residual = 0.0)
        : lag_grid(grid), rho(std::move(r)), imag_residual(residual) {
        detail::require(rho.size() == lag_grid.size(), ErrorKind::InvalidArgument,
                        "correlogram length does not match lag grid");
        detail::require_finite(rho, "correlogram");
    }

    double at_lag_index(std::ptrdiff_t k) const {
        return rho[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(lag_grid.half_count) + k)];
    }

    /// True when every |rho| is within the finite-sample normalization guard.
    bool normalized() const noexcept {
        return std::all_of(rho.begin(), rho.end(), [](double r) { return std::abs(r) <= 1.0 + kNormTolerance; });
    }
};

/// Sorts by timestamp and removes duplicate timestamps, keeping the last
/// occurrence in input order.
inline IrregularSeries dedup_and_sort(std::vector<Observation> raw, std::string label = {}) {
    for (const auto& o : raw)
        if (!std::isfinite(o.t) || !std::isfinite(o.value))
            throw Error(ErrorKind::NonFinite, "observation of '" + label + "' is not finite");
    // stable sort preserves input order among equal timestamps
    std::stable_sort(raw.begin(), raw.end(), [](const Observation& a, const Observation& b) { return a.t < b.t; });
    std::vector<double> t;
    std::vector<double> v;
    t.reserve(raw.size());
    v.reserve(raw.size());
    for (const auto& o : raw) {
        if (!t.empty() && t.back() == o.t) {
            v.back() = o.value;
        } else {
            t.push_back(o.t);
            v.push_back(o.value);
        }
    }
    if (t.size() < 2) throw Error(ErrorKind::EmptySeries, "fewer than 2 distinct timestamps in '" + label + "'");
    return {std::move(t), std::move(v), std::move(label)};
}

inline std::vector<Observation> observations(const IrregularSeries& s) {
    std::vector<Observation> out(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) out[i] = {s.timestamps()[i], s.values()[i]};
    return out;
}

inline double mean(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

inline double stdev(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = mean(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

/// Subtracts the arithmetic mean of the values.
inline IrregularSeries demean(const IrregularSeries& s) {
    const double m = mean(s.values());
    std::vector<double> v(s.values());
    for (double& x : v) x -= m;
    // second pass removes the rounding residue of the first
    const double r = mean(v);
    for (double& x : v) x -= r;
    return {s.timestamps(), std::move(v), s.label()};
}

/// Removes the chord through the first and last observation, then a multiple
/// of (t - t0)(t1 - t) so the result has zero mean and vanishes at both ends.
/// Levels that do not return to zero at the span edges otherwise leak a
/// boundary term into every differentiated Fourier coefficient.
inline IrregularSeries bridge_center(const IrregularSeries& s) {
    const auto& t = s.timestamps();
    const double t0 = s.start();
    const double t1 = s.end();
    const double v0 = s.values().front();
    const double v1 = s.values().back();
    std::vector<double> v(s.values());
    std::vector<double> q(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] -= v0 + (v1 - v0) * (t[i] - t0) / (t1 - t0);
        q[i] = (t[i] - t0) * (t1 - t[i]);
    }
    const double mq = mean(q);
    if (mq > 0.0) {
        const double k = mean(v) / mq;
        for (std::size_t i = 0; i < v.size(); ++i) v[i] -= k * q[i];
    }
    return {t, std::move(v), s.label()};
}

/// Restricts a series to observations with start <= t <= end.
inline IrregularSeries time_window(const IrregularSeries& s, double start, double end) {
    std::vector<double> t;
    std::vector<double> v;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double ti = s.timestamps()[i];
        if (ti >= start && ti <= end) {
            t.push_back(ti);
            v.push_back(s.values()[i]);
        }
    }
    if (t.size() < 2) throw Error(ErrorKind::EmptySeries, "time window leaves fewer than 2 observations");
    return {std::move(t), std::move(v), s.label()};
}

}  // namespace xcausal

#endif  // XCAUSAL_CORE_HPP
