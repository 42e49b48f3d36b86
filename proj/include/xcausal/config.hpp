#ifndef XCAUSAL_CONFIG_HPP
#define XCAUSAL_CONFIG_HPP

/// @file
/// Experiment configuration as flat `key = value` text. Unknown keys and
/// malformed values are errors; `to_text` and `parse_config` round-trip.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "xcausal/core.hpp"
#include "xcausal/io.hpp"
#include "xcausal/pipeline.hpp"
#include "xcausal/spectral.hpp"
#include "xcausal/synth.hpp"

namespace xcausal {

enum class DfPolicy { Span, Lag };
enum class PipelineKind { Fourier, FourierLrd, Locf, Hy };
enum class ProcessKind { Fbm, Kernel, Surrogate };

inline const char* to_string(DfPolicy p) { return p == DfPolicy::Span ? "span" : "lag"; }

inline const char* to_string(PipelineKind p) {
    switch (p) {
        case PipelineKind::Fourier: return "fourier";
        case PipelineKind::FourierLrd: return "fourier+lrd";
        case PipelineKind::Locf: return "locf";
        case PipelineKind::Hy: return "hy";
    }
    return "fourier";
}

inline const char* to_string(ProcessKind p) {
    switch (p) {
        case ProcessKind::Fbm: return "fbm";
        case ProcessKind::Kernel: return "kernel";
        case ProcessKind::Surrogate: return "surrogate";
    }
    return "fbm";
}

inline const char* to_string(Centering c) { return c == Centering::Mean ? "mean" : "bridge"; }

struct ExperimentConfig {
    std::uint64_t seed = 1;
    std::size_t trials = 1;
    std::size_t n_x = 10000;
    std::size_t n_y = 10000;
    double span = 1.0;
    std::size_t fine_steps = std::size_t{1} << 17;
    ProcessKind process = ProcessKind::Fbm;
    double hurst = 0.5;
    double rho = 0.9;
    double tau = 0.013;
    double kernel_alpha = 400.0;
    double kernel_beta = 200.0;
    double noise = 1.0;
    std::size_t projections = 1000;
    DfPolicy df_policy = DfPolicy::Span;
    /// 0 selects span / P (span policy) or the denser series' mean gap.
    double lag_step = 0.0;
    std::size_t half_lags = 20;
    PipelineKind pipeline = PipelineKind::Fourier;
    /// Pole-elimination order of the plain fourier pipeline.
    double alpha = 0.0;
    Centering centering = Centering::Mean;
    double low_fraction = 0.1;
    std::size_t smooth = 0;
    double theta = 0.2;
    std::size_t workers = 1;

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

namespace detail {

inline std::string format_double(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

template <class T>
T parse_number(const std::string& key, const std::string& value) {
    T out{};
    const char* b = value.data();
    const char* e = b + value.size();
    const auto [ptr, ec] = std::from_chars(b, e, out);
    if (ec != std::errc() || ptr != e) throw Error(ErrorKind::InvalidArgument, "bad value for '" + key + "': " + value);
    return out;
}

}  // namespace detail

inline std::string to_text(const ExperimentConfig& c) {
    using detail::format_double;
    std::ostringstream os;
    os << "seed = " << c.seed << '\n'
       << "trials = " << c.trials << '\n'
       << "n_x = " << c.n_x << '\n'
       << "n_y = " << c.n_y << '\n'
       << "span = " << format_double(c.span) << '\n'
       << "fine_steps = " << c.fine_steps << '\n'
       << "process = " << to_string(c.process) << '\n'
       << "hurst = " << format_double(c.hurst) << '\n'
       << "rho = " << format_double(c.rho) << '\n'
       << "tau = " << format_double(c.tau) << '\n'
       << "kernel_alpha = " << format_double(c.kernel_alpha) << '\n'
       << "kernel_beta = " << format_double(c.kernel_beta) << '\n'
       << "noise = " << format_double(c.noise) << '\n'
       << "projections = " << c.projections << '\n'
       << "df_policy = " << to_string(c.df_policy) << '\n'
       << "lag_step = " << format_double(c.lag_step) << '\n'
       << "half_lags = " << c.half_lags << '\n'
       << "pipeline = " << to_string(c.pipeline) << '\n'
       << "alpha = " << format_double(c.alpha) << '\n'
       << "centering = " << to_string(c.centering) << '\n'
       << "low_fraction = " << format_double(c.low_fraction) << '\n'
       << "smooth = " << c.smooth << '\n'
       << "theta = " << format_double(c.theta) << '\n'
       << "workers = " << c.workers << '\n';
    return os.str();
}

/// Sets one key from its text form.
inline void set_value(ExperimentConfig& c, const std::string& key, const std::string& value) {
    using detail::parse_number;
    auto sz = [&] { return parse_number<std::size_t>(key, value); };
    auto dbl = [&] { return parse_number<double>(key, value); };
    if (key == "seed") c.seed = parse_number<std::uint64_t>(key, value);
    else if (key == "trials") c.trials = sz();
    else if (key == "n_x") c.n_x = sz();
    else if (key == "n_y") c.n_y = sz();
    else if (key == "span") c.span = dbl();
    else if (key == "fine_steps") c.fine_steps = sz();
    else if (key == "hurst") c.hurst = dbl();
    else if (key == "rho") c.rho = dbl();
    else if (key == "tau") c.tau = dbl();
    else if (key == "kernel_alpha") c.kernel_alpha = dbl();
    else if (key == "kernel_beta") c.kernel_beta = dbl();
    else if (key == "noise") c.noise = dbl();
    else if (key == "projections") c.projections = sz();
    else if (key == "lag_step") c.lag_step = dbl();
    else if (key == "half_lags") c.half_lags = sz();
    else if (key == "alpha") c.alpha = dbl();
    else if (key == "low_fraction") c.low_fraction = dbl();
    else if (key == "smooth") c.smooth = sz();
    else if (key == "theta") c.theta = dbl();
    else if (key == "workers") c.workers = sz();
    else if (key == "process") {
        if (value == "fbm") c.process = ProcessKind::Fbm;
        else if (value == "kernel") c.process = ProcessKind::Kernel;
        else if (value == "surrogate") c.process = ProcessKind::Surrogate;
        else throw Error(ErrorKind::InvalidArgument, "process must be fbm, kernel or surrogate");
    } else if (key == "df_policy") {
        if (value == "span") c.df_policy = DfPolicy::Span;
        else if (value == "lag") c.df_policy = DfPolicy::Lag;
        else throw Error(ErrorKind::InvalidArgument, "df_policy must be span or lag");
    } else if (key == "pipeline") {
        if (value == "fourier") c.pipeline = PipelineKind::Fourier;
        else if (value == "fourier+lrd") c.pipeline = PipelineKind::FourierLrd;
        else if (value == "locf") c.pipeline = PipelineKind::Locf;
        else if (value == "hy") c.pipeline = PipelineKind::Hy;
        else throw Error(ErrorKind::InvalidArgument, "pipeline must be fourier, fourier+lrd, locf or hy");
    } else if (key == "centering") {
        if (value == "mean") c.centering = Centering::Mean;
        else if (value == "bridge") c.centering = Centering::Bridge;
        else throw Error(ErrorKind::InvalidArgument, "centering must be mean or bridge");
    } else {
        throw Error(ErrorKind::InvalidArgument, "unknown config key '" + key + "'");
    }
}

/// Applies `key = value` lines over `base`. '#' starts a comment.
inline ExperimentConfig parse_config(const std::string& text, ExperimentConfig base = {}) {
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string row(detail::trim(line));
        if (row.empty()) continue;
        const auto eq = row.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorKind::InvalidArgument, "config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key(detail::trim(std::string_view(row).substr(0, eq)));
        const std::string value(detail::trim(std::string_view(row).substr(eq + 1)));
        set_value(base, key, value);
    }
    return base;
}

inline ExperimentConfig load_config_file(const std::string& path, ExperimentConfig base = {}) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open config " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), base);
}

/// Checks every parameter against the preconditions of the modules it feeds.
inline void validate(const ExperimentConfig& c) {
    using detail::require;
    constexpr auto bad = ErrorKind::InvalidArgument;
    require(c.trials >= 1, bad, "trials must be >= 1");
    require(c.n_x >= 2 && c.n_y >= 2, bad, "n_x and n_y must be >= 2");
    require(c.span > 0 && std::isfinite(c.span), bad, "span must be positive");
    require(c.fine_steps >= 2, bad, "fine_steps must be >= 2");
    require(c.hurst > 0.0 && c.hurst < 1.0, bad, "hurst must lie in (0, 1)");
    require(std::abs(c.rho) <= 1.0, bad, "|rho| must be <= 1");
    require(c.tau >= 0 && std::isfinite(c.tau), bad, "tau must be >= 0");
    require(c.kernel_beta >= 0 && std::isfinite(c.kernel_beta), bad, "kernel_beta must be >= 0");
    require(std::isfinite(c.kernel_alpha), bad, "kernel_alpha must be finite");
    require(c.noise >= 0 && std::isfinite(c.noise), bad, "noise must be >= 0");
    require(c.projections >= 2, bad, "frequency grid requires P >= 2");
    require(c.lag_step >= 0 && std::isfinite(c.lag_step), bad, "lag_step must be >= 0");
    require(c.df_policy != DfPolicy::Lag || c.lag_step > 0, bad, "df_policy = lag needs an explicit lag_step");
    require(c.half_lags >= 1, bad, "half_lags must be >= 1");
    require(c.alpha >= 0.0 && c.alpha <= 2.0, ErrorKind::AlphaOutOfRange, "alpha must lie in [0, 2]");
    require(c.low_fraction > 0.0 && c.low_fraction <= 0.5, bad, "low_fraction must lie in (0, 0.5]");
    require(2 * c.smooth < c.projections, ErrorKind::WindowTooWide, "smooth must be < P/2");
    require(c.theta >= 0 && std::isfinite(c.theta), bad, "theta must be >= 0");
    require(c.workers >= 1, bad, "workers must be >= 1");
}

inline FourierOptions fourier_options(const ExperimentConfig& c) {
    FourierOptions o;
    o.centering = c.centering;
    o.whitening = c.pipeline == PipelineKind::FourierLrd ? Whitening::Estimated : Whitening::Fixed;
    o.alpha = c.alpha;
    o.low_fraction = c.low_fraction;
    o.smooth_half_width = c.smooth;
    return o;
}

inline CausalKernel kernel(const ExperimentConfig& c) { return {c.tau, c.kernel_alpha, c.kernel_beta}; }

}  // namespace xcausal

#endif  // XCAUSAL_CONFIG_HPP
