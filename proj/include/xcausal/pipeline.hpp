#ifndef XCAUSAL_PIPELINE_HPP
#define XCAUSAL_PIPELINE_HPP

/// @file
/// End-to-end frequency-domain pipeline for a pair of irregular series:
/// center, project, optionally whiten, invert.

#include <optional>
#include <string>

#include "xcausal/core.hpp"
#include "xcausal/lrd.hpp"
#include "xcausal/spectral.hpp"

namespace xcausal {

enum class Centering { Mean, Bridge };

/// How the pole-elimination order is chosen per series.
enum class Whitening {
    /// alpha = 0: raw levels.
    None,
    /// A fixed alpha for both series (1 differentiates Brownian levels).
    Fixed,
    /// alpha = H + 1/2 from each series' own periodogram regression.
    Estimated,
};

struct FourierOptions {
    Centering centering = Centering::Mean;
    Whitening whitening = Whitening::Fixed;
    double alpha = 1.0;
    double low_fraction = 0.1;
    std::size_t smooth_half_width = 0;
};

inline IrregularSeries center(const IrregularSeries& s, Centering c) {
    return c == Centering::Bridge ? bridge_center(s) : demean(s);
}

struct WhiteningChoice {
    double alpha;
    std::optional<HurstEstimate> hurst;
};

inline WhiteningChoice choose_alpha(const FourierProjection& p, const FourierOptions& o) {
    switch (o.whitening) {
        case Whitening::None: return {0.0, std::nullopt};
        case Whitening::Fixed: return {o.alpha, std::nullopt};
        case Whitening::Estimated: {
            const HurstEstimate h = estimate_hurst(cross_spectrum(p, p), o.low_fraction);
            return {whitening_alpha(h.hurst), h};
        }
    }
    return {0.0, std::nullopt};
}

struct FourierPairResult {
    CrossCorrelogram correlogram;
    WhiteningChoice x;
    WhiteningChoice y;
};

/// Correlogram of two already projected series.
inline FourierPairResult fourier_correlogram(const FourierProjection& px, const FourierProjection& py,
                                             const LagGrid& lags, const FourierOptions& o = {}) {
    const WhiteningChoice wx = choose_alpha(px, o);
    const WhiteningChoice wy = choose_alpha(py, o);
    const FourierProjection ex = pole_eliminate(px, wx.alpha);
    const FourierProjection ey = pole_eliminate(py, wy.alpha);
    const std::size_t m = o.smooth_half_width;
    CrossCorrelogram c = invert_to_correlogram(smooth(cross_spectrum(ex, ey), m), smooth(cross_spectrum(ex, ex), m),
                                               smooth(cross_spectrum(ey, ey), m), lags);
    return {std::move(c), wx, wy};
}

inline FourierPairResult fourier_correlogram(const IrregularSeries& x, const IrregularSeries& y,
                                             const FrequencyGrid& grid, const LagGrid& lags,
                                             const FourierOptions& o = {}) {
    return fourier_correlogram(project(center(x, o.centering), grid), project(center(y, o.centering), grid), lags, o);
}

}  // namespace xcausal

#endif  // XCAUSAL_PIPELINE_HPP
