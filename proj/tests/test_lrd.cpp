#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "xcausal/lrd.hpp"
#include "xcausal/pipeline.hpp"
#include "xcausal/synth.hpp"

using namespace xcausal;

namespace {

CrossSpectrum power_law(double exponent, std::size_t p) {
    const FrequencyGrid g = span_grid(1.0, p);
    std::vector<Complex> v(p);
    for (std::size_t l = 0; l < p; ++l) v[l] = std::pow(g.frequency(l + 1), exponent);
    return {g, v};
}

FourierProjection fbm_projection(double h, std::uint64_t seed, std::size_t p) {
    const std::size_t n = std::size_t{1} << 16;
    const RegularSeries path = cumulative_path(simulate_fgn(h, n, seed), 0.0, 1.0 / static_cast<double>(n));
    return project(bridge_center(path.to_irregular("x")), span_grid(1.0, p));
}

}  // namespace

TEST(Lrd, BrownianSpectrumGivesHalf) {
    const HurstEstimate h = estimate_hurst(power_law(-2.0, 500));
    EXPECT_NEAR(h.hurst, 0.5, 1e-12);
    EXPECT_NEAR(h.slope, -2.0, 1e-12);
    EXPECT_EQ(h.n_freqs_used, 50u);
    EXPECT_FALSE(h.clipped);
}

TEST(Lrd, FlatSpectrumIsClipped) {
    const HurstEstimate h = estimate_hurst(power_law(0.0, 500));
    EXPECT_DOUBLE_EQ(h.hurst, kHurstMin);
    EXPECT_TRUE(h.clipped);
}

TEST(Lrd, TooFewFrequencies) {
    try {
        estimate_hurst(power_law(-2.0, 50), 0.1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::TooFewFrequencies);
    }
}

TEST(Lrd, RecoversFbmHurst) {
    const FourierProjection p = fbm_projection(0.8, 17, 2048);
    const HurstEstimate h = estimate_hurst(cross_spectrum(p, p));
    EXPECT_GE(h.hurst, 0.7);
    EXPECT_LE(h.hurst, 0.9);
    EXPECT_GT(h.stderr_hurst, 0.0);
}

TEST(Lrd, PoleEliminationExamples) {
    const FourierProjection p(FrequencyGrid(2.0, 2), {{1, 0}, {0, 1}}, 2);
    const FourierProjection d1 = pole_eliminate(p, 1.0);
    // bin 1: i * 2 * 1, bin 2: i * 4 * i
    EXPECT_NEAR(d1.coeffs[0].real(), 0.0, 1e-15);
    EXPECT_NEAR(d1.coeffs[0].imag(), 2.0, 1e-15);
    EXPECT_NEAR(d1.coeffs[1].real(), -4.0, 1e-15);
    EXPECT_NEAR(d1.coeffs[1].imag(), 0.0, 1e-15);
    const FourierProjection d2 = pole_eliminate(p, 2.0);
    EXPECT_NEAR(d2.coeffs[0].real(), -4.0, 1e-14);
    EXPECT_NEAR(d2.coeffs[0].imag(), 0.0, 1e-14);
    EXPECT_EQ(pole_eliminate(p, 0.0).coeffs, p.coeffs);
    EXPECT_THROW(pole_eliminate(p, 2.5), Error);
    EXPECT_THROW(pole_eliminate(p, -0.1), Error);
}

TEST(Lrd, PoleEliminationComposes) {
    const FourierProjection p = fbm_projection(0.6, 3, 64);
    const FourierProjection a = pole_eliminate(pole_eliminate(p, 0.4), 0.7);
    const FourierProjection b = pole_eliminate(p, 1.1);
    for (std::size_t l = 0; l < 64; ++l) EXPECT_LT(std::abs(a.coeffs[l] - b.coeffs[l]), 1e-9 * std::abs(b.coeffs[l]));
}

TEST(Lrd, FirstOrderEliminationIsTheDerivative) {
    // a burst that vanishes at both ends: i f X(f) is the transform of x'
    const std::size_t n = 4096;
    std::vector<double> t(n), x(n), dx(n);
    for (std::size_t i = 0; i < n; ++i) {
        t[i] = static_cast<double>(i) / n;
        const double u = (t[i] - 0.5) / 0.05;
        const double env = std::exp(-u * u);
        x[i] = env * std::sin(40.0 * t[i]);
        dx[i] = env * (40.0 * std::cos(40.0 * t[i]) - 2.0 * u / 0.05 * std::sin(40.0 * t[i]));
    }
    const FrequencyGrid g = span_grid(1.0, 40);
    const FourierProjection d = pole_eliminate(project_raw(t, x, g), 1.0);
    const FourierProjection ref = project_raw(t, dx, g);
    for (std::size_t l = 0; l < 40; ++l) {
        if (std::abs(ref.coeffs[l]) < 1e-3 * n) continue;
        EXPECT_LT(std::abs(d.coeffs[l] - ref.coeffs[l]), 0.02 * std::abs(ref.coeffs[l])) << "bin " << l + 1;
    }
}

TEST(Lrd, FracDiffWeights) {
    const auto w = frac_diff_weights(0.5, 3);
    EXPECT_DOUBLE_EQ(w[0], 1.0);
    EXPECT_DOUBLE_EQ(w[1], -0.5);
    EXPECT_DOUBLE_EQ(w[2], -0.125);
    EXPECT_DOUBLE_EQ(w[3], -0.0625);
    EXPECT_EQ(frac_diff_weights(1.0, 3), (std::vector<double>{1, -1, 0, 0}));
    EXPECT_EQ(frac_diff_weights(2.0, 3), (std::vector<double>{1, -2, 1, 0}));
}

TEST(Lrd, FracDiffTimeFirstOrder) {
    const RegularSeries s(0.0, 1.0, {1, 4, 9, 16, 25});
    const FracDiffResult r = frac_diff_time(s, 1.0, 2);
    EXPECT_EQ(r.series.values(), (std::vector<double>{1, 3, 5, 7, 9}));
    EXPECT_EQ(r.burn_in, 2u);
    EXPECT_THROW(frac_diff_time(s, 1.0, 6), Error);
    EXPECT_THROW(frac_diff_time(s, 3.0, 2), Error);
}

TEST(Lrd, WhitenedSpectrumIsFlat) {
    const FourierProjection px = fbm_projection(0.8, 5, 2048);
    const FourierProjection py = fbm_projection(0.3, 6, 2048);
    const double hx = estimate_hurst(cross_spectrum(px, px)).hurst;
    const double hy = estimate_hurst(cross_spectrum(py, py)).hurst;
    const WhitenedPair w = whiten_pair(px, py, hx, hy);
    EXPECT_LT(std::abs(w.slope_x), 0.3);
    EXPECT_LT(std::abs(w.slope_y), 0.3);
    EXPECT_TRUE(w.flat);
    EXPECT_NEAR(w.alpha_x, hx + 0.5, 1e-15);
}

TEST(Lrd, WhiteningAlphaClamps) {
    EXPECT_DOUBLE_EQ(whitening_alpha(0.5), 1.0);
    EXPECT_DOUBLE_EQ(whitening_alpha(1.4), kMaxWhiteningAlpha);
}
