// Acceptance suite: one PASS/FAIL line per criterion. Exit status is nonzero
// if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "xcausal/baselines.hpp"
#include "xcausal/causal.hpp"
#include "xcausal/experiments.hpp"
#include "xcausal/lrd.hpp"
#include "xcausal/parallel.hpp"
#include "xcausal/pipeline.hpp"
#include "xcausal/spectral.hpp"
#include "xcausal/synth.hpp"

using namespace xcausal;

namespace {

std::size_t thread_count() {
    if (const char* env = std::getenv("XCAUSAL_THREADS")) {
        const long n = std::strtol(env, nullptr, 10);
        if (n > 0) return static_cast<std::size_t>(n);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    const double ma = mean(a);
    const double mb = mean(b);
    double sab = 0.0;
    double saa = 0.0;
    double sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

// 1. LOCF bias versus unbiased Fourier LLR at three sampling ratios.
Outcome table1(std::size_t threads) {
    constexpr double kFourierLo = 0.85;
    constexpr double kFourierHi = 1.35;
    constexpr double kLocfBiased = 4.0;
    constexpr double kLocfLo = 0.8;
    constexpr double kLocfHi = 1.2;
    Table1Config cfg;
    cfg.trials = 100;
    cfg.n1 = 10000;
    cfg.projections = 1000;
    cfg.threads = threads;
    bool pass = true;
    std::string detail;
    for (double ratio : {1.0, 4.5, 10.0}) {
        const Table1Row row = locf_llr_experiment(ratio, cfg);
        const bool f_ok = row.fourier.mean >= kFourierLo && row.fourier.mean <= kFourierHi;
        const bool l_ok = ratio == 1.0 ? (row.locf.mean >= kLocfLo && row.locf.mean <= kLocfHi) : row.locf.mean > kLocfBiased;
        pass = pass && f_ok && l_ok;
        char buf[160];
        std::snprintf(buf, sizeof buf, "ratio %.1f: locf %.3f+-%.3f fourier %.3f+-%.3f; ", ratio, row.locf.mean, row.locf.std,
                      row.fourier.mean, row.fourier.std);
        detail += buf;
    }
    return {pass, detail};
}

// 2. Band of independent H = 0.4 pairs without and with pole elimination.
Outcome lrd_band(std::size_t threads) {
    constexpr double kRawBeyond = 0.5;
    constexpr double kErasedWithin = 0.1;
    LrdBandConfig cfg;
    cfg.hurst = 0.4;
    cfg.n_x = 9998;
    cfg.n_y = 6000;
    cfg.trials = 100;
    cfg.threads = threads;
    const LrdBandResult r = lrd_band_experiment(cfg);
    const auto [raw_lo, raw_hi] = band_extent(r.raw);
    const auto [er_lo, er_hi] = band_extent(r.erased);
    const bool pass = raw_lo < -kRawBeyond && raw_hi > kRawBeyond && er_lo >= -kErasedWithin && er_hi <= kErasedWithin;
    char buf[200];
    std::snprintf(buf, sizeof buf, "raw band [%.3f, %.3f], erased band [%.3f, %.3f], mean H-hat %.3f", raw_lo, raw_hi, er_lo,
                  er_hi, mean(r.hurst_estimates));
    return {pass, buf};
}

// 3. Lagged HY keeps spurious far-lag correlation on H = 0.8; erased Fourier does not.
Outcome hy_failure(std::size_t threads) {
    constexpr double kHyAbove = 0.3;
    constexpr double kFourierBelow = 0.1;
    HyFailureConfig cfg;
    cfg.hurst = 0.8;
    cfg.trials = 100;
    cfg.far_steps = 5;
    cfg.threads = threads;
    const HyFailureResult r = hy_failure_experiment(cfg);
    const bool pass = r.hy_median_far > kHyAbove && r.fourier_median_far < kFourierBelow;
    char buf[160];
    std::snprintf(buf, sizeof buf, "median |rho| at |h| > 5 dh: HY %.3f, Fourier %.3f", r.hy_median_far,
                  r.fourier_median_far);
    return {pass, buf};
}

// 4. Frequency correlogram against the direct time-domain estimator on
// synchronous regular white noise.
Outcome oracle_equivalence() {
    constexpr double kMeanAbs = 0.05;
    constexpr double kMaxAbs = 0.15;
    constexpr std::size_t n = 4096;
    constexpr std::size_t p = 2048;
    constexpr std::size_t half = 20;
    constexpr std::size_t trials = 20;
    const FrequencyGrid grid(2.0 * std::numbers::pi / static_cast<double>(n), p);
    const LagGrid lags(1.0, half);
    FourierOptions none;
    none.whitening = Whitening::None;
    double worst_mean = 0.0;
    double worst_max = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
        Rng rng = make_rng(trial_seed(4, t));
        std::normal_distribution<double> normal;
        std::vector<double> x(n);
        std::vector<double> e(n);
        for (auto& v : x) v = normal(rng);
        for (auto& v : e) v = normal(rng);
        std::vector<double> y(n);
        for (std::size_t i = 0; i < n; ++i) y[i] = (i >= 3 ? 0.6 * x[i - 3] : 0.0) + 0.8 * e[i];
        const RegularSeries rx = demean(RegularSeries(0.0, 1.0, x));
        const RegularSeries ry = demean(RegularSeries(0.0, 1.0, y));
        const CrossCorrelogram direct = regular_xcov(rx, ry, half);
        const CrossCorrelogram freq =
            fourier_correlogram(project(rx.to_irregular("x"), grid), project(ry.to_irregular("y"), grid), lags, none)
                .correlogram;
        double sum = 0.0;
        double mx = 0.0;
        for (std::size_t i = 0; i < lags.size(); ++i) {
            const double d = std::abs(direct.rho[i] - freq.rho[i]);
            sum += d;
            mx = std::max(mx, d);
        }
        worst_mean = std::max(worst_mean, sum / static_cast<double>(lags.size()));
        worst_max = std::max(worst_max, mx);
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, "worst of %zu trials: mean |diff| %.4f, max |diff| %.4f", trials, worst_mean, worst_max);
    return {worst_mean <= kMeanAbs && worst_max <= kMaxAbs, buf};
}

// 5. Time-domain binomial fractional difference against frequency-domain pole
// elimination, on series supported in the middle half of the window.
Outcome frac_diff_agreement() {
    constexpr double kMinCorrelation = 0.95;
    constexpr std::size_t n = 8192;
    constexpr std::size_t half = 20;
    constexpr std::size_t truncation = 2048;
    constexpr std::size_t shift = 5;
    const FrequencyGrid grid(2.0 * std::numbers::pi / static_cast<double>(n), n / 2);
    const LagGrid lags(1.0, half);
    auto tapered = [&](const std::vector<double>& z) {
        std::vector<double> out(n, 0.0);
        const std::size_t a = n / 4;
        const std::size_t len = n / 2;
        for (std::size_t i = 0; i < len; ++i) {
            const double w = std::sin(std::numbers::pi * static_cast<double>(i) / static_cast<double>(len));
            out[a + i] = w * w * z[i];
        }
        return out;
    };
    double worst = 1.0;
    std::string detail;
    for (double alpha : {0.5, 1.0}) {
        double worst_alpha = 1.0;
        for (std::uint64_t t = 0; t < 5; ++t) {
            const std::uint64_t s = trial_seed(5, t);
            const std::vector<double> a = simulate_fgn(0.7, n, stream_seed(s, 0));
            const std::vector<double> b = simulate_fgn(0.7, n, stream_seed(s, 1));
            std::vector<double> zx(n / 2);
            std::vector<double> zy(n / 2);
            double cx = 0.0;
            double cy = 0.0;
            for (std::size_t i = 0; i < n / 2; ++i) {
                cx += a[i + shift];
                cy += a[i] + 0.5 * b[i];
                zx[i] = cx;
                zy[i] = cy;
            }
            // y trails x by `shift` steps
            const RegularSeries x(0.0, 1.0, tapered(zx));
            const RegularSeries y(0.0, 1.0, tapered(zy));

            const FracDiffResult dx = frac_diff_time(x, alpha, truncation);
            const FracDiffResult dy = frac_diff_time(y, alpha, truncation);
            const std::vector<double> tx(dx.series.values().begin() + static_cast<std::ptrdiff_t>(dx.burn_in),
                                         dx.series.values().end());
            const std::vector<double> ty(dy.series.values().begin() + static_cast<std::ptrdiff_t>(dy.burn_in),
                                         dy.series.values().end());
            const CrossCorrelogram time_c =
                regular_xcov(demean(RegularSeries(0.0, 1.0, tx)), demean(RegularSeries(0.0, 1.0, ty)), half);

            FourierOptions fixed;
            fixed.alpha = alpha;
            const CrossCorrelogram freq_c =
                fourier_correlogram(project(demean(x.to_irregular("x")), grid), project(demean(y.to_irregular("y")), grid),
                                    lags, fixed)
                    .correlogram;
            worst_alpha = std::min(worst_alpha, pearson(time_c.rho, freq_c.rho));
        }
        worst = std::min(worst, worst_alpha);
        detail += fmt("alpha %.1f ", alpha) + fmt("min corr %.4f; ", worst_alpha);
    }
    return {worst >= kMinCorrelation, detail};
}

// 6. Delay and direction from a 13 ms exponential-kernel pair.
Outcome lag_recovery(std::size_t threads) {
    constexpr std::size_t kNeeded = 90;
    LagRecoveryConfig cfg;
    cfg.kernel = {0.013, 400.0, 200.0};
    cfg.projections = 3000;
    cfg.tolerance = 0.005;
    cfg.trials = 100;
    cfg.threads = threads;
    const LagRecoveryResult r = lag_recovery_experiment(cfg);
    const std::size_t min_obs = *std::min_element(r.n_obs_x.begin(), r.n_obs_x.end());
    std::vector<double> delays;
    double peak = 0.0;
    for (const auto& t : r.trials) {
        delays.push_back(t.delay);
        peak += t.peak_rho / static_cast<double>(r.trials.size());
    }
    char buf[200];
    std::snprintf(buf, sizeof buf, "%zu/100 trials with delay in [8, 18] ms and X_causes_Y; median delay %.1f ms; mean peak %.3f; min obs %zu",
                  r.recovered, 1e3 * quantile(delays, 0.5), peak, min_obs);
    return {r.recovered >= kNeeded && min_obs >= 50000, buf};
}

// 7. Spread of rho(0) scales as 1/sqrt(P) within a factor of 2.
Outcome variance_law(std::size_t threads) {
    constexpr double kFactor = 2.0;
    VarianceStudyConfig cfg;
    cfg.projections = {10, 100, 1000};
    cfg.trials = 100;
    cfg.threads = threads;
    const auto rows = variance_study(cfg);
    bool pass = true;
    std::string detail;
    for (std::size_t j = 0; j + 1 < rows.size(); ++j) {
        const std::size_t k = rows[j].std_by_lag.size() / 2;
        const double ratio = rows[j].std_by_lag[k] / rows[j + 1].std_by_lag[k];
        const double expected = std::sqrt(static_cast<double>(rows[j + 1].projections) / static_cast<double>(rows[j].projections));
        pass = pass && ratio >= expected / kFactor && ratio <= expected * kFactor;
        char buf[120];
        std::snprintf(buf, sizeof buf, "std(P=%zu)/std(P=%zu) = %.3f (1/sqrt(P) gives %.3f); ", rows[j].projections,
                      rows[j + 1].projections, ratio, expected);
        detail += buf;
    }
    return {pass, detail};
}

// 8. Partitioned projection equals the single pass; ledger bytes are exact.
Outcome partition_invariance(std::size_t threads) {
    constexpr double kMaxDiff = 1e-9;
    constexpr double kCompression = 0.01;
    constexpr std::size_t p = 3000;
    const CausalKernel kernel{0.013, 400.0, 200.0};
    const double span = 0.25;
    const std::size_t fine = std::size_t{1} << 17;
    const PathPair paths = kernel_driven_paths(kernel, fine, span / static_cast<double>(fine), 8);
    const auto [x, y] = sample_pair(paths, 20000, 20000, 8);
    const FrequencyGrid grid = lag_resolution_grid(0.002, p);
    const LagGrid lags(0.002, 25);
    const FourierOptions o;
    const CrossCorrelogram single =
        fourier_correlogram(project(demean(x), grid), project(demean(y), grid), lags, o).correlogram;
    double worst = 0.0;
    bool bytes_ok = true;
    for (std::size_t k : {1, 2, 4, 8}) {
        const PartitionedRun run = run_partitioned({x, y}, grid, k, threads, 100 + k);
        const CrossCorrelogram part = fourier_correlogram(run.projections[0], run.projections[1], lags, o).correlogram;
        for (std::size_t i = 0; i < lags.size(); ++i) worst = std::max(worst, std::abs(single.rho[i] - part.rho[i]));
        const CostLedger ledger = cost_report(2, p, x.size(), k, x.label().size() + y.label().size());
        for (std::uint64_t b : run.bytes_per_worker) bytes_ok = bytes_ok && b == ledger.bytes_sent_per_worker;
    }
    const CostLedger big = cost_report(4, 3000, 5000000, 8);
    char buf[200];
    std::snprintf(buf, sizeof buf, "max |rho diff| %.2e over k in {1,2,4,8}; ledger bytes %s; compression ratio %.5f at P=3000, N=5e6",
                  worst, bytes_ok ? "exact" : "MISMATCH", big.compression_ratio);
    return {worst <= kMaxDiff && bytes_ok && big.compression_ratio < kCompression, buf};
}

}  // namespace

int main() {
    const std::size_t threads = thread_count();
    struct Criterion {
        int id;
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {1, "table1-reproduction", [&] { return table1(threads); }},
        {2, "lrd-erasure-band", [&] { return lrd_band(threads); }},
        {3, "hy-failure-on-lrd", [&] { return hy_failure(threads); }},
        {4, "oracle-equivalence", [] { return oracle_equivalence(); }},
        {5, "frac-diff-agreement", [] { return frac_diff_agreement(); }},
        {6, "lag-recovery", [&] { return lag_recovery(threads); }},
        {7, "variance-law", [&] { return variance_law(threads); }},
        {8, "partition-invariance", [&] { return partition_invariance(threads); }},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o{false, ""};
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("criterion %d %-22s %s  %s [%.1fs]\n", c.id, c.name, o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
        std::fflush(stdout);
        if (!o.pass) ++failures;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
