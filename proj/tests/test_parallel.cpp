#include <gtest/gtest.h>

#include <algorithm>
#include <atomic>
#include <cmath>

#include "xcausal/experiments.hpp"
#include "xcausal/parallel.hpp"

using namespace xcausal;

namespace {

std::vector<IrregularSeries> kernel_pair(std::uint64_t seed, std::size_t n_obs) {
    const std::size_t fine = std::size_t{1} << 16;
    const PathPair p = kernel_driven_paths({0.013, 400.0, 200.0}, fine, 0.25 / fine, seed);
    auto [x, y] = sample_pair(p, n_obs, n_obs, seed);
    return {x, y};
}

double max_abs_diff(const FourierProjection& a, const FourierProjection& b) {
    double m = 0.0;
    for (std::size_t l = 0; l < a.coeffs.size(); ++l) m = std::max(m, std::abs(a.coeffs[l] - b.coeffs[l]));
    return m;
}

double max_abs(const FourierProjection& a) {
    double m = 0.0;
    for (const auto& z : a.coeffs) m = std::max(m, std::abs(z));
    return m;
}

}  // namespace

TEST(ParallelFor, VisitsEveryIndexOnce) {
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(hits.size(), 4, [&](std::size_t i) { ++hits[i]; });
    for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
}

TEST(ParallelFor, RethrowsWorkerErrors) {
    EXPECT_THROW(parallel_for(50, 3,
                              [](std::size_t i) {
                                  if (i == 17) throw Error(ErrorKind::InvalidArgument, "boom");
                              }),
                 Error);
}

TEST(Partition, CoversEveryObservationOnce) {
    const auto series = kernel_pair(1, 1000);
    const auto shards = partition(series, 3, 9);
    ASSERT_EQ(shards.size(), 3u);
    for (std::size_t si = 0; si < series.size(); ++si) {
        std::vector<Observation> all;
        for (const auto& w : shards) {
            EXPECT_EQ(w[si].label, series[si].label());
            all.insert(all.end(), w[si].obs.begin(), w[si].obs.end());
        }
        const IrregularSeries back = dedup_and_sort(all);
        EXPECT_EQ(back.timestamps(), series[si].timestamps());
        EXPECT_EQ(back.values(), series[si].values());
    }
}

TEST(Partition, MoreWorkersThanObservations) {
    const std::vector<IrregularSeries> s{IrregularSeries({0, 1, 2}, {1, -2, 1}, "a")};
    const auto shards = partition(s, 5);
    EXPECT_TRUE(shards[4][0].obs.empty());
    const FrequencyGrid g = span_grid(2.0, 4);
    const PartialProjection empty = worker_project(shards[4][0], g, 0.0);
    EXPECT_EQ(empty.projection.n_obs, 0u);
    EXPECT_EQ(max_abs(empty.projection), 0.0);
    const PartitionedRun run = run_partitioned(s, g, 5);
    const FourierProjection direct = project(s[0], g);
    EXPECT_LT(max_abs_diff(run.projections[0], direct), 1e-12);
}

TEST(Partition, GlobalMeanFromSumCounts) {
    EXPECT_DOUBLE_EQ(global_mean({{3.0, 2}, {0.0, 0}, {5.0, 2}}), 2.0);
    EXPECT_THROW(global_mean({{0.0, 0}}), Error);
}

TEST(Reduce, OrderIndependentAfterSort) {
    const auto series = kernel_pair(2, 2000);
    const FrequencyGrid g = lag_resolution_grid(0.002, 500);
    const auto shards = partition(series, 7);
    const double m = mean(series[0].values());
    std::vector<PartialProjection> parts;
    for (const auto& w : shards) parts.push_back(worker_project(w[0], g, m));
    const FourierProjection a = reduce_all(parts);
    std::reverse(parts.begin(), parts.end());
    const FourierProjection b = reduce_all(parts);
    EXPECT_EQ(a.coeffs, b.coeffs);
    const FourierProjection c = reduce_all(parts, false);
    EXPECT_LT(max_abs_diff(a, c), 1e-9 * max_abs(a));
    EXPECT_EQ(a.n_obs, series[0].size());
}

TEST(CostLedger, WorkedExample) {
    const CostLedger c = cost_report(4, 3000, 5'000'000, 8);
    EXPECT_EQ(c.bytes_sent_per_worker, 4u * 3000 * 16 + 4 * 28);
    EXPECT_EQ(c.total_bytes, 8 * c.bytes_sent_per_worker);
    EXPECT_EQ(c.mean_exchange_bytes, 8u * 4 * 16);
    EXPECT_EQ(c.raw_bytes, 4u * 5'000'000 * 16);
    EXPECT_DOUBLE_EQ(c.compression_ratio, 3000.0 / 5'000'000.0);
    EXPECT_LT(c.compression_ratio, 0.01);
    EXPECT_TRUE(c.compressing);
}

TEST(CostLedger, NoCompressionWhenPEqualsN) {
    const CostLedger c = cost_report(2, 1000, 1000, 1);
    EXPECT_DOUBLE_EQ(c.compression_ratio, 1.0);
    EXPECT_FALSE(c.compressing);
    EXPECT_NE(to_text(c).find("regime=not_compressing"), std::string::npos);
    EXPECT_THROW(cost_report(0, 1, 1, 1), Error);
}

TEST(RunPartitioned, InvariantToWorkerCount) {
    const auto series = kernel_pair(3, 5000);
    const FrequencyGrid g = lag_resolution_grid(0.002, 1000);
    const PartitionedRun one = run_partitioned(series, g, 1);
    for (std::size_t k : {2, 4, 8}) {
        const PartitionedRun run = run_partitioned(series, g, k, 2, 5);
        for (std::size_t si = 0; si < series.size(); ++si)
            EXPECT_LT(max_abs_diff(run.projections[si], one.projections[si]), 1e-10 * max_abs(one.projections[si]));
        const std::uint64_t labels = series[0].label().size() + series[1].label().size();
        const CostLedger ledger = cost_report(2, 1000, series[0].size(), k, labels);
        for (std::uint64_t b : run.bytes_per_worker) EXPECT_EQ(b, ledger.bytes_sent_per_worker);
    }
    // k = 1 matches the single-process projection of the demeaned series
    EXPECT_LT(max_abs_diff(one.projections[0], project(demean(series[0]), g)), 1e-9 * max_abs(one.projections[0]));
}

TEST(RunPartitioned, CorrelogramUnchangedByPartitioning) {
    const auto series = kernel_pair(4, 5000);
    const FrequencyGrid g = lag_resolution_grid(0.002, 1000);
    const LagGrid lags(0.002, 10);
    const PartitionedRun a = run_partitioned(series, g, 1);
    const PartitionedRun b = run_partitioned(series, g, 6, 3, 11);
    const CrossCorrelogram ca = correlogram(a.projections[0], a.projections[1], lags);
    const CrossCorrelogram cb = correlogram(b.projections[0], b.projections[1], lags);
    for (std::size_t i = 0; i < ca.rho.size(); ++i) EXPECT_NEAR(ca.rho[i], cb.rho[i], 1e-9);
}
