#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "xcausal/core.hpp"
#include "xcausal/io.hpp"
#include "xcausal/random.hpp"

using namespace xcausal;

namespace {

IrregularSeries ramp(std::size_t n) {
    std::vector<double> t(n), v(n);
    for (std::size_t i = 0; i < n; ++i) {
        t[i] = 0.1 * static_cast<double>(i) + 0.01 * static_cast<double>(i % 3);
        v[i] = std::sin(static_cast<double>(i)) + 2.0;
    }
    return {t, v, "r"};
}

}  // namespace

TEST(Core, DedupKeepsLastOccurrence) {
    const IrregularSeries s = dedup_and_sort({{2.0, 1.0}, {1.0, 5.0}, {2.0, 7.0}, {3.0, 0.5}}, "a");
    EXPECT_EQ(s.timestamps(), (std::vector<double>{1.0, 2.0, 3.0}));
    EXPECT_EQ(s.values(), (std::vector<double>{5.0, 7.0, 0.5}));
    EXPECT_EQ(s.label(), "a");
}

TEST(Core, DedupIsIdempotent) {
    const IrregularSeries s = dedup_and_sort({{3, 1}, {1, 2}, {1, 3}, {2, 4}, {2, 5}});
    const IrregularSeries again = dedup_and_sort(observations(s));
    EXPECT_EQ(again.timestamps(), s.timestamps());
    EXPECT_EQ(again.values(), s.values());
}

TEST(Core, DedupIgnoresInputOrderOfDistinctTimes) {
    const IrregularSeries s = ramp(50);
    auto obs = observations(s);
    Rng rng = make_rng(4);
    std::shuffle(obs.begin(), obs.end(), rng);
    const IrregularSeries back = dedup_and_sort(obs);
    EXPECT_EQ(back.timestamps(), s.timestamps());
    EXPECT_EQ(back.values(), s.values());
}

TEST(Core, DedupRejectsDegenerateInput) {
    try {
        dedup_and_sort({{1.0, 1.0}, {1.0, 2.0}});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::EmptySeries);
    }
    try {
        dedup_and_sort({{1.0, 1.0}, {2.0, std::nan("")}});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NonFinite);
    }
}

TEST(Core, SeriesRequiresIncreasingTimes) {
    EXPECT_THROW(IrregularSeries({1.0, 1.0}, {0.0, 1.0}), Error);
    EXPECT_THROW(IrregularSeries({1.0}, {0.0}), Error);
    EXPECT_THROW(IrregularSeries({1.0, 2.0}, {0.0}), Error);
}

TEST(Core, DemeanGivesZeroMean) {
    const IrregularSeries d = demean(ramp(1000));
    EXPECT_NEAR(mean(d.values()), 0.0, 1e-14);
    const IrregularSeries dd = demean(d);
    for (std::size_t i = 0; i < d.size(); ++i) EXPECT_NEAR(dd.values()[i], d.values()[i], 1e-14);
}

TEST(Core, BridgeCenterVanishesAtEndsWithZeroMean) {
    const IrregularSeries b = bridge_center(ramp(257));
    EXPECT_NEAR(b.values().front(), 0.0, 1e-12);
    EXPECT_NEAR(b.values().back(), 0.0, 1e-12);
    EXPECT_NEAR(mean(b.values()), 0.0, 1e-12);
}

TEST(Core, BridgeCenterRemovesLinearTrend) {
    std::vector<double> t{0, 1, 2.5, 3, 4}, v;
    for (double x : t) v.push_back(3.0 - 2.0 * x);
    const IrregularSeries b = bridge_center({t, v});
    for (double x : b.values()) EXPECT_NEAR(x, 0.0, 1e-12);
}

TEST(Core, TimeWindowIsInclusive) {
    const IrregularSeries s({0, 1, 2, 3, 4}, {5, 6, 7, 8, 9});
    const IrregularSeries w = time_window(s, 1.0, 3.0);
    EXPECT_EQ(w.timestamps(), (std::vector<double>{1, 2, 3}));
    EXPECT_THROW(time_window(s, 3.5, 3.9), Error);
}

TEST(Core, LagGridIsSymmetric) {
    const LagGrid g(0.5, 3);
    EXPECT_EQ(g.size(), 7u);
    EXPECT_EQ(g.center(), 3u);
    EXPECT_DOUBLE_EQ(g.lag(0), -1.5);
    EXPECT_DOUBLE_EQ(g.lag(6), 1.5);
    EXPECT_THROW(LagGrid(0.0, 3), Error);
    EXPECT_THROW(FrequencyGrid(1.0, 1), Error);
}

TEST(Core, NearbySeedsGiveDistinctTrials) {
    for (std::uint64_t a = 10; a < 20; ++a)
        for (std::uint64_t b = a + 1; b < 20; ++b)
            for (std::uint64_t i = 0; i < 8; ++i)
                for (std::uint64_t j = 0; j < 8; ++j) EXPECT_NE(trial_seed(a, i), trial_seed(b, j));
}

TEST(Io, ReadsHeaderAndSkipsBlankLines) {
    std::istringstream in("timestamp,value\n0.5, 1\n\n0.25,+2e0\n");
    const IrregularSeries s = read_series(in, "s");
    EXPECT_EQ(s.timestamps(), (std::vector<double>{0.25, 0.5}));
    EXPECT_EQ(s.values(), (std::vector<double>{2.0, 1.0}));
}

TEST(Io, BadRowNamesTheLine) {
    std::istringstream in("1,2\n2,abc\n");
    try {
        read_series(in, "s", "f.csv");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::ParseError);
        EXPECT_NE(std::string(e.what()).find("f.csv:2"), std::string::npos);
    }
}

TEST(Io, SeriesCsvRoundTripsExactly) {
    const IrregularSeries s = ramp(100);
    std::stringstream ss;
    write_series_csv(ss, s);
    const IrregularSeries back = read_series(ss, "r");
    EXPECT_EQ(back.timestamps(), s.timestamps());
    EXPECT_EQ(back.values(), s.values());
}

TEST(Io, CorrelogramCsvRoundTrips) {
    const CrossCorrelogram c(LagGrid(0.25, 2), {0.1, -0.2, 1.0, 0.3, 0.05});
    std::stringstream ss;
    write_correlogram_csv(ss, c);
    const CrossCorrelogram back = read_correlogram(ss);
    EXPECT_EQ(back.rho, c.rho);
    EXPECT_EQ(back.lag_grid.half_count, 2u);
    EXPECT_NEAR(back.lag_grid.delta_h, 0.25, 1e-15);

    std::istringstream bad("lag,rho\n-1,0\n0,1\n2,0\n");
    EXPECT_THROW(read_correlogram(bad), Error);
}
