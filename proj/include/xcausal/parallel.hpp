#ifndef XCAUSAL_PARALLEL_HPP
#define XCAUSAL_PARALLEL_HPP

/// @file
/// Partitioned projection: observations are dealt round-robin to workers that
/// share nothing, each worker ships one serialized signature per series, and
/// a reducer merges them. Also the communication and memory cost ledger.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <numeric>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "xcausal/core.hpp"
#include "xcausal/random.hpp"
#include "xcausal/spectral.hpp"

namespace xcausal {

/// Runs fn(i) for i in [0, n) on up to `threads` threads. The first
/// exception thrown by any task is rethrown after all threads join.
template <class Fn>
void parallel_for(std::size_t n, std::size_t threads, Fn&& fn) {
    threads = std::max<std::size_t>(1, std::min(threads, n));
    if (threads == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                    next = n;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

/// One worker's share of one series, in arbitrary time order.
struct Partition {
    std::uint32_t shard_id = 0;
    std::string label;
    std::vector<Observation> obs;
};

/// Deals observation i of each series to shard i mod k. With a nonzero seed
/// each shard is also shuffled, so no worker sees its data in time order.
inline std::vector<std::vector<Partition>> partition(const std::vector<IrregularSeries>& series, std::size_t k,
                                                     std::uint64_t seed = 0) {
    detail::require(k >= 1, ErrorKind::InvalidArgument, "worker count must be >= 1");
    std::vector<std::vector<Partition>> out(k);
    for (std::size_t w = 0; w < k; ++w) {
        for (const auto& s : series) out[w].push_back({static_cast<std::uint32_t>(w), s.label(), {}});
    }
    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        for (std::size_t i = 0; i < s.size(); ++i) out[i % k][si].obs.push_back({s.timestamps()[i], s.values()[i]});
    }
    if (seed != 0) {
        for (std::size_t w = 0; w < k; ++w) {
            for (std::size_t si = 0; si < series.size(); ++si) {
                Rng rng = make_rng(trial_seed(seed, w * series.size() + si));
                std::shuffle(out[w][si].obs.begin(), out[w][si].obs.end(), rng);
            }
        }
    }
    return out;
}

/// The two scalars a worker contributes per series to the global mean.
struct SumCount {
    double sum = 0.0;
    std::uint64_t count = 0;
};

inline SumCount local_sum(const Partition& p) {
    SumCount s;
    for (const auto& o : p.obs) s.sum += o.value;
    s.count = p.obs.size();
    return s;
}

inline double global_mean(const std::vector<SumCount>& parts) {
    double sum = 0.0;
    std::uint64_t count = 0;
    for (const auto& p : parts) {
        sum += p.sum;
        count += p.count;
    }
    if (count == 0) throw Error(ErrorKind::EmptySeries, "no observations across shards");
    return sum / static_cast<double>(count);
}

struct PartialProjection {
    std::uint32_t shard_id = 0;
    FourierProjection projection;
};

/// Projection of one shard centered with the global mean. An empty shard
/// yields the zero projection.
inline PartialProjection worker_project(const Partition& shard, const FrequencyGrid& grid, double mean_value) {
    std::vector<double> t(shard.obs.size());
    std::vector<double> v(shard.obs.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        t[i] = shard.obs[i].t;
        v[i] = shard.obs[i].value - mean_value;
    }
    return {shard.shard_id, project_raw(t, v, grid, shard.label)};
}

/// Left fold of merge. In deterministic mode partials are folded in
/// shard-id order whatever order they arrived in.
inline FourierProjection reduce_all(std::vector<PartialProjection> partials, bool deterministic = true) {
    if (partials.empty()) throw Error(ErrorKind::InvalidArgument, "nothing to reduce");
    if (deterministic)
        std::stable_sort(partials.begin(), partials.end(),
                         [](const PartialProjection& a, const PartialProjection& b) { return a.shard_id < b.shard_id; });
    FourierProjection acc = partials.front().projection;
    for (std::size_t i = 1; i < partials.size(); ++i) acc = merge(acc, partials[i].projection);
    return acc;
}

struct CostLedger {
    std::uint64_t series = 0;
    std::uint64_t projections = 0;
    std::uint64_t obs_per_series = 0;
    std::uint64_t workers = 0;
    /// Signature bytes one worker ships: d P 16 plus per-signature headers.
    std::uint64_t bytes_sent_per_worker = 0;
    std::uint64_t total_bytes = 0;
    /// Sum-count exchange for the global mean: 16 bytes per series per worker.
    std::uint64_t mean_exchange_bytes = 0;
    std::uint64_t datapoints_represented = 0;
    /// Raw (timestamp, value) pairs as 64-bit floats.
    std::uint64_t raw_bytes = 0;
    /// Coefficient payload over raw bytes, i.e. P / N.
    double compression_ratio = 0.0;
    bool compressing = false;
    /// Shipping raw observations instead: N d 16 bytes.
    std::uint64_t time_domain_bytes = 0;
    /// Master memory: d P coefficients plus d^2 correlograms of `lags` values.
    std::uint64_t master_memory_bytes = 0;
};

/// Cost of the partitioned pipeline. `label_bytes` is the summed length of
/// the series labels, which the signature headers carry.
inline CostLedger cost_report(std::uint64_t d, std::uint64_t p, std::uint64_t n, std::uint64_t k,
                              std::uint64_t label_bytes = 0, std::uint64_t lags = 0) {
    detail::require(d > 0 && p > 0 && n > 0 && k > 0, ErrorKind::InvalidArgument, "cost inputs must be positive");
    CostLedger c;
    c.series = d;
    c.projections = p;
    c.obs_per_series = n;
    c.workers = k;
    const std::uint64_t header = d * signature_header_bytes("") + label_bytes;
    c.bytes_sent_per_worker = d * p * 16 + header;
    c.total_bytes = k * c.bytes_sent_per_worker;
    c.mean_exchange_bytes = k * d * 16;
    c.datapoints_represented = d * n;
    c.raw_bytes = d * n * 16;
    c.compression_ratio = static_cast<double>(d * p * 16) / static_cast<double>(c.raw_bytes);
    c.compressing = c.compression_ratio < 1.0;
    c.time_domain_bytes = n * d * 16;
    c.master_memory_bytes = d * p * 16 + d * d * lags * 8;
    return c;
}

inline std::string to_text(const CostLedger& c) {
    std::ostringstream os;
    os.precision(17);
    os << "series=" << c.series << '\n'
       << "projections=" << c.projections << '\n'
       << "obs_per_series=" << c.obs_per_series << '\n'
       << "workers=" << c.workers << '\n'
       << "bytes_sent_per_worker=" << c.bytes_sent_per_worker << '\n'
       << "total_bytes=" << c.total_bytes << '\n'
       << "mean_exchange_bytes=" << c.mean_exchange_bytes << '\n'
       << "datapoints_represented=" << c.datapoints_represented << '\n'
       << "raw_bytes=" << c.raw_bytes << '\n'
       << "compression_ratio=" << c.compression_ratio << '\n'
       << "regime=" << (c.compressing ? "compressing" : "not_compressing") << '\n'
       << "time_domain_bytes=" << c.time_domain_bytes << '\n'
       << "master_memory_bytes=" << c.master_memory_bytes << '\n';
    return os.str();
}

struct PartitionedRun {
    std::vector<FourierProjection> projections;
    /// Serialized signature bytes shipped by each worker.
    std::vector<std::uint64_t> bytes_per_worker;
};

/// Full partitioned projection of a set of series on k in-process workers.
/// Workers exchange sum-count pairs, project their shards, and ship
/// serialized signatures; the reducer deserializes and merges them, in
/// arrival order unless `deterministic`.
inline PartitionedRun run_partitioned(const std::vector<IrregularSeries>& series, const FrequencyGrid& grid,
                                      std::size_t k, std::size_t threads = 1, std::uint64_t seed = 0,
                                      bool deterministic = true) {
    const auto shards = partition(series, k, seed);
    const std::size_t d = series.size();

    std::vector<double> means(d);
    for (std::size_t si = 0; si < d; ++si) {
        std::vector<SumCount> parts(k);
        for (std::size_t w = 0; w < k; ++w) parts[w] = local_sum(shards[w][si]);
        means[si] = global_mean(parts);
    }

    std::vector<std::string> wire(k);
    std::vector<std::size_t> arrival;
    std::mutex arrival_mutex;
    parallel_for(k, threads, [&](std::size_t w) {
        std::ostringstream os(std::ios::binary);
        for (std::size_t si = 0; si < d; ++si) write_signature(os, worker_project(shards[w][si], grid, means[si]).projection);
        wire[w] = os.str();
        std::lock_guard lock(arrival_mutex);
        arrival.push_back(w);
    });

    PartitionedRun run;
    run.bytes_per_worker.resize(k);
    std::vector<std::vector<PartialProjection>> per_series(d);
    for (const std::size_t w : arrival) {
        run.bytes_per_worker[w] = wire[w].size();
        std::istringstream is(wire[w], std::ios::binary);
        for (std::size_t si = 0; si < d; ++si)
            per_series[si].push_back({static_cast<std::uint32_t>(w), read_signature(is)});
    }
    for (std::size_t si = 0; si < d; ++si) run.projections.push_back(reduce_all(per_series[si], deterministic));
    return run;
}

}  // namespace xcausal

#endif  // XCAUSAL_PARALLEL_HPP
