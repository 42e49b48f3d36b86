// xcausal command-line interface.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "xcausal/baselines.hpp"
#include "xcausal/causal.hpp"
#include "xcausal/config.hpp"
#include "xcausal/core.hpp"
#include "xcausal/experiments.hpp"
#include "xcausal/io.hpp"
#include "xcausal/lrd.hpp"
#include "xcausal/parallel.hpp"
#include "xcausal/pipeline.hpp"
#include "xcausal/spectral.hpp"
#include "xcausal/synth.hpp"

namespace fs = std::filesystem;
using namespace xcausal;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitNumerical = 4;

int exit_code(ErrorKind k) {
    switch (k) {
        case ErrorKind::InvalidArgument:
        case ErrorKind::AlphaOutOfRange:
        case ErrorKind::WindowTooWide:
        case ErrorKind::TruncationTooLong:
        case ErrorKind::TooFewTrials:
            return kExitConfig;
        case ErrorKind::DegenerateVariance:
        case ErrorKind::EmbeddingFailure:
        case ErrorKind::TooFewFrequencies:
            return kExitNumerical;
        default:
            return kExitData;
    }
}

std::size_t default_threads() {
    if (const char* env = std::getenv("XCAUSAL_THREADS")) {
        const long n = std::strtol(env, nullptr, 10);
        if (n > 0) return static_cast<std::size_t>(n);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Config keys settable by flag, in the order they are documented.
const std::vector<std::pair<std::string, std::string>> kConfigFlags{
    {"--seed", "seed"},
    {"--trials", "trials"},
    {"--n-x", "n_x"},
    {"--n-y", "n_y"},
    {"--span", "span"},
    {"--fine-steps", "fine_steps"},
    {"--process", "process"},
    {"--hurst", "hurst"},
    {"--rho", "rho"},
    {"--tau", "tau"},
    {"--kernel-alpha", "kernel_alpha"},
    {"--kernel-beta", "kernel_beta"},
    {"--noise", "noise"},
    {"--projections,-P", "projections"},
    {"--df-policy", "df_policy"},
    {"--lag-step", "lag_step"},
    {"--half-lags", "half_lags"},
    {"--pipeline", "pipeline"},
    {"--alpha", "alpha"},
    {"--centering", "centering"},
    {"--low-fraction", "low_fraction"},
    {"--smooth", "smooth"},
    {"--theta", "theta"},
    {"--workers", "workers"},
};

struct Globals {
    std::string config_file;
    std::vector<std::string> params;
    std::map<std::string, std::string> flag_values;
    std::size_t threads = default_threads();
    std::string gnuplot;
};

/// Defaults differ per command where an experiment has pinned parameters.
ExperimentConfig command_defaults(const std::string& command) {
    ExperimentConfig c;
    if (command == "table1") {
        c.trials = 100;
        c.n_x = 10000;
        c.projections = 1000;
        c.rho = 0.9;
        c.half_lags = 40;
        c.alpha = 1.0;
        c.centering = Centering::Bridge;
    } else if (command == "variance-study") {
        c.trials = 100;
        c.n_x = 10000;
        c.n_y = 10000;
        c.lag_step = 0.001;
        c.half_lags = 5;
        c.alpha = 1.0;
        c.centering = Centering::Bridge;
    }
    return c;
}

/// defaults < config file < --param key=value < dedicated flags.
ExperimentConfig build_config(const Globals& g, const std::string& command) {
    ExperimentConfig c = command_defaults(command);
    if (!g.config_file.empty()) c = load_config_file(g.config_file, c);
    for (const auto& p : g.params) {
        const auto eq = p.find('=');
        if (eq == std::string::npos) throw Error(ErrorKind::InvalidArgument, "--param expects key=value, got '" + p + "'");
        set_value(c, std::string(detail::trim(p.substr(0, eq))), std::string(detail::trim(p.substr(eq + 1))));
    }
    for (const auto& [key, value] : g.flag_values) set_value(c, key, value);
    validate(c);
    return c;
}

std::string stem(const std::string& path) { return fs::path(path).stem().string(); }

std::vector<IrregularSeries> read_inputs(const std::vector<std::string>& files) {
    std::vector<IrregularSeries> out;
    for (const auto& f : files) out.push_back(read_series_file(f, stem(f)));
    return out;
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorKind::Io, "cannot create directory " + dir);
}

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error(ErrorKind::Io, "cannot write " + path);
    return os;
}

double joint_span(const std::vector<IrregularSeries>& s) {
    double lo = s.front().start();
    double hi = s.front().end();
    for (const auto& x : s) {
        lo = std::min(lo, x.start());
        hi = std::max(hi, x.end());
    }
    return hi - lo;
}

FrequencyGrid make_grid(const ExperimentConfig& c, double span) {
    return c.df_policy == DfPolicy::Lag ? lag_resolution_grid(c.lag_step, c.projections) : span_grid(span, c.projections);
}

double min_mean_gap(const std::vector<IrregularSeries>& s) {
    double g = s.front().mean_gap();
    for (const auto& x : s) g = std::min(g, x.mean_gap());
    return g;
}

/// Lag step for a pipeline: the configured one, else span / P for Fourier
/// pipelines and the densest series' mean gap for the time-domain ones.
double lag_step_for(const ExperimentConfig& c, const std::vector<IrregularSeries>& s, double span) {
    if (c.lag_step > 0) return c.lag_step;
    if (c.pipeline == PipelineKind::Locf || c.pipeline == PipelineKind::Hy) return min_mean_gap(s);
    return span / static_cast<double>(c.projections);
}

void warn_aliasing(double dh, const std::vector<IrregularSeries>& s) {
    for (const auto& x : s) {
        if (dh < x.mean_gap() / 2.0)
            std::cerr << "warning: lag step " << dh << " s is below half the mean gap of '" << x.label() << "' ("
                      << x.mean_gap() << " s); expect aliasing\n";
    }
}

void write_gnuplot(const Globals& g, const std::string& csv, const std::string& xcol,
                   const std::vector<std::string>& ycols, const std::string& title) {
    if (g.gnuplot.empty()) return;
    std::ofstream os = open_out(g.gnuplot);
    os << "# gnuplot " << g.gnuplot << "\n"
       << "set datafile separator ','\n"
       << "set key autotitle columnhead\n"
       << "set title '" << title << "'\n"
       << "set xlabel '" << xcol << "'\n"
       << "set grid\n"
       << "plot ";
    for (std::size_t i = 0; i < ycols.size(); ++i) {
        if (i) os << ", \\\n     ";
        os << "'" << csv << "' using '" << xcol << "':'" << ycols[i] << "' with linespoints";
    }
    os << "\npause -1\n";
}

/// Correlogram of one ordered pair under the configured pipeline.
CrossCorrelogram pair_correlogram(const IrregularSeries& x, const IrregularSeries& y, const ExperimentConfig& c,
                                  const FrequencyGrid& grid, const LagGrid& lags) {
    try {
        switch (c.pipeline) {
            case PipelineKind::Hy: return hy_lagged_correlogram(x, y, lags);
            case PipelineKind::Locf: {
                const double start = std::max(x.start(), y.start());
                const double stop = std::min(x.end(), y.end());
                if (!(stop > start)) throw Error(ErrorKind::NoOverlap, "series do not overlap in time");
                const auto count = static_cast<std::size_t>(std::floor((stop - start) / lags.delta_h)) + 1;
                const RegularSeries dx = demean(difference(locf_resample(x, start, lags.delta_h, count)));
                const RegularSeries dy = demean(difference(locf_resample(y, start, lags.delta_h, count)));
                return regular_xcov(dx, dy, lags.half_count);
            }
            default: {
                const FourierPairResult r = fourier_correlogram(x, y, grid, lags, fourier_options(c));
                std::cerr << x.label() << "->" << y.label() << ": alpha_x=" << r.x.alpha << " alpha_y=" << r.y.alpha
                          << " imag_residual=" << r.correlogram.imag_residual << '\n';
                return r.correlogram;
            }
        }
    } catch (const Error& e) {
        throw Error(e.kind(), "pair " + x.label() + "->" + y.label() + ": " + e.what());
    }
}

void print_llr_header(std::ostream& os) { os << "pair,llr,delay,peak_rho,direction\n"; }

void print_llr_row(std::ostream& os, const std::string& pair, const LlrResult& r) {
    os.precision(10);
    os << pair << ',' << r.llr << ',' << r.delay << ',' << r.peak_rho << ',' << to_string(r.direction) << '\n';
}

// --- subcommands -------------------------------------------------------------

int cmd_simulate(const Globals& g, const std::string& out_dir) {
    const ExperimentConfig c = build_config(g, "simulate");
    ensure_dir(out_dir);
    const double step = c.span / static_cast<double>(c.fine_steps);
    std::ostringstream meta;
    meta << to_text(c);
    for (std::size_t i = 0; i < c.trials; ++i) {
        const std::uint64_t s = c.trials == 1 ? c.seed : trial_seed(c.seed, i);
        std::optional<IrregularSeries> x;
        std::optional<IrregularSeries> y;
        if (c.process == ProcessKind::Kernel) {
            const PathPair p = kernel_driven_paths(kernel(c), c.fine_steps, step, stream_seed(s, 0), c.noise);
            auto pair = sample_pair(p, c.n_x, c.n_y, s);
            x.emplace(std::move(pair.first));
            y.emplace(std::move(pair.second));
        } else {
            const PathPair p = correlated_fbm_paths(c.hurst, c.rho, c.fine_steps, step, stream_seed(s, 0));
            auto pair = sample_pair(p, c.n_x, c.n_y, s);
            x.emplace(std::move(pair.first));
            if (c.process == ProcessKind::Surrogate)
                y.emplace(lagged_surrogate(*x, c.tau, c.noise * std::sqrt(step), stream_seed(s, 3), "Y"));
            else
                y.emplace(std::move(pair.second));
        }
        char suffix[32] = "";
        if (c.trials > 1) std::snprintf(suffix, sizeof suffix, "_%04zu", i);
        const std::string xf = (fs::path(out_dir) / (std::string("x") + suffix + ".csv")).string();
        const std::string yf = (fs::path(out_dir) / (std::string("y") + suffix + ".csv")).string();
        auto ox = open_out(xf);
        write_series_csv(ox, *x);
        auto oy = open_out(yf);
        write_series_csv(oy, *y);
        meta << "trial_seed_" << i << " = " << s << '\n';
    }
    auto om = open_out((fs::path(out_dir) / "meta.txt").string());
    om << meta.str();
    return 0;
}

int cmd_ingest(const std::vector<std::string>& files, const std::string& out_dir, std::optional<double> start,
               std::optional<double> end) {
    std::vector<IrregularSeries> series = read_inputs(files);
    if (!out_dir.empty()) ensure_dir(out_dir);
    std::cerr << "label,n_obs,start,end,mean_gap\n";
    for (auto& s : series) {
        if (start || end)
            s = time_window(s, start.value_or(-std::numeric_limits<double>::infinity()),
                            end.value_or(std::numeric_limits<double>::infinity()));
        std::cerr << s.label() << ',' << s.size() << ',' << s.start() << ',' << s.end() << ',' << s.mean_gap() << '\n';
        if (out_dir.empty()) {
            write_series_csv(std::cout, s);
        } else {
            auto os = open_out((fs::path(out_dir) / (s.label() + ".csv")).string());
            write_series_csv(os, s);
        }
    }
    return 0;
}

int cmd_project(const Globals& g, const std::vector<std::string>& files, const std::string& out_dir,
                const std::string& ledger_file) {
    const ExperimentConfig c = build_config(g, "project");
    const std::vector<IrregularSeries> series = read_inputs(files);
    const FrequencyGrid grid = make_grid(c, joint_span(series));
    ensure_dir(out_dir);
    const PartitionedRun run = run_partitioned(series, grid, c.workers, g.threads, c.seed);
    std::uint64_t label_bytes = 0;
    std::uint64_t max_n = 0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        auto os = open_out((fs::path(out_dir) / (series[i].label() + ".sig")).string());
        write_signature(os, run.projections[i]);
        label_bytes += series[i].label().size();
        max_n = std::max<std::uint64_t>(max_n, series[i].size());
    }
    const CostLedger ledger = cost_report(series.size(), c.projections, max_n, c.workers, label_bytes,
                                          2 * c.half_lags + 1);
    std::ostringstream text;
    text << to_text(ledger);
    for (std::size_t w = 0; w < run.bytes_per_worker.size(); ++w)
        text << "measured_bytes_worker_" << w << '=' << run.bytes_per_worker[w] << '\n';
    if (ledger_file.empty()) {
        std::cout << text.str();
    } else {
        auto os = open_out(ledger_file);
        os << text.str();
    }
    return 0;
}

int cmd_reduce(const Globals& g, const std::vector<std::string>& files, const std::string& out_dir, bool erase) {
    ExperimentConfig c = build_config(g, "reduce");
    if (erase) c.pipeline = PipelineKind::FourierLrd;
    std::map<std::string, std::vector<PartialProjection>> by_label;
    std::vector<std::string> order;
    for (const auto& f : files) {
        std::ifstream in(f, std::ios::binary);
        if (!in) throw Error(ErrorKind::Io, "cannot open " + f);
        FourierProjection p = read_signature(in);
        if (!by_label.count(p.label)) order.push_back(p.label);
        auto& parts = by_label[p.label];
        parts.push_back({static_cast<std::uint32_t>(parts.size()), std::move(p)});
    }
    if (order.size() < 2) throw Error(ErrorKind::InvalidArgument, "reduce needs signatures of at least 2 series");
    std::vector<FourierProjection> merged;
    for (const auto& label : order) merged.push_back(reduce_all(by_label[label]));
    const FrequencyGrid grid = merged.front().grid;
    const double dh = c.lag_step > 0 ? c.lag_step
                                     : 2.0 * std::numbers::pi / (grid.delta_f * static_cast<double>(grid.count));
    const LagGrid lags(dh, c.half_lags);
    if (!out_dir.empty()) ensure_dir(out_dir);
    print_llr_header(std::cout);
    for (std::size_t i = 0; i < merged.size(); ++i) {
        for (std::size_t j = 0; j < merged.size(); ++j) {
            if (i == j) continue;
            const std::string pair = merged[i].label + "__" + merged[j].label;
            CrossCorrelogram cc = [&] {
                try {
                    return fourier_correlogram(merged[i], merged[j], lags, fourier_options(c)).correlogram;
                } catch (const Error& e) {
                    throw Error(e.kind(), "pair " + pair + ": " + e.what());
                }
            }();
            if (!out_dir.empty()) {
                auto os = open_out((fs::path(out_dir) / (pair + ".csv")).string());
                write_correlogram_csv(os, cc);
            }
            print_llr_row(std::cout, pair, llr(cc, c.theta));
        }
    }
    return 0;
}

int cmd_xcorr(const Globals& g, const std::vector<std::string>& files, const std::string& out_dir, bool erase) {
    ExperimentConfig c = build_config(g, "xcorr");
    if (erase) c.pipeline = PipelineKind::FourierLrd;
    if (files.size() < 2) throw Error(ErrorKind::InvalidArgument, "xcorr needs at least 2 input series");
    const std::vector<IrregularSeries> series = read_inputs(files);
    const double span = joint_span(series);
    const FrequencyGrid grid = make_grid(c, span);
    const LagGrid lags(lag_step_for(c, series, span), c.half_lags);
    warn_aliasing(lags.delta_h, series);
    if (out_dir.empty() && series.size() != 2)
        throw Error(ErrorKind::InvalidArgument, "more than 2 inputs need --out");
    if (!out_dir.empty()) ensure_dir(out_dir);
    std::string first_csv;
    for (std::size_t i = 0; i < series.size(); ++i) {
        for (std::size_t j = 0; j < series.size(); ++j) {
            if (i == j) continue;
            const CrossCorrelogram cc = pair_correlogram(series[i], series[j], c, grid, lags);
            if (out_dir.empty()) {
                if (i == 0) write_correlogram_csv(std::cout, cc);
            } else {
                const std::string path =
                    (fs::path(out_dir) / (series[i].label() + "__" + series[j].label() + ".csv")).string();
                if (first_csv.empty()) first_csv = path;
                auto os = open_out(path);
                write_correlogram_csv(os, cc);
            }
        }
    }
    write_gnuplot(g, first_csv.empty() ? "correlogram.csv" : first_csv, "lag", {"rho"}, "cross-correlogram");
    return 0;
}

int cmd_hurst(const Globals& g, const std::vector<std::string>& files) {
    const ExperimentConfig c = build_config(g, "hurst");
    const std::vector<IrregularSeries> series = read_inputs(files);
    std::cout.precision(10);
    std::cout << "label,hurst,slope,stderr,n_freqs,f_low,f_high,clipped\n";
    for (const auto& s : series) {
        const FrequencyGrid grid = make_grid(c, s.span());
        const FourierProjection p = project(center(s, c.centering), grid);
        HurstEstimate h;
        try {
            h = estimate_hurst(cross_spectrum(p, p), c.low_fraction);
        } catch (const Error& e) {
            throw Error(e.kind(), "series " + s.label() + ": " + e.what());
        }
        const auto bins = static_cast<std::size_t>(std::ceil(c.low_fraction * static_cast<double>(grid.count)));
        std::cout << s.label() << ',' << h.hurst << ',' << h.slope << ',' << h.stderr_hurst << ',' << h.n_freqs_used << ','
                  << grid.frequency(1) << ',' << grid.frequency(bins) << ',' << (h.clipped ? "true" : "false") << '\n';
    }
    return 0;
}

int cmd_baseline(const Globals& g, const std::vector<std::string>& files, const std::string& method,
                 const std::string& out) {
    ExperimentConfig c = build_config(g, "baseline");
    if (method == "locf") c.pipeline = PipelineKind::Locf;
    else if (method == "hy") c.pipeline = PipelineKind::Hy;
    else throw Error(ErrorKind::InvalidArgument, "method must be locf or hy");
    if (files.size() != 2) throw Error(ErrorKind::InvalidArgument, "baseline needs exactly 2 input series");
    const std::vector<IrregularSeries> series = read_inputs(files);
    const double span = joint_span(series);
    const LagGrid lags(lag_step_for(c, series, span), c.half_lags);
    const CrossCorrelogram cc = pair_correlogram(series[0], series[1], c, span_grid(span, 2), lags);
    if (out.empty()) {
        write_correlogram_csv(std::cout, cc);
    } else {
        auto os = open_out(out);
        write_correlogram_csv(os, cc);
    }
    write_gnuplot(g, out.empty() ? "correlogram.csv" : out, "lag", {"rho"}, method + " correlogram");
    return 0;
}

int cmd_llr(const Globals& g, const std::vector<std::string>& files) {
    const ExperimentConfig c = build_config(g, "llr");
    print_llr_header(std::cout);
    for (const auto& f : files) print_llr_row(std::cout, stem(f), llr(read_correlogram_file(f), c.theta));
    return 0;
}

int cmd_band(const Globals& g, const std::vector<std::string>& files, std::size_t min_trials, const std::string& out) {
    std::vector<CrossCorrelogram> cs;
    for (const auto& f : files) cs.push_back(read_correlogram_file(f));
    const PercentileBand b = percentile_band(cs, min_trials);
    if (out.empty()) {
        write_band_csv(std::cout, b);
    } else {
        auto os = open_out(out);
        write_band_csv(os, b);
    }
    write_gnuplot(g, out.empty() ? "band.csv" : out, "lag", {"p05", "p50", "p95"}, "percentile band");
    return 0;
}

int cmd_table1(const Globals& g, const std::vector<double>& ratios, const std::string& out) {
    const ExperimentConfig c = build_config(g, "table1");
    Table1Config t;
    t.n1 = c.n_x;
    t.fine_steps = c.fine_steps;
    t.span = c.span;
    t.projections = c.projections;
    t.rho = c.rho;
    t.half_lags = c.half_lags;
    t.fourier_lag_step = c.lag_step;
    t.centering = c.centering;
    t.trials = c.trials;
    t.seed = c.seed;
    t.threads = g.threads;
    std::ostringstream os;
    os.precision(6);
    os << "ratio,locf_mean,locf_std,fourier_mean,fourier_std\n";
    for (double r : ratios) {
        const Table1Row row = locf_llr_experiment(r, t);
        os << r << ',' << row.locf.mean << ',' << row.locf.std << ',' << row.fourier.mean << ',' << row.fourier.std << '\n';
    }
    if (out.empty()) {
        std::cout << os.str();
    } else {
        auto f = open_out(out);
        f << os.str();
    }
    write_gnuplot(g, out.empty() ? "table1.csv" : out, "ratio", {"locf_mean", "fourier_mean"}, "LLR by sampling ratio");
    return 0;
}

int cmd_variance_study(const Globals& g, const std::vector<std::size_t>& ps, const std::string& out) {
    const ExperimentConfig c = build_config(g, "variance-study");
    VarianceStudyConfig v;
    v.projections = ps;
    v.n_obs = c.n_x;
    v.fine_steps = c.fine_steps;
    v.span = c.span;
    v.lag_step = c.lag_step > 0 ? c.lag_step : 0.001 * c.span;
    v.half_lags = c.half_lags;
    v.centering = c.centering;
    v.trials = c.trials;
    v.seed = c.seed;
    v.threads = g.threads;
    const auto rows = variance_study(v);
    const LagGrid lags(v.lag_step, v.half_lags);
    std::ostringstream os;
    os.precision(10);
    os << "projections,lag,std\n";
    for (const auto& r : rows)
        for (std::size_t k = 0; k < r.std_by_lag.size(); ++k) os << r.projections << ',' << lags.lag(k) << ',' << r.std_by_lag[k] << '\n';
    if (out.empty()) {
        std::cout << os.str();
    } else {
        auto f = open_out(out);
        f << os.str();
    }
    write_gnuplot(g, out.empty() ? "variance.csv" : out, "projections", {"std"}, "std of rho against P");
    return 0;
}

int cmd_cost_report(const Globals& g, std::uint64_t d, std::uint64_t n, std::uint64_t label_bytes) {
    const ExperimentConfig c = build_config(g, "cost-report");
    std::cout << to_text(cost_report(d, c.projections, n, c.workers, label_bytes, 2 * c.half_lags + 1));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"xcausal: lead-lag causality between irregularly sampled series via Fourier projection"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--config", g.config_file, "Config file of key = value lines")->check(CLI::ExistingFile);
    app.add_option("--param", g.params, "Config override key=value (repeatable)");
    app.add_option("--threads", g.threads, "Worker threads (default: XCAUSAL_THREADS or hardware)")
        ->check(CLI::PositiveNumber);
    app.add_option("--gnuplot", g.gnuplot, "Also write a gnuplot script for the CSV output to this path");
    std::map<std::string, std::string> raw_flags;
    for (const auto& [flag, key] : kConfigFlags) app.add_option(flag, raw_flags[key], "Config key " + key);

    std::vector<std::string> inputs;
    std::string out;
    std::string sim_out = ".";
    std::string ledger;
    std::string method = "locf";
    bool erase = false;
    std::optional<double> win_start;
    std::optional<double> win_end;
    std::size_t min_trials = kMinBandTrials;
    std::vector<double> ratios{1.0, 4.5, 10.0};
    std::vector<std::size_t> p_list{10, 100, 1000, 10000};
    std::uint64_t cost_d = 1;
    std::uint64_t cost_n = 100000;
    std::uint64_t cost_labels = 0;

    auto* simulate = app.add_subcommand("simulate", "Simulate a pair of irregularly sampled series as CSV");
    simulate->add_option("--out,-o", sim_out, "Output directory")->capture_default_str();

    auto* ingest = app.add_subcommand("ingest", "Parse, sort, dedup and window CSV series");
    ingest->add_option("inputs", inputs, "CSV files")->required();
    ingest->add_option("--out,-o", out, "Output directory (default: stdout)");
    ingest->add_option("--start", win_start, "Keep observations at or after this time");
    ingest->add_option("--end", win_end, "Keep observations at or before this time");

    auto* project = app.add_subcommand("project", "Partitioned projection: one signature file per series");
    project->add_option("inputs", inputs, "CSV files")->required();
    project->add_option("--out,-o", out, "Signature directory")->required();
    project->add_option("--ledger", ledger, "Write the cost ledger here (default: stdout)");

    auto* reduce = app.add_subcommand("reduce", "Merge signatures and emit correlograms for every ordered pair");
    reduce->add_option("inputs", inputs, "Signature files")->required();
    reduce->add_option("--out,-o", out, "Correlogram directory");
    reduce->add_flag("--erase-lrd", erase, "Estimate H per series and eliminate the pole");

    auto* xcorr = app.add_subcommand("xcorr", "Cross-correlograms for every ordered pair of input series");
    xcorr->add_option("inputs", inputs, "CSV files")->required();
    xcorr->add_option("--out,-o", out, "Output directory (stdout allowed for 2 inputs)");
    xcorr->add_flag("--erase-lrd", erase, "Estimate H per series and eliminate the pole");

    auto* hurst = app.add_subcommand("hurst", "Hurst exponent from the low-frequency periodogram");
    hurst->add_option("inputs", inputs, "CSV files")->required();

    auto* baseline = app.add_subcommand("baseline", "Time-domain correlogram: LOCF or lagged Hayashi-Yoshida");
    baseline->add_option("inputs", inputs, "Two CSV files")->required()->expected(2);
    baseline->add_option("--method", method, "locf or hy")->check(CLI::IsMember({"locf", "hy"}));
    baseline->add_option("--out,-o", out, "Output CSV (default: stdout)");

    auto* llr_cmd = app.add_subcommand("llr", "Lead-Lag Ratio, delay and direction of correlogram CSVs");
    llr_cmd->add_option("inputs", inputs, "Correlogram CSV files")->required();

    auto* band = app.add_subcommand("band", "5th/50th/95th percentile band over correlogram CSVs");
    band->add_option("inputs", inputs, "Correlogram CSV files")->required();
    band->add_option("--min-trials", min_trials, "Minimum number of correlograms")->default_val(kMinBandTrials);
    band->add_option("--out,-o", out, "Output CSV (default: stdout)");

    auto* table1 = app.add_subcommand("table1", "LOCF versus Fourier LLR at several sampling ratios");
    table1->add_option("--ratios", ratios, "Observation-count ratios N1/N2")->default_val(ratios);
    table1->add_option("--out,-o", out, "Output CSV (default: stdout)");

    auto* variance = app.add_subcommand("variance-study", "Standard deviation of rho against P");
    variance->add_option("--p-list", p_list, "Projection counts")->default_val(p_list);
    variance->add_option("--out,-o", out, "Output CSV (default: stdout)");

    auto* cost = app.add_subcommand("cost-report", "Communication and memory ledger");
    cost->add_option("--series,-d", cost_d, "Number of series")->default_val(cost_d);
    cost->add_option("--obs,-N", cost_n, "Observations per series")->default_val(cost_n);
    cost->add_option("--label-bytes", cost_labels, "Summed label length")->default_val(cost_labels);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }
    for (const auto& [flag, key] : kConfigFlags) {
        const auto name = flag.substr(0, flag.find(','));
        if (app.count(name) > 0) g.flag_values[key] = raw_flags[key];
    }

    try {
        if (simulate->parsed()) return cmd_simulate(g, sim_out);
        if (ingest->parsed()) return cmd_ingest(inputs, out, win_start, win_end);
        if (project->parsed()) return cmd_project(g, inputs, out, ledger);
        if (reduce->parsed()) return cmd_reduce(g, inputs, out, erase);
        if (xcorr->parsed()) return cmd_xcorr(g, inputs, out, erase);
        if (hurst->parsed()) return cmd_hurst(g, inputs);
        if (baseline->parsed()) return cmd_baseline(g, inputs, method, out);
        if (llr_cmd->parsed()) return cmd_llr(g, inputs);
        if (band->parsed()) return cmd_band(g, inputs, min_trials, out);
        if (table1->parsed()) return cmd_table1(g, ratios, out);
        if (variance->parsed()) return cmd_variance_study(g, p_list, out);
        if (cost->parsed()) return cmd_cost_report(g, cost_d, cost_n, cost_labels);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    }
    return 0;
}
