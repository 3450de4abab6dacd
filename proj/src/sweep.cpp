/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The HATS Detector Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "hats/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace hats {

namespace {

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t");
    return std::string(s.substr(b, e - b + 1));
}

double parse_double(std::string_view text)
{
    const std::string t = trim(text);
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size() || !std::isfinite(v))
        throw Error(ErrorCode::InvalidConfig, "not a number: '" + t + "'");
    return v;
}

std::string memory_label(std::size_t memory)
{
    return memory == kUnboundedMemory ? "inf" : std::to_string(memory);
}

std::string format_number(const char* fmt, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, v);
    return buf;
}

template <class Fn>
void parallel_for(std::size_t count, std::size_t threads, Fn&& fn)
{
    threads = std::max<std::size_t>(1, std::min(threads, count));
    if (threads == 1) {
        for (std::size_t i = 0; i < count; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < threads; ++w)
        pool.emplace_back([&] {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count)
                    return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure)
                        failure = std::current_exception();
                    next.store(count);
                }
            }
        });
    for (auto& t : pool)
        t.join();
    if (failure)
        std::rethrow_exception(failure);
}

struct PointSetup {
    std::size_t nt;
    std::size_t nr;
    double snr_db;
    std::uint64_t seed;
    std::uint64_t stream_base;
    bool noiseless;
    const std::vector<AlgorithmSpec>* algorithms;
    const TrialParams* params;
    std::size_t threads;
};

TrialRecord detect_on(const Scene& scene, const WidenedModel& real, const DetectionProblem& problem, double snr_db,
                      const AlgorithmSpec& algorithm, const TrialParams& params)
{
    TrialRecord rec;
    rec.snr_db = snr_db;
    rec.algorithm = algorithm.label;
    rec.bits = scene.bits.size();

    std::optional<Psv> estimate;
    switch (algorithm.kind) {
    case Algorithm::Mmse:
        estimate = mmse_detect(real.y, real.h, params.mmse, problem.alphabet());
        rec.success = true;
        break;
    case Algorithm::SphereDecoder: {
        const SearchOutcome o = sphere_decode(problem);
        estimate = o.estimate;
        rec.success = o.success;
        rec.visited = o.stats.visited;
        rec.expanded = o.stats.expanded;
        rec.peak_active = o.stats.peak_active;
        break;
    }
    case Algorithm::AstarZero: {
        const SearchOutcome o = astar(problem, ZeroHeuristic{}, {params.order});
        estimate = o.estimate;
        rec.success = o.success;
        rec.visited = o.stats.visited;
        rec.expanded = o.stats.expanded;
        rec.peak_active = o.stats.peak_active;
        break;
    }
    case Algorithm::Hats: {
        if (!params.heuristic)
            throw Error(ErrorCode::MissingModel, "algorithm " + algorithm.label + " needs a heuristic");
        const SearchOutcome o = hats(problem, *params.heuristic, algorithm.memory, {params.order});
        estimate = o.estimate;
        rec.success = o.success;
        rec.visited = o.stats.visited;
        rec.expanded = o.stats.expanded;
        rec.peak_active = o.stats.peak_active;
        break;
    }
    }

    const Vector sent = transmitted_symbols(scene);
    if (estimate) {
        const Vector got = natural_from_psv(*estimate);
        for (std::size_t i = 0; i < sent.size(); ++i)
            rec.bit_errors += got[i] != sent[i] ? 1 : 0;
        rec.cost = path_cost(problem, *estimate);
    } else {
        rec.success = false;
        rec.bit_errors = rec.bits;
        rec.cost = std::numeric_limits<double>::infinity();
    }
    return rec;
}

Scene make_scene(const PointSetup& s, std::uint64_t trial)
{
    RngStream rng(s.seed, s.stream_base | trial);
    Scene scene = sample_scene(s.nt, s.nr, s.snr_db, rng);
    if (s.noiseless) {
        std::fill(scene.complex.wc.begin(), scene.complex.wc.end(), Complex{});
        scene.complex.yc = complex_mat_vec(scene.complex.hc, scene.complex.xc);
    }
    return scene;
}

// Appends trials [first, first+count) to out[algorithm].
void run_block(const PointSetup& s, std::uint64_t first, std::size_t count,
               std::vector<std::vector<TrialRecord>>& out)
{
    const auto& algos = *s.algorithms;
    const std::size_t base = out.empty() ? 0 : out.front().size();
    out.resize(algos.size());
    for (auto& v : out)
        v.resize(base + count);
    const Alphabet alphabet = Alphabet::qpsk();
    parallel_for(count, s.threads, [&](std::size_t i) {
        const Scene scene = make_scene(s, first + i);
        const WidenedModel real = widen_complex(scene.complex.yc, scene.complex.hc);
        const DetectionProblem problem = preprocess(real.y, real.h, alphabet);
        for (std::size_t a = 0; a < algos.size(); ++a)
            out[a][base + i] = detect_on(scene, real, problem, s.snr_db, algos[a], *s.params);
    });
}

std::uint64_t point_stream(std::size_t index) { return static_cast<std::uint64_t>(index) << 32; }

} // namespace

AlgorithmSpec parse_algorithm(std::string_view token, std::size_t default_memory)
{
    const std::string t = trim(token);
    if (t == "mmse")
        return {Algorithm::Mmse, kUnboundedMemory, "mmse"};
    if (t == "sd")
        return {Algorithm::SphereDecoder, kUnboundedMemory, "sd"};
    if (t == "astar-zero")
        return {Algorithm::AstarZero, kUnboundedMemory, "astar-zero"};
    if (t == "hats")
        return {Algorithm::Hats, default_memory, "hats(" + memory_label(default_memory) + ")"};
    if (t.rfind("hats:", 0) == 0) {
        const std::string arg = t.substr(5);
        std::size_t memory = kUnboundedMemory;
        if (arg != "inf") {
            std::size_t parsed = 0;
            const auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), parsed);
            if (ec != std::errc{} || ptr != arg.data() + arg.size() || parsed == 0)
                throw Error(ErrorCode::InvalidConfig, "bad memory size in '" + t + "'");
            memory = parsed;
        }
        return {Algorithm::Hats, memory, "hats(" + memory_label(memory) + ")"};
    }
    throw Error(ErrorCode::InvalidConfig, "unknown algorithm '" + t + "'");
}

std::vector<AlgorithmSpec> parse_algorithm_list(std::string_view csv, std::size_t default_memory)
{
    std::vector<AlgorithmSpec> out;
    std::size_t start = 0;
    while (start <= csv.size()) {
        const std::size_t comma = csv.find(',', start);
        const std::string_view tok = csv.substr(start, comma == std::string_view::npos ? csv.npos : comma - start);
        out.push_back(parse_algorithm(tok, default_memory));
        if (comma == std::string_view::npos)
            break;
        start = comma + 1;
    }
    return out;
}

std::vector<double> parse_snr_range(std::string_view text)
{
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t colon = text.find(':', start);
        parts.push_back(text.substr(start, colon == std::string_view::npos ? text.npos : colon - start));
        if (colon == std::string_view::npos)
            break;
        start = colon + 1;
    }
    if (parts.size() == 1)
        return {parse_double(parts[0])};
    if (parts.size() != 3)
        throw Error(ErrorCode::InvalidConfig, "snr range must be lo:hi:step, got '" + std::string(text) + "'");
    const double lo = parse_double(parts[0]);
    const double hi = parse_double(parts[1]);
    const double step = parse_double(parts[2]);
    if (!(step > 0.0) || hi < lo)
        throw Error(ErrorCode::InvalidConfig, "snr range needs lo <= hi and step > 0");
    std::vector<double> out;
    for (std::size_t i = 0;; ++i) {
        const double v = lo + static_cast<double>(i) * step;
        if (v > hi + 1e-9)
            break;
        out.push_back(v);
    }
    return out;
}

std::size_t resolve_threads(std::size_t requested)
{
    if (requested > 0)
        return requested;
    if (const char* env = std::getenv("HATS_THREADS")) {
        std::size_t n = 0;
        const std::string_view sv(env);
        const auto [ptr, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), n);
        if (ec == std::errc{} && ptr == sv.data() + sv.size() && n > 0)
            return n;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void SweepConfig::validate() const
{
    if (nt == 0 || nr < nt)
        throw Error(ErrorCode::InvalidConfig, "need Nr >= Nt >= 1");
    if (snr_db.empty())
        throw Error(ErrorCode::InvalidConfig, "snr list is empty");
    if (algorithms.empty())
        throw Error(ErrorCode::InvalidConfig, "no algorithms selected");
    for (const auto& a : algorithms)
        if (a.kind == Algorithm::Hats && a.memory != kUnboundedMemory && a.memory < 2 * nt + 1)
            throw Error(ErrorCode::InvalidConfig,
                        a.label + ": memory must be at least m+1 = " + std::to_string(2 * nt + 1));
}

TrialRecord run_trial(const Scene& scene, double snr_db, const AlgorithmSpec& algorithm, const TrialParams& params)
{
    const WidenedModel real = widen_complex(scene.complex.yc, scene.complex.hc);
    const DetectionProblem problem = preprocess(real.y, real.h, Alphabet::qpsk());
    return detect_on(scene, real, problem, snr_db, algorithm, params);
}

ReportRow aggregate(std::size_t num_antennas, double snr_db, std::string_view algorithm,
                    const std::vector<TrialRecord>& records)
{
    ReportRow row;
    row.num_antennas = num_antennas;
    row.snr_db = snr_db;
    row.algorithm = std::string(algorithm);
    row.trials = records.size();
    std::vector<std::uint64_t> visited;
    visited.reserve(records.size());
    double sum_visited = 0.0, sum_expanded = 0.0;
    for (const auto& r : records) {
        row.bits += r.bits;
        row.bit_errors += r.bit_errors;
        sum_visited += static_cast<double>(r.visited);
        sum_expanded += static_cast<double>(r.expanded);
        row.peak_active = std::max(row.peak_active, r.peak_active);
        row.failures += r.success ? 0 : 1;
        visited.push_back(r.visited);
    }
    if (!records.empty()) {
        const double n = static_cast<double>(records.size());
        row.ber = row.bits ? static_cast<double>(row.bit_errors) / static_cast<double>(row.bits) : 0.0;
        row.mean_visited = sum_visited / n;
        row.mean_expanded = sum_expanded / n;
        std::sort(visited.begin(), visited.end());
        // nearest-rank percentile
        const auto rank = static_cast<std::size_t>(std::ceil(0.95 * n));
        row.p95_visited = visited[std::max<std::size_t>(rank, 1) - 1];
    }
    return row;
}

const ReportRow& SweepReport::row(double snr_db, std::string_view algorithm) const
{
    for (const auto& r : rows)
        if (r.snr_db == snr_db && r.algorithm == algorithm)
            return r;
    throw Error(ErrorCode::InvalidConfig, "no row for " + std::string(algorithm) + " at " +
                                              format_number("%g", snr_db) + " dB");
}

std::vector<std::vector<TrialRecord>> run_point(const SweepConfig& cfg, std::size_t snr_index,
                                                const TrialParams& params)
{
    PointSetup setup{cfg.nt,         cfg.nr,          cfg.snr_db.at(snr_index), cfg.seed, point_stream(snr_index),
                     cfg.noiseless, &cfg.algorithms, &params,                  resolve_threads(cfg.threads)};
    std::vector<std::vector<TrialRecord>> out;
    if (cfg.trials > 0) {
        run_block(setup, 0, cfg.trials, out);
        return out;
    }
    // Adaptive: fixed-size blocks keep the stopping point independent of threading.
    constexpr std::size_t kBlock = 256;
    const std::uint64_t bits_per_trial = 2 * cfg.nt;
    std::uint64_t done = 0;
    while (true) {
        run_block(setup, done, kBlock, out);
        done += kBlock;
        std::uint64_t least_errors = std::numeric_limits<std::uint64_t>::max();
        for (const auto& recs : out) {
            std::uint64_t e = 0;
            for (const auto& r : recs)
                e += r.bit_errors;
            least_errors = std::min(least_errors, e);
        }
        if (least_errors >= cfg.min_errors || done * bits_per_trial >= cfg.max_bits)
            return out;
    }
}

std::string config_header(const SweepConfig& cfg)
{
    std::ostringstream os;
    os << "# config: nt=" << cfg.nt << " nr=" << cfg.nr << " snr_db=";
    for (std::size_t i = 0; i < cfg.snr_db.size(); ++i)
        os << (i ? ";" : "") << format_number("%g", cfg.snr_db[i]);
    os << " trials=" << (cfg.trials ? std::to_string(cfg.trials) : "adaptive(min_errors=" + std::to_string(cfg.min_errors) +
                                                                         ",max_bits=" + std::to_string(cfg.max_bits) + ")");
    os << " algos=";
    for (std::size_t i = 0; i < cfg.algorithms.size(); ++i)
        os << (i ? ";" : "") << cfg.algorithms[i].label;
    os << " memory=" << memory_label(cfg.memory) << " model=" << cfg.model_label << " seed=" << cfg.seed
       << (cfg.noiseless ? " noiseless=1" : "") << "\n";
    os << "# snr calibration: " << kSnrCalibration << "\n";
    return os.str();
}

namespace {

SweepReport run_sweep(const SweepConfig& cfg, const TrialParams& params, std::ostream* csv, bool ber)
{
    cfg.validate();
    SweepReport report;
    if (csv) {
        *csv << config_header(cfg);
        *csv << (ber ? "snr_db,algorithm,trials,bits,bit_errors,ber\n"
                     : "snr_db,algorithm,trials,mean_visited,p95_visited,mean_expanded,peak_active\n");
        csv->flush();
    }
    for (std::size_t s = 0; s < cfg.snr_db.size(); ++s) {
        const auto records = run_point(cfg, s, params);
        for (std::size_t a = 0; a < cfg.algorithms.size(); ++a) {
            ReportRow row = aggregate(cfg.nt, cfg.snr_db[s], cfg.algorithms[a].label, records[a]);
            if (csv) {
                *csv << format_number("%g", row.snr_db) << ',' << row.algorithm << ',' << row.trials << ',';
                if (ber)
                    *csv << row.bits << ',' << row.bit_errors << ',' << format_number("%.6e", row.ber) << '\n';
                else
                    *csv << format_number("%.4f", row.mean_visited) << ',' << row.p95_visited << ','
                         << format_number("%.4f", row.mean_expanded) << ',' << row.peak_active << '\n';
            }
            report.rows.push_back(std::move(row));
        }
        if (csv)
            csv->flush();
    }
    return report;
}

} // namespace

SweepReport sweep_ber(const SweepConfig& cfg, const TrialParams& params, std::ostream* csv)
{
    return run_sweep(cfg, params, csv, true);
}

SweepReport sweep_complexity(const SweepConfig& cfg, const TrialParams& params, std::ostream* csv)
{
    return run_sweep(cfg, params, csv, false);
}

SweepReport sweep_scaling(const ScalingConfig& cfg, const TrialParams& params, std::ostream* csv)
{
    if (cfg.antennas.empty())
        throw Error(ErrorCode::InvalidConfig, "antenna list is empty");
    if (cfg.algorithms.empty())
        throw Error(ErrorCode::InvalidConfig, "no algorithms selected");
    if (cfg.trials == 0)
        throw Error(ErrorCode::InvalidConfig, "trials must be positive");
    const bool needs_model = std::any_of(cfg.algorithms.begin(), cfg.algorithms.end(),
                                         [](const AlgorithmSpec& a) { return a.kind == Algorithm::Hats; });
    for (std::size_t n : cfg.antennas)
        if (needs_model && !cfg.heuristics.count(n))
            throw Error(ErrorCode::MissingModel, "no heuristic for " + std::to_string(n) + " antennas");

    SweepReport report;
    if (csv) {
        *csv << "# config: antennas=";
        for (std::size_t i = 0; i < cfg.antennas.size(); ++i)
            *csv << (i ? ";" : "") << cfg.antennas[i];
        *csv << " snr_db=" << format_number("%g", cfg.snr_db) << " trials=" << cfg.trials << " algos=";
        for (std::size_t i = 0; i < cfg.algorithms.size(); ++i)
            *csv << (i ? ";" : "") << cfg.algorithms[i].label;
        *csv << " seed=" << cfg.seed << "\n# snr calibration: " << kSnrCalibration << "\n";
        *csv << "num_antennas,snr_db,algorithm,mean_visited\n";
    }
    for (std::size_t i = 0; i < cfg.antennas.size(); ++i) {
        const std::size_t n = cfg.antennas[i];
        TrialParams local = params;
        if (needs_model)
            local.heuristic = cfg.heuristics.at(n);
        for (const auto& a : cfg.algorithms)
            if (a.kind == Algorithm::Hats && a.memory != kUnboundedMemory && a.memory < 2 * n + 1)
                throw Error(ErrorCode::InvalidConfig, a.label + ": memory below m+1 for " + std::to_string(n) + " antennas");
        PointSetup setup{n, n, cfg.snr_db, cfg.seed, point_stream(i), false, &cfg.algorithms, &local,
                         resolve_threads(cfg.threads)};
        std::vector<std::vector<TrialRecord>> records;
        run_block(setup, 0, cfg.trials, records);
        for (std::size_t a = 0; a < cfg.algorithms.size(); ++a) {
            ReportRow row = aggregate(n, cfg.snr_db, cfg.algorithms[a].label, records[a]);
            if (csv)
                *csv << n << ',' << format_number("%g", cfg.snr_db) << ',' << row.algorithm << ','
                     << format_number("%.4f", row.mean_visited) << '\n';
            report.rows.push_back(std::move(row));
        }
        if (csv)
            csv->flush();
    }
    return report;
}

} // namespace hats
