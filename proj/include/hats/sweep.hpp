/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The HATS Detector Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#ifndef HATS_SWEEP_HPP
#define HATS_SWEEP_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "hats/baselines.hpp"
#include "hats/scene.hpp"
#include "hats/search.hpp"

namespace hats {

enum class Algorithm { Mmse, SphereDecoder, AstarZero, Hats };

struct AlgorithmSpec {
    Algorithm kind = Algorithm::SphereDecoder;
    std::size_t memory = kUnboundedMemory; // hats only
    std::string label;
};

// "mmse", "sd", "astar-zero", "hats", "hats:<M>" or "hats:inf". Plain "hats"
// takes default_memory.
AlgorithmSpec parse_algorithm(std::string_view token, std::size_t default_memory);
std::vector<AlgorithmSpec> parse_algorithm_list(std::string_view csv, std::size_t default_memory);

// "lo:hi:step" (inclusive of hi within 1e-9) or a single value.
std::vector<double> parse_snr_range(std::string_view text);

struct TrialParams {
    std::shared_ptr<const HeuristicProvider> heuristic; // used by hats; null means none loaded
    MmseConfig mmse;
    SuccessorOrder order = SuccessorOrder::BranchCost;
};

struct TrialRecord {
    double snr_db = 0.0;
    std::string algorithm;
    std::uint64_t bit_errors = 0;
    std::uint64_t bits = 0;
    std::uint64_t visited = 0;
    std::uint64_t expanded = 0;
    std::uint64_t peak_active = 0;
    double cost = 0.0; // g of the estimate on the preprocessed problem
    bool success = false;
};

TrialRecord run_trial(const Scene& scene, double snr_db, const AlgorithmSpec& algorithm, const TrialParams& params);

struct SweepConfig {
    std::size_t nt = 4;
    std::size_t nr = 4;
    std::vector<double> snr_db{5.0, 7.5, 10.0, 12.5, 15.0};
    std::size_t trials = 1000; // 0: adaptive, until min_errors or max_bits
    std::vector<AlgorithmSpec> algorithms;
    std::size_t memory = kUnboundedMemory;
    std::string model_label = "-"; // recorded in the CSV header only
    std::uint64_t seed = 1;
    std::size_t threads = 0; // 0: HATS_THREADS or hardware concurrency
    std::uint64_t min_errors = 100;
    std::uint64_t max_bits = 1'000'000;
    bool noiseless = false;

    void validate() const;
};

struct ReportRow {
    std::size_t num_antennas = 0;
    double snr_db = 0.0;
    std::string algorithm;
    std::uint64_t trials = 0;
    std::uint64_t bits = 0;
    std::uint64_t bit_errors = 0;
    double ber = 0.0;
    double mean_visited = 0.0;
    std::uint64_t p95_visited = 0;
    double mean_expanded = 0.0;
    std::uint64_t peak_active = 0;
    std::uint64_t failures = 0;
};

struct SweepReport {
    std::vector<ReportRow> rows;
    const ReportRow& row(double snr_db, std::string_view algorithm) const;
};

ReportRow aggregate(std::size_t num_antennas, double snr_db, std::string_view algorithm,
                    const std::vector<TrialRecord>& records);

// Runs one SNR point; every algorithm sees the same scenes.
std::vector<std::vector<TrialRecord>> run_point(const SweepConfig& cfg, std::size_t snr_index,
                                                const TrialParams& params);

// Both sweeps stream one block of rows per SNR point to `csv` (when given).
SweepReport sweep_ber(const SweepConfig& cfg, const TrialParams& params, std::ostream* csv);
SweepReport sweep_complexity(const SweepConfig& cfg, const TrialParams& params, std::ostream* csv);

struct ScalingConfig {
    std::vector<std::size_t> antennas{4, 6, 8}; // Nt = Nr
    double snr_db = 15.0;
    std::size_t trials = 500;
    std::vector<AlgorithmSpec> algorithms;
    std::map<std::size_t, std::shared_ptr<const HeuristicProvider>> heuristics; // by antenna count
    std::uint64_t seed = 1;
    std::size_t threads = 0;
};

SweepReport sweep_scaling(const ScalingConfig& cfg, const TrialParams& params, std::ostream* csv);

std::string config_header(const SweepConfig& cfg);
std::size_t resolve_threads(std::size_t requested);

} // namespace hats

#endif
