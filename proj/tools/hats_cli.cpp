/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The HATS Detector Authors
 * SPDX-License-Identifier: Apache-2.0
 */

// Command-line front end: training, single detections, sweeps and the
// invariant suite. Exit codes: 0 success, 1 configuration error, 2 runtime failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hats/baselines.hpp"
#include "hats/neural.hpp"
#include "hats/oracle_check.hpp"
#include "hats/scene.hpp"
#include "hats/sweep.hpp"

namespace {

using json = nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::size_t parse_memory(const std::string& text)
{
    if (text == "inf")
        return hats::kUnboundedMemory;
    try {
        std::size_t used = 0;
        const unsigned long long v = std::stoull(text, &used);
        if (used == text.size() && v > 0)
            return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
    throw ConfigError("--memory expects a positive integer or 'inf', got '" + text + "'");
}

hats::SuccessorOrder parse_order(const std::string& text)
{
    if (text == "cost")
        return hats::SuccessorOrder::BranchCost;
    if (text == "alphabet")
        return hats::SuccessorOrder::Alphabet;
    throw ConfigError("--order expects 'cost' or 'alphabet'");
}

std::shared_ptr<const hats::HeuristicProvider> load_heuristic(const std::string& model_path, bool zero)
{
    if (!model_path.empty())
        return std::make_shared<hats::MlpHeuristic>(hats::load_model(std::filesystem::path(model_path)));
    if (zero)
        return std::make_shared<hats::ZeroHeuristic>();
    return nullptr;
}

std::ofstream open_output(const std::string& path)
{
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os)
        throw ConfigError("cannot open " + path + " for writing");
    return os;
}

json complex_to_json(const hats::ComplexVector& v)
{
    json out = json::array();
    for (const auto& c : v)
        out.push_back({c.real(), c.imag()});
    return out;
}

hats::ComplexVector complex_from_json(const json& j, const char* field)
{
    hats::ComplexVector out;
    for (const auto& e : j.at(field)) {
        if (!e.is_array() || e.size() != 2)
            throw ConfigError(std::string("scene field '") + field + "' needs [re, im] pairs");
        out.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
    return out;
}

json scene_to_json(const hats::Scene& scene, double snr_db)
{
    const auto& cs = scene.complex;
    return {{"nt", cs.hc.cols},         {"nr", cs.hc.rows},        {"snr_db", snr_db},
            {"rho", cs.rho},            {"hc", complex_to_json(cs.hc.data)},
            {"xc", complex_to_json(cs.xc)}, {"yc", complex_to_json(cs.yc)}};
}

hats::Scene scene_from_json(const json& j)
{
    hats::Scene scene;
    auto& cs = scene.complex;
    const std::size_t nt = j.at("nt").get<std::size_t>();
    const std::size_t nr = j.at("nr").get<std::size_t>();
    cs.hc = hats::ComplexMatrix(nr, nt);
    cs.hc.data = complex_from_json(j, "hc");
    cs.yc = complex_from_json(j, "yc");
    if (cs.hc.data.size() != nr * nt || cs.yc.size() != nr)
        throw ConfigError("scene dimensions do not match nt/nr");
    cs.rho = j.value("rho", 1.0);
    if (j.contains("xc")) {
        cs.xc = complex_from_json(j, "xc");
        if (cs.xc.size() != nt)
            throw ConfigError("scene xc length does not match nt");
        scene.bits.resize(2 * nt);
        for (std::size_t i = 0; i < nt; ++i) {
            scene.bits[i] = cs.xc[i].real() > 0 ? 1 : 0;
            scene.bits[nt + i] = cs.xc[i].imag() > 0 ? 1 : 0;
        }
    }
    return scene;
}

struct SweepArgs {
    std::size_t nt = 4;
    std::size_t nr = 4;
    std::string snr = "5:15:2.5";
    std::size_t trials = 1000;
    std::string algos = "sd,astar-zero";
    std::string memory = "inf";
    std::string model;
    bool zero_heuristic = false;
    std::uint64_t seed = 1;
    std::string out;
    std::size_t threads = 0;
    std::string order = "cost";
    bool noiseless = false;
};

void add_sweep_options(CLI::App* cmd, SweepArgs& a)
{
    cmd->add_option("--nt", a.nt, "Transmit antennas")->capture_default_str();
    cmd->add_option("--nr", a.nr, "Receive antennas")->capture_default_str();
    cmd->add_option("--snr", a.snr, "SNR points in dB, lo:hi:step or a single value")->capture_default_str();
    cmd->add_option("--trials", a.trials, "Trials per SNR point (0 = adaptive)")->capture_default_str();
    cmd->add_option("--algos", a.algos, "Comma list of mmse, sd, astar-zero, hats, hats:<M|inf>")->capture_default_str();
    cmd->add_option("--memory", a.memory, "ACTIVE capacity for plain 'hats' (integer or inf)")->capture_default_str();
    cmd->add_option("--model", a.model, "Trained heuristic model file");
    cmd->add_flag("--zero-heuristic", a.zero_heuristic, "Run hats with h = 0 when no model is given");
    cmd->add_option("--seed", a.seed, "Random seed")->capture_default_str();
    cmd->add_option("--out", a.out, "CSV output path (stdout when omitted)");
    cmd->add_option("--threads", a.threads, "Worker threads (default: HATS_THREADS or all cores)");
    cmd->add_option("--order", a.order, "Successor order: cost or alphabet")->capture_default_str();
    cmd->add_flag("--noiseless", a.noiseless, "Zero the noise (sanity runs)");
}

int run_sweep_command(const SweepArgs& a, bool ber)
{
    hats::SweepConfig cfg;
    cfg.nt = a.nt;
    cfg.nr = a.nr;
    cfg.snr_db = hats::parse_snr_range(a.snr);
    cfg.trials = a.trials;
    cfg.memory = parse_memory(a.memory);
    cfg.algorithms = hats::parse_algorithm_list(a.algos, cfg.memory);
    cfg.model_label = a.model.empty() ? (a.zero_heuristic ? "zero" : "-") : a.model;
    cfg.seed = a.seed;
    cfg.threads = a.threads;
    cfg.noiseless = a.noiseless;
    cfg.validate();

    hats::TrialParams params;
    params.order = parse_order(a.order);
    params.heuristic = load_heuristic(a.model, a.zero_heuristic);

    if (a.out.empty()) {
        ber ? hats::sweep_ber(cfg, params, &std::cout) : hats::sweep_complexity(cfg, params, &std::cout);
    } else {
        auto os = open_output(a.out);
        ber ? hats::sweep_ber(cfg, params, &os) : hats::sweep_complexity(cfg, params, &os);
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Best-first tree search MIMO detector with a learned heuristic"};
    app.require_subcommand(1);

    // train
    hats::TrainConfig tc;
    std::string train_out = "model.bin";
    std::string loss_trace;
    std::string hidden_csv = "128,64,32,16";
    bool no_final_relu = false;
    auto* train_cmd = app.add_subcommand("train", "Train a heuristic network");
    train_cmd->add_option("--nt", tc.nt, "Transmit antennas")->capture_default_str();
    train_cmd->add_option("--nr", tc.nr, "Receive antennas")->capture_default_str();
    train_cmd->add_option("--snr-lo", tc.snr_low_db, "Lowest training SNR (dB)")->capture_default_str();
    train_cmd->add_option("--snr-hi", tc.snr_high_db, "Highest training SNR (dB)")->capture_default_str();
    train_cmd->add_option("--time-slots", tc.time_slots, "Time slots per mini-batch")->capture_default_str();
    train_cmd->add_option("--batches", tc.num_batches, "Mini-batches collected into the dataset")->capture_default_str();
    train_cmd->add_option("--steps", tc.steps, "Optimizer steps (0 = batches)")->capture_default_str();
    train_cmd->add_option("--minibatch", tc.minibatch, "Samples per step (0 = one mini-batch)")->capture_default_str();
    train_cmd->add_option("--lr", tc.learning_rate, "Adam learning rate")->capture_default_str();
    train_cmd->add_option("--hidden", hidden_csv, "Hidden layer widths")->capture_default_str();
    train_cmd->add_flag("--no-final-relu", no_final_relu, "Leave the output layer linear");
    train_cmd->add_flag("--supervise-goal-level", tc.supervise_goal_level, "Also emit level-m samples");
    train_cmd->add_option("--seed", tc.seed, "Random seed")->capture_default_str();
    train_cmd->add_option("--out", train_out, "Model output path")->capture_default_str();
    train_cmd->add_option("--loss-trace", loss_trace, "Write step,loss lines here");

    // detect
    std::size_t det_nt = 4, det_nr = 4;
    double det_snr = 10.0;
    std::uint64_t det_seed = 1;
    std::string det_algo = "sd", det_memory = "inf", det_model, det_scene, det_dump, det_order = "cost";
    bool det_zero = false;
    auto* detect_cmd = app.add_subcommand("detect", "Detect one instance from a scene file or a seed");
    detect_cmd->add_option("--nt", det_nt)->capture_default_str();
    detect_cmd->add_option("--nr", det_nr)->capture_default_str();
    detect_cmd->add_option("--snr", det_snr, "SNR in dB")->capture_default_str();
    detect_cmd->add_option("--seed", det_seed)->capture_default_str();
    detect_cmd->add_option("--algo", det_algo, "mmse, sd, astar-zero, hats, hats:<M|inf>")->capture_default_str();
    detect_cmd->add_option("--memory", det_memory)->capture_default_str();
    detect_cmd->add_option("--model", det_model, "Trained heuristic model file");
    detect_cmd->add_flag("--zero-heuristic", det_zero);
    detect_cmd->add_option("--scene", det_scene, "Scene JSON file to detect instead of sampling");
    detect_cmd->add_option("--dump-scene", det_dump, "Write the sampled scene as JSON");
    detect_cmd->add_option("--order", det_order)->capture_default_str();

    SweepArgs ber_args, cx_args;
    auto* ber_cmd = app.add_subcommand("sweep-ber", "BER versus SNR");
    add_sweep_options(ber_cmd, ber_args);
    auto* cx_cmd = app.add_subcommand("sweep-complexity", "Visited nodes versus SNR");
    add_sweep_options(cx_cmd, cx_args);

    // sweep-scaling
    std::vector<std::size_t> sc_antennas{4, 6, 8};
    double sc_snr = 15.0;
    std::size_t sc_trials = 500, sc_threads = 0;
    std::string sc_algos = "astar-zero,hats", sc_memory = "inf", sc_out, sc_order = "cost";
    std::vector<std::string> sc_models;
    bool sc_zero = false;
    std::uint64_t sc_seed = 1;
    auto* sc_cmd = app.add_subcommand("sweep-scaling", "Visited nodes versus antenna count");
    sc_cmd->add_option("--antennas", sc_antennas, "Antenna counts (Nt = Nr)")->delimiter(',')->capture_default_str();
    sc_cmd->add_option("--snr", sc_snr)->capture_default_str();
    sc_cmd->add_option("--trials", sc_trials)->capture_default_str();
    sc_cmd->add_option("--algos", sc_algos)->capture_default_str();
    sc_cmd->add_option("--memory", sc_memory)->capture_default_str();
    sc_cmd->add_option("--model", sc_models, "N=path, one per antenna count");
    sc_cmd->add_flag("--zero-heuristic", sc_zero);
    sc_cmd->add_option("--seed", sc_seed)->capture_default_str();
    sc_cmd->add_option("--out", sc_out);
    sc_cmd->add_option("--threads", sc_threads);
    sc_cmd->add_option("--order", sc_order)->capture_default_str();

    // oracle-check
    std::size_t oc_size = 8, oc_instances = 200;
    std::uint64_t oc_seed = 1;
    auto* oc_cmd = app.add_subcommand("oracle-check", "Run the exhaustive-oracle invariant suite");
    oc_cmd->add_option("--size", oc_size, "Real problem dimension m (even)")->capture_default_str();
    oc_cmd->add_option("--instances", oc_instances)->capture_default_str();
    oc_cmd->add_option("--seed", oc_seed)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*train_cmd) {
            tc.hidden.clear();
            for (const auto& tok : CLI::detail::split(hidden_csv, ','))
                tc.hidden.push_back(std::stoul(tok));
            tc.final_relu = !no_final_relu;
            tc.validate();
            const auto result = hats::train(tc);
            hats::save_model(result.model, std::filesystem::path(train_out));
            if (!loss_trace.empty()) {
                auto os = open_output(loss_trace);
                hats::write_loss_trace(result.loss_trace, os);
            }
            std::printf("trained %zu samples, %zu steps -> %s\n", tc.total_samples(),
                        tc.steps ? tc.steps : tc.num_batches, train_out.c_str());
            if (!result.loss_trace.empty())
                std::printf("loss: first %.6g last %.6g\n", result.loss_trace.front().second,
                            result.loss_trace.back().second);
            return kExitOk;
        }

        if (*detect_cmd) {
            const std::size_t memory = parse_memory(det_memory);
            const auto algo = hats::parse_algorithm(det_algo, memory);
            hats::Scene scene;
            if (!det_scene.empty()) {
                std::ifstream is(det_scene);
                if (!is)
                    throw ConfigError("cannot open scene file " + det_scene);
                scene = scene_from_json(json::parse(is));
            } else {
                hats::RngStream rng(det_seed, 0);
                scene = hats::sample_scene(det_nt, det_nr, det_snr, rng);
            }
            if (!det_dump.empty()) {
                auto os = open_output(det_dump);
                os << scene_to_json(scene, det_snr).dump(2) << '\n';
            }
            hats::TrialParams params;
            params.order = parse_order(det_order);
            params.heuristic = load_heuristic(det_model, det_zero);

            const auto real = hats::widen_complex(scene.complex.yc, scene.complex.hc);
            const bool has_truth = !scene.bits.empty();
            if (!has_truth) // bit errors are meaningless without the transmitted vector
                scene.bits.assign(real.h.cols(), 0);
            const auto rec = hats::run_trial(scene, det_snr, algo, params);
            json out = {{"algorithm", rec.algorithm}, {"success", rec.success}, {"cost", rec.cost},
                        {"visited", rec.visited},     {"expanded", rec.expanded}};
            if (has_truth)
                out["bit_errors"] = rec.bit_errors;
            std::cout << out.dump() << '\n';
            return rec.success ? kExitOk : kExitRuntime;
        }

        if (*ber_cmd)
            return run_sweep_command(ber_args, true);
        if (*cx_cmd)
            return run_sweep_command(cx_args, false);

        if (*sc_cmd) {
            hats::ScalingConfig cfg;
            cfg.antennas = sc_antennas;
            cfg.snr_db = sc_snr;
            cfg.trials = sc_trials;
            cfg.algorithms = hats::parse_algorithm_list(sc_algos, parse_memory(sc_memory));
            cfg.seed = sc_seed;
            cfg.threads = sc_threads;
            for (const auto& spec : sc_models) {
                const auto eq = spec.find('=');
                if (eq == std::string::npos)
                    throw ConfigError("--model expects N=path, got '" + spec + "'");
                cfg.heuristics[std::stoul(spec.substr(0, eq))] = load_heuristic(spec.substr(eq + 1), false);
            }
            if (sc_zero)
                for (std::size_t n : cfg.antennas)
                    cfg.heuristics.try_emplace(n, std::make_shared<hats::ZeroHeuristic>());
            hats::TrialParams params;
            params.order = parse_order(sc_order);
            if (sc_out.empty()) {
                hats::sweep_scaling(cfg, params, &std::cout);
            } else {
                auto os = open_output(sc_out);
                hats::sweep_scaling(cfg, params, &os);
            }
            return kExitOk;
        }

        if (*oc_cmd) {
            const auto results = hats::run_oracle_check(oc_size, oc_instances, oc_seed);
            bool all = true;
            for (const auto& r : results) {
                std::printf("%s  %s (%zu/%zu ok)%s%s\n", r.passed() ? "PASS" : "FAIL", r.name.c_str(),
                            r.checked - r.violations, r.checked, r.first_failure.empty() ? "" : "  first: ",
                            r.first_failure.c_str());
                all = all && r.passed();
            }
            return all ? kExitOk : kExitRuntime;
        }
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    } catch (const hats::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        const bool config = e.code() == hats::ErrorCode::InvalidConfig || e.code() == hats::ErrorCode::MissingModel;
        return config ? kExitConfig : kExitRuntime;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitRuntime;
    }
    return kExitOk;
}
