/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The HATS Detector Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include <cstdio>
#include <ostream>
#include <string>

#include "hats/neural.hpp"
#include "hats/scene.hpp"

namespace hats {

namespace {

// Stream ids above this offset never collide with per-slot streams.
constexpr std::uint64_t kInitStream = std::uint64_t{1} << 62;
constexpr std::uint64_t kBatchStream = kInitStream + 1;

} // namespace

void TrainConfig::validate() const
{
    if (nt == 0 || nr < nt)
        throw Error(ErrorCode::InvalidConfig, "need Nr >= Nt >= 1");
    if (!(snr_low_db <= snr_high_db))
        throw Error(ErrorCode::InvalidConfig, "snr_low must not exceed snr_high");
    if (time_slots == 0)
        throw Error(ErrorCode::InvalidConfig, "time_slots must be positive");
    if (dimension() < 2 && !supervise_goal_level)
        throw Error(ErrorCode::InvalidConfig, "no supervised levels for a one-level tree");
    if (!(learning_rate > 0.0))
        throw Error(ErrorCode::InvalidConfig, "learning rate must be positive");
    for (std::size_t n : hidden)
        if (n == 0)
            throw Error(ErrorCode::InvalidConfig, "hidden layer sizes must be positive");
}

std::vector<TrainingSample> generate_dataset(const TrainConfig& cfg)
{
    cfg.validate();
    const std::size_t m = cfg.dimension();
    const std::size_t slots = cfg.num_batches * cfg.time_slots;
    const std::size_t last_level = cfg.supervise_goal_level ? m : m - 1;
    const Alphabet alphabet = Alphabet::qpsk();

    std::vector<TrainingSample> out;
    out.reserve(cfg.total_samples());
    for (std::size_t slot = 0; slot < slots; ++slot) {
        RngStream rng(cfg.seed, slot);
        const double snr = cfg.snr_low_db == cfg.snr_high_db ? cfg.snr_low_db
                                                             : rng.uniform(cfg.snr_low_db, cfg.snr_high_db);
        const Scene scene = sample_scene(cfg.nt, cfg.nr, snr, rng);
        const WidenedModel real = widen_complex(scene.complex.yc, scene.complex.hc);
        auto problem = std::make_shared<const DetectionProblem>(preprocess(real.y, real.h, alphabet));
        const Psv label = psv_from_natural(transmitted_symbols(scene));
        const double target = path_cost(*problem, label);
        for (std::size_t k = 1; k <= last_level; ++k)
            out.push_back({problem, label, k, target});
    }
    return out;
}

TrainResult train(const TrainConfig& cfg, std::span<const TrainingSample> dataset)
{
    cfg.validate();
    std::vector<std::size_t> sizes{cfg.dimension()};
    sizes.insert(sizes.end(), cfg.hidden.begin(), cfg.hidden.end());
    sizes.push_back(1);

    RngStream init_rng(cfg.seed, kInitStream);
    TrainResult result{init_model(sizes, init_rng), {}};
    result.model.final_relu = cfg.final_relu;

    const std::size_t steps = cfg.steps == 0 ? cfg.num_batches : cfg.steps;
    if (steps == 0 || dataset.empty())
        return result;

    const std::size_t batch_size = cfg.minibatch == 0 ? cfg.time_slots * cfg.levels_per_slot() : cfg.minibatch;
    AdamState adam = AdamState::for_model(result.model, cfg.learning_rate);
    RngStream pick(cfg.seed, kBatchStream);
    std::vector<TrainingSample> batch(batch_size);

    for (std::size_t step = 0; step < steps; ++step) {
        for (auto& s : batch)
            s = dataset[pick.index(dataset.size())];
        double loss = 0.0;
        const Gradients grads = backward(result.model, batch, &loss);
        adam_step(result.model, grads, adam);
        if (step % cfg.trace_every == 0 || step + 1 == steps)
            result.loss_trace.emplace_back(step, loss);
    }
    return result;
}

TrainResult train(const TrainConfig& cfg)
{
    const auto dataset = generate_dataset(cfg);
    return train(cfg, dataset);
}

void write_loss_trace(const std::vector<std::pair<std::uint64_t, double>>& trace, std::ostream& os)
{
    char buf[64];
    for (const auto& [step, loss] : trace) {
        std::snprintf(buf, sizeof buf, "%llu,%.9g\n", static_cast<unsigned long long>(step), loss);
        os << buf;
    }
}

} // namespace hats
