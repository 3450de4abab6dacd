/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The HATS Detector Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#ifndef HATS_NEURAL_HPP
#define HATS_NEURAL_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "hats/rng.hpp"
#include "hats/search.hpp"

namespace hats {

/**
 * Fully-connected rectifier network {n_0 = m, n_1, ..., n_L = 1}.
 *
 * Every layer, including the output layer, applies max{0, W p + b} unless
 * final_relu is switched off.
 */
struct MlpModel {
    std::vector<std::size_t> layer_sizes;
    std::vector<Matrix> weights; // weights[l-1] is n_l x n_{l-1}
    std::vector<Vector> biases;  // biases[l-1] has n_l entries
    bool final_relu = true;

    MlpModel() = default;
    explicit MlpModel(std::vector<std::size_t> sizes); // all parameters zero

    std::size_t num_layers() const noexcept { return weights.size(); }
    std::size_t input_size() const noexcept { return layer_sizes.front(); }
    std::size_t parameter_count() const;

    friend bool operator==(const MlpModel&, const MlpModel&) = default;
};

/// Uniform init in +-sqrt(6 / (n_{l-1} + n_l)); biases start at zero.
MlpModel init_model(std::vector<std::size_t> sizes, RngStream& rng);

/// {m, 128, 64, 32, 16, 1}.
std::vector<std::size_t> default_layer_sizes(std::size_t m);

// z - R [0; x^k] in level order (entry i-1 is level i).
Vector residual_input(const DetectionProblem& p, const Psv& psv);

double forward(const MlpModel& model, std::span<const double> input);

// 0 at goal level, otherwise forward(model, residual_input(p, psv)).
double heuristic_eval(const MlpModel& model, const DetectionProblem& p, const Psv& psv);

class MlpHeuristic final : public HeuristicProvider {
public:
    explicit MlpHeuristic(MlpModel model);
    double evaluate(const DetectionProblem& p, const Psv& psv) const override;
    std::vector<std::size_t> layer_sizes() const override { return model_.layer_sizes; }
    const MlpModel& model() const noexcept { return model_; }

private:
    MlpModel model_;
};

/// One supervised node: the level-k ancestor of the label path.
struct TrainingSample {
    std::shared_ptr<const DetectionProblem> problem;
    Psv label_path;    // goal level
    std::size_t level; // k
    double target;     // g(label_path)
};

// mean |target - f_pred|^2
double l2_loss(std::span<const double> f_pred, std::span<const double> target);

/// Gradient set, shaped like the model parameters.
struct Gradients {
    std::vector<Matrix> weights;
    std::vector<Vector> biases;

    static Gradients zeros_like(const MlpModel& model);
};

/// Mean loss of f = g(x^k) + h(x^k) against the targets.
double batch_loss(const MlpModel& model, std::span<const TrainingSample> batch);

// d(batch_loss)/d(theta); subgradient 0 at the rectifier kink.
Gradients backward(const MlpModel& model, std::span<const TrainingSample> batch, double* loss_out = nullptr);

struct AdamState {
    Gradients first;
    Gradients second;
    std::uint64_t step = 0;
    double learning_rate = 1e-6;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;

    static AdamState for_model(const MlpModel& model, double learning_rate = 1e-6);
};

void adam_step(MlpModel& model, const Gradients& grads, AdamState& state);

struct TrainConfig {
    std::size_t nt = 4;
    std::size_t nr = 4;
    double snr_low_db = 5.0;
    double snr_high_db = 15.0;
    std::size_t time_slots = 128; // T: time slots per mini-batch of the dataset
    std::size_t num_batches = 100; // B: mini-batches collected into the dataset
    std::size_t steps = 0;         // optimizer steps; 0 means B
    std::size_t minibatch = 0;     // samples per step; 0 means one mini-batch worth (T * levels)
    bool supervise_goal_level = false; // also emit k = m samples
    std::vector<std::size_t> hidden = {128, 64, 32, 16};
    bool final_relu = true;
    double learning_rate = 1e-6;
    std::uint64_t seed = 1;
    std::size_t trace_every = 100; // steps between loss-trace entries

    std::size_t dimension() const noexcept { return 2 * nt; }
    std::size_t levels_per_slot() const noexcept { return supervise_goal_level ? dimension() : dimension() - 1; }
    std::size_t total_samples() const noexcept { return num_batches * time_slots * levels_per_slot(); }
    void validate() const;
};

// Scenes are drawn per time slot from stream (seed, slot index).
std::vector<TrainingSample> generate_dataset(const TrainConfig& cfg);

struct TrainResult {
    MlpModel model;
    std::vector<std::pair<std::uint64_t, double>> loss_trace; // (step, minibatch loss)
};

TrainResult train(const TrainConfig& cfg);
TrainResult train(const TrainConfig& cfg, std::span<const TrainingSample> dataset);

void write_loss_trace(const std::vector<std::pair<std::uint64_t, double>>& trace, std::ostream& os);

// Binary, little-endian: "HATSMLP1", u32 L+1, (L+1) x u32 sizes, then per
// layer W row-major and b as float64.
void save_model(const MlpModel& model, std::ostream& os);
void save_model(const MlpModel& model, const std::filesystem::path& path);
MlpModel load_model(std::istream& is);
MlpModel load_model(const std::filesystem::path& path);

} // namespace hats

#endif
