/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The HATS Detector Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include <algorithm>
#include <cmath>
#include <string>

#include "hats/neural.hpp"

namespace hats {

MlpModel::MlpModel(std::vector<std::size_t> sizes) : layer_sizes(std::move(sizes))
{
    if (layer_sizes.size() < 2)
        throw Error(ErrorCode::InvalidConfig, "a network needs at least an input and an output layer");
    for (std::size_t n : layer_sizes)
        if (n == 0)
            throw Error(ErrorCode::InvalidConfig, "layer sizes must be positive");
    if (layer_sizes.back() != 1)
        throw Error(ErrorCode::InvalidConfig, "the output layer must have exactly one neuron");
    for (std::size_t l = 1; l < layer_sizes.size(); ++l) {
        weights.emplace_back(layer_sizes[l], layer_sizes[l - 1]);
        biases.emplace_back(layer_sizes[l], 0.0);
    }
}

std::size_t MlpModel::parameter_count() const
{
    std::size_t n = 0;
    for (std::size_t l = 0; l < weights.size(); ++l)
        n += weights[l].data().size() + biases[l].size();
    return n;
}

MlpModel init_model(std::vector<std::size_t> sizes, RngStream& rng)
{
    MlpModel model(std::move(sizes));
    for (std::size_t l = 0; l < model.num_layers(); ++l) {
        const double bound = std::sqrt(6.0 / static_cast<double>(model.layer_sizes[l] + model.layer_sizes[l + 1]));
        for (double& w : model.weights[l].data())
            w = rng.uniform(-bound, bound);
    }
    return model;
}

std::vector<std::size_t> default_layer_sizes(std::size_t m) { return {m, 128, 64, 32, 16, 1}; }

Vector residual_input(const DetectionProblem& p, const Psv& psv)
{
    Vector out(p.dim());
    for (std::size_t i = 1; i <= p.dim(); ++i)
        out[i - 1] = p.level_residual(i, psv);
    return out;
}

namespace {

void check_input(const MlpModel& model, std::size_t len)
{
    if (model.layer_sizes.empty() || model.input_size() != len)
        throw Error(ErrorCode::DimensionMismatch, "network expects " +
                                                      std::to_string(model.layer_sizes.empty() ? 0 : model.input_size()) +
                                                      " inputs, got " + std::to_string(len));
}

// pre = W a + b for one layer.
void affine(const Matrix& w, const Vector& b, std::span<const double> a, Vector& pre)
{
    pre.resize(w.rows());
    for (std::size_t r = 0; r < w.rows(); ++r)
        pre[r] = b[r] + dot(w.row(r), a);
}

bool rectified(const MlpModel& model, std::size_t layer_index)
{
    return model.final_relu || layer_index + 1 < model.num_layers();
}

} // namespace

double forward(const MlpModel& model, std::span<const double> input)
{
    check_input(model, input.size());
    Vector act(input.begin(), input.end());
    Vector pre;
    for (std::size_t l = 0; l < model.num_layers(); ++l) {
        affine(model.weights[l], model.biases[l], act, pre);
        if (rectified(model, l))
            for (double& v : pre)
                v = std::max(0.0, v);
        act.swap(pre);
    }
    return act[0];
}

double heuristic_eval(const MlpModel& model, const DetectionProblem& p, const Psv& psv)
{
    check_input(model, p.dim());
    if (psv.level() == p.dim())
        return 0.0;
    return forward(model, residual_input(p, psv));
}

MlpHeuristic::MlpHeuristic(MlpModel model) : model_(std::move(model)) {}

double MlpHeuristic::evaluate(const DetectionProblem& p, const Psv& psv) const
{
    return heuristic_eval(model_, p, psv);
}

double l2_loss(std::span<const double> f_pred, std::span<const double> target)
{
    if (f_pred.empty())
        throw Error(ErrorCode::EmptyBatch, "l2_loss of an empty batch");
    if (f_pred.size() != target.size())
        throw Error(ErrorCode::DimensionMismatch, "l2_loss: prediction and target counts differ");
    double s = 0.0;
    for (std::size_t i = 0; i < f_pred.size(); ++i) {
        const double d = target[i] - f_pred[i];
        s += d * d;
    }
    return s / static_cast<double>(f_pred.size());
}

Gradients Gradients::zeros_like(const MlpModel& model)
{
    Gradients g;
    for (std::size_t l = 0; l < model.num_layers(); ++l) {
        g.weights.emplace_back(model.weights[l].rows(), model.weights[l].cols());
        g.biases.emplace_back(model.biases[l].size(), 0.0);
    }
    return g;
}

namespace {

double sample_f(const MlpModel& model, const TrainingSample& s, Vector* input_out = nullptr)
{
    const DetectionProblem& p = *s.problem;
    const Psv node = s.label_path.prefix(s.level);
    Vector input = residual_input(p, node);
    const double f = path_cost(p, node) + forward(model, input);
    if (input_out)
        *input_out = std::move(input);
    return f;
}

} // namespace

double batch_loss(const MlpModel& model, std::span<const TrainingSample> batch)
{
    if (batch.empty())
        throw Error(ErrorCode::EmptyBatch, "batch_loss of an empty batch");
    Vector pred(batch.size()), target(batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i) {
        pred[i] = sample_f(model, batch[i]);
        target[i] = batch[i].target;
    }
    return l2_loss(pred, target);
}

Gradients backward(const MlpModel& model, std::span<const TrainingSample> batch, double* loss_out)
{
    if (batch.empty())
        throw Error(ErrorCode::EmptyBatch, "backward on an empty batch");
    const std::size_t layers = model.num_layers();
    Gradients grads = Gradients::zeros_like(model);
    const double inv_n = 1.0 / static_cast<double>(batch.size());

    std::vector<Vector> acts(layers + 1); // acts[0] = input, acts[l] = output of layer l
    std::vector<Vector> pres(layers);
    Vector delta, prev_delta;
    double loss = 0.0;

    for (const TrainingSample& s : batch) {
        const DetectionProblem& p = *s.problem;
        check_input(model, p.dim());
        const Psv node = s.label_path.prefix(s.level);
        acts[0] = residual_input(p, node);
        for (std::size_t l = 0; l < layers; ++l) {
            affine(model.weights[l], model.biases[l], acts[l], pres[l]);
            acts[l + 1] = pres[l];
            if (rectified(model, l))
                for (double& v : acts[l + 1])
                    v = std::max(0.0, v);
        }
        const double residual = s.target - (path_cost(p, node) + acts[layers][0]);
        loss += residual * residual;

        delta.assign(1, -2.0 * residual * inv_n);
        for (std::size_t l = layers; l-- > 0;) {
            if (rectified(model, l))
                for (std::size_t r = 0; r < delta.size(); ++r)
                    if (!(pres[l][r] > 0.0))
                        delta[r] = 0.0;
            Matrix& gw = grads.weights[l];
            Vector& gb = grads.biases[l];
            const Vector& a = acts[l];
            for (std::size_t r = 0; r < delta.size(); ++r) {
                const double d = delta[r];
                gb[r] += d;
                if (d == 0.0)
                    continue;
                auto row = gw.row(r);
                for (std::size_t c = 0; c < a.size(); ++c)
                    row[c] += d * a[c];
            }
            if (l == 0)
                break;
            prev_delta.assign(a.size(), 0.0);
            const Matrix& w = model.weights[l];
            for (std::size_t r = 0; r < delta.size(); ++r) {
                const double d = delta[r];
                if (d == 0.0)
                    continue;
                const auto row = w.row(r);
                for (std::size_t c = 0; c < a.size(); ++c)
                    prev_delta[c] += row[c] * d;
            }
            delta.swap(prev_delta);
        }
    }
    if (loss_out)
        *loss_out = loss * inv_n;
    return grads;
}

AdamState AdamState::for_model(const MlpModel& model, double learning_rate)
{
    AdamState s;
    s.first = Gradients::zeros_like(model);
    s.second = Gradients::zeros_like(model);
    s.learning_rate = learning_rate;
    return s;
}

namespace {

void adam_update(std::span<double> theta, std::span<const double> g, std::span<double> m1, std::span<double> m2,
                 double lr_t, double beta1, double beta2, double eps, double bias2)
{
    for (std::size_t i = 0; i < theta.size(); ++i) {
        m1[i] = beta1 * m1[i] + (1.0 - beta1) * g[i];
        m2[i] = beta2 * m2[i] + (1.0 - beta2) * g[i] * g[i];
        theta[i] -= lr_t * m1[i] / (std::sqrt(m2[i] / bias2) + eps);
    }
}

} // namespace

void adam_step(MlpModel& model, const Gradients& grads, AdamState& state)
{
    const std::size_t layers = model.num_layers();
    auto shapes_agree = [&](const Gradients& g) {
        if (g.weights.size() != layers || g.biases.size() != layers)
            return false;
        for (std::size_t l = 0; l < layers; ++l)
            if (g.weights[l].rows() != model.weights[l].rows() || g.weights[l].cols() != model.weights[l].cols() ||
                g.biases[l].size() != model.biases[l].size())
                return false;
        return true;
    };
    if (!shapes_agree(grads) || !shapes_agree(state.first) || !shapes_agree(state.second))
        throw Error(ErrorCode::ShapeMismatch, "adam_step: gradient or moment shapes differ from the model");

    ++state.step;
    const double t = static_cast<double>(state.step);
    const double bias1 = 1.0 - std::pow(state.beta1, t);
    const double bias2 = 1.0 - std::pow(state.beta2, t);
    const double lr_t = state.learning_rate / bias1;
    for (std::size_t l = 0; l < layers; ++l) {
        adam_update(model.weights[l].data(), grads.weights[l].data(), state.first.weights[l].data(),
                    state.second.weights[l].data(), lr_t, state.beta1, state.beta2, state.epsilon, bias2);
        adam_update(model.biases[l], grads.biases[l], state.first.biases[l], state.second.biases[l], lr_t,
                    state.beta1, state.beta2, state.epsilon, bias2);
    }
}

} // namespace hats
