/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The HATS Detector Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <sstream>

#include "hats/error.hpp"
#include "hats/neural.hpp"
#include "hats/oracle_check.hpp"
#include "hats/sweep.hpp"
#include "support/fd_oracle.hpp"

using namespace hats;

namespace {

ErrorCode code_of(auto&& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no hats::Error thrown");
    return ErrorCode::InvalidConfig;
}

std::string saved_bytes(const MlpModel& m)
{
    std::ostringstream os(std::ios::binary);
    save_model(m, os);
    return os.str();
}

MlpModel load_bytes(const std::string& bytes)
{
    std::istringstream is(bytes, std::ios::binary);
    return load_model(is);
}

} // namespace

TEST_CASE("residual_input pads the undecided levels with zeros")
{
    const auto p = random_problem(6, 1, 0);
    const Vector root = residual_input(p, Psv());
    for (std::size_t k = 1; k <= 6; ++k)
        CHECK(root[k - 1] == p.z(k));
    const Psv goal(std::vector<double>{1, -1, 1, 1, -1, -1});
    CHECK(squared_norm(residual_input(p, goal)) == doctest::Approx(path_cost(p, goal)).epsilon(1e-10));
    const Psv mid = goal.prefix(3);
    const Vector r = residual_input(p, mid);
    for (std::size_t k = 1; k <= 6; ++k)
        CHECK(r[k - 1] == doctest::Approx(p.level_residual(k, mid)));
}

TEST_CASE("forward applies the rectifier on every layer")
{
    MlpModel zero({3, 4, 1});
    CHECK(forward(zero, Vector{1, 2, 3}) == 0.0);
    MlpModel kill({1, 1});
    kill.weights[0](0, 0) = -1.0;
    CHECK(forward(kill, Vector{3.0}) == 0.0);
    kill.final_relu = false;
    CHECK(forward(kill, Vector{3.0}) == -3.0);
    CHECK(code_of([&] { forward(zero, Vector{1, 2}); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("forward is deterministic and finite on random inputs")
{
    RngStream rng(3, 0);
    const MlpModel m = init_model({8, 16, 8, 1}, rng);
    for (int i = 0; i < 10000; ++i) {
        const Vector x = sample_gaussian(rng, 8);
        const double a = forward(m, x);
        CHECK(std::isfinite(a));
        CHECK(a == forward(m, x));
    }
}

TEST_CASE("init_model bounds and layout")
{
    RngStream rng(4, 0);
    const MlpModel m = init_model(default_layer_sizes(8), rng);
    CHECK(m.layer_sizes == std::vector<std::size_t>{8, 128, 64, 32, 16, 1});
    for (std::size_t l = 0; l < m.num_layers(); ++l) {
        const double bound = std::sqrt(6.0 / static_cast<double>(m.layer_sizes[l] + m.layer_sizes[l + 1]));
        CHECK(m.weights[l].rows() == m.layer_sizes[l + 1]);
        CHECK(m.weights[l].cols() == m.layer_sizes[l]);
        for (double w : m.weights[l].data())
            CHECK(std::abs(w) <= bound);
        for (double b : m.biases[l])
            CHECK(b == 0.0);
    }
    CHECK(m.parameter_count() == 8 * 128 + 128 + 128 * 64 + 64 + 64 * 32 + 32 + 32 * 16 + 16 + 16 + 1);
    CHECK(code_of([] { MlpModel({4, 2}); }) == ErrorCode::InvalidConfig);
}

TEST_CASE("heuristic_eval is zero at goal level and recomposes the f-cost")
{
    RngStream rng(5, 0);
    const MlpModel m = init_model({6, 8, 1}, rng);
    const MlpHeuristic h(m);
    const auto p = random_problem(6, 2, 0);
    const Psv goal(std::vector<double>{1, 1, -1, 1, -1, 1});
    CHECK(heuristic_eval(m, p, goal) == 0.0);
    CHECK(h.evaluate(p, goal) == 0.0);
    for (std::size_t k = 0; k < 6; ++k) {
        const Psv node = goal.prefix(k);
        CHECK(h.evaluate(p, node) == forward(m, residual_input(p, node)));
    }
    CHECK(h.layer_sizes() == m.layer_sizes);
    const auto p8 = random_problem(8, 2, 0);
    CHECK(code_of([&] { heuristic_eval(m, p8, Psv()); }) == ErrorCode::DimensionMismatch);
    CHECK(heuristic_eval(MlpModel({6, 3, 1}), p, Psv()) == 0.0);
}

TEST_CASE("l2_loss")
{
    CHECK(l2_loss(Vector{3.0}, Vector{5.0}) == 4.0);
    CHECK(l2_loss(Vector{1, 2, 3}, Vector{1, 2, 3}) == 0.0);
    CHECK(l2_loss(Vector{1, 2, 4}, Vector{2, 2, 2}) == l2_loss(Vector{4, 1, 2}, Vector{2, 2, 2}));
    CHECK(code_of([] { l2_loss(Vector{}, Vector{}); }) == ErrorCode::EmptyBatch);
    CHECK(code_of([] { l2_loss(Vector{1}, Vector{}); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("backward matches central finite differences")
{
    for (std::uint64_t s = 0; s < 5; ++s) {
        RngStream rng(10 + s, 0);
        const MlpModel m = init_model({8, 16, 8, 1}, rng);
        const auto batch = testing::random_samples(8, 3, 40 + s);
        double loss = 0;
        const Gradients g = backward(m, batch, &loss);
        CHECK(loss == doctest::Approx(batch_loss(m, batch)).epsilon(1e-12));
        const auto cmp = testing::compare_gradients(g, testing::finite_difference_gradients(m, batch, 1e-6), 1e-5, 1e-7);
        CHECK(cmp.mismatches == 0);
    }
}

TEST_CASE("backward without the final rectifier also matches finite differences")
{
    RngStream rng(77, 0);
    MlpModel m = init_model({8, 16, 8, 1}, rng);
    m.final_relu = false;
    const auto batch = testing::random_samples(8, 3, 3);
    const auto cmp = testing::compare_gradients(backward(m, batch), testing::finite_difference_gradients(m, batch, 1e-6),
                                                1e-5, 1e-7);
    CHECK(cmp.mismatches == 0);
}

TEST_CASE("batch gradient is the mean of per-sample gradients")
{
    RngStream rng(8, 0);
    const MlpModel m = init_model({8, 16, 8, 1}, rng);
    const auto batch = testing::random_samples(8, 2, 9);
    const Gradients whole = backward(m, batch);
    Gradients sum = Gradients::zeros_like(m);
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const Gradients one = backward(m, std::span(batch).subspan(i, 1));
        for (std::size_t l = 0; l < m.num_layers(); ++l)
            for (std::size_t j = 0; j < one.weights[l].data().size(); ++j)
                sum.weights[l].data()[j] += one.weights[l].data()[j] / static_cast<double>(batch.size());
    }
    for (std::size_t l = 0; l < m.num_layers(); ++l)
        for (std::size_t j = 0; j < whole.weights[l].data().size(); ++j)
            CHECK(whole.weights[l].data()[j] == doctest::Approx(sum.weights[l].data()[j]).epsilon(1e-9).scale(1e-9));
}

TEST_CASE("zero-loss batch gives zero gradients")
{
    const MlpModel m({8, 4, 1}); // outputs 0 everywhere
    auto batch = testing::random_samples(8, 1, 2);
    for (auto& s : batch)
        s.target = path_cost(*s.problem, s.label_path.prefix(s.level));
    double loss = -1;
    const Gradients g = backward(m, batch, &loss);
    CHECK(loss == doctest::Approx(0.0).scale(1.0));
    for (const auto& w : g.weights)
        for (double v : w.data())
            CHECK(v == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("adam_step")
{
    RngStream rng(9, 0);
    MlpModel m = init_model({4, 3, 1}, rng);
    const MlpModel before = m;
    AdamState st = AdamState::for_model(m, 1e-3);
    adam_step(m, Gradients::zeros_like(m), st);
    CHECK(m == before);
    CHECK(st.step == 1);

    Gradients constant = Gradients::zeros_like(m);
    for (auto& w : constant.weights)
        std::fill(w.data().begin(), w.data().end(), 0.3);
    for (auto& b : constant.biases)
        std::fill(b.begin(), b.end(), -2.0);
    MlpModel prev = m;
    for (int i = 0; i < 500; ++i) {
        prev = m;
        adam_step(m, constant, st);
    }
    CHECK(m.weights[0](0, 0) - prev.weights[0](0, 0) == doctest::Approx(-1e-3).epsilon(1e-6));
    CHECK(m.biases[0][0] - prev.biases[0][0] == doctest::Approx(1e-3).epsilon(1e-6));

    MlpModel a = before, b = before;
    AdamState sa = AdamState::for_model(a), sb = AdamState::for_model(b);
    for (int i = 0; i < 10; ++i) {
        adam_step(a, constant, sa);
        adam_step(b, constant, sb);
    }
    CHECK(a == b);
    CHECK(sa.learning_rate == 1e-6);

    const MlpModel other({4, 2, 1});
    CHECK(code_of([&] { adam_step(m, Gradients::zeros_like(other), st); }) == ErrorCode::ShapeMismatch);
}

TEST_CASE("generate_dataset emits one sample per supervised level with exact targets")
{
    TrainConfig cfg;
    cfg.nt = cfg.nr = 4;
    cfg.time_slots = 3;
    cfg.num_batches = 2;
    cfg.seed = 5;
    const auto data = generate_dataset(cfg);
    CHECK(data.size() == 2 * 3 * 7);
    CHECK(cfg.total_samples() == data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto& s = data[i];
        CHECK(s.level == 1 + i % 7);
        CHECK(s.target >= 0.0);
        CHECK(s.target == doctest::Approx(path_cost(*s.problem, s.label_path)).epsilon(1e-10));
    }
    const auto again = generate_dataset(cfg);
    for (std::size_t i = 0; i < data.size(); ++i)
        CHECK(again[i].target == data[i].target);

    cfg.supervise_goal_level = true;
    CHECK(generate_dataset(cfg).size() == 2 * 3 * 8);
}

TEST_CASE("train with zero steps returns the initialised model and is reproducible otherwise")
{
    TrainConfig cfg;
    cfg.nt = cfg.nr = 2;
    cfg.hidden = {8, 4};
    cfg.time_slots = 4;
    cfg.num_batches = 3;
    cfg.learning_rate = 1e-3;
    cfg.seed = 12;
    const auto dataset = generate_dataset(cfg);
    TrainConfig none = cfg;
    none.num_batches = 0;
    RngStream init_rng(cfg.seed, std::uint64_t{1} << 62);
    CHECK(train(none, {}).model == init_model({4, 8, 4, 1}, init_rng));
    const auto a = train(cfg, dataset);
    const auto b = train(cfg, dataset);
    CHECK(a.model == b.model);
    CHECK_FALSE(a.loss_trace.empty());
}

TEST_CASE("training reduces the loss on a small problem")
{
    TrainConfig cfg;
    cfg.nt = cfg.nr = 2;
    cfg.hidden = {32, 16};
    cfg.time_slots = 64;
    cfg.num_batches = 40;
    cfg.steps = 1500;
    cfg.minibatch = 64;
    cfg.learning_rate = 1e-3;
    cfg.trace_every = 50;
    const auto data = generate_dataset(cfg);
    const auto res = train(cfg, data);
    RngStream init_rng(cfg.seed, std::uint64_t{1} << 62);
    const MlpModel init = init_model({4, 32, 16, 1}, init_rng);
    CHECK(batch_loss(res.model, data) < 0.7 * batch_loss(init, data));
}

TEST_CASE("model files round-trip bit-exactly")
{
    RngStream rng(6, 0);
    const MlpModel m = init_model({8, 16, 8, 1}, rng);
    const std::string bytes = saved_bytes(m);
    CHECK(bytes.substr(0, 8) == "HATSMLP1");
    CHECK(bytes.size() == 8 + 4 + 4 * 4 + 8 * m.parameter_count());
    std::uint32_t count = 0;
    std::memcpy(&count, bytes.data() + 8, 4);
    CHECK(count == 4);
    CHECK(load_bytes(bytes) == m);
}

TEST_CASE("corrupt model files are rejected with offsets")
{
    RngStream rng(6, 1);
    const std::string good = saved_bytes(init_model({4, 3, 1}, rng));

    std::string bad_magic = good;
    bad_magic[2] = 'X';
    try {
        load_bytes(bad_magic);
        FAIL("expected FormatViolation");
    } catch (const FormatViolation& e) {
        CHECK(e.offset() == 0);
    }
    try {
        load_bytes(good.substr(0, good.size() - 3));
        FAIL("expected FormatViolation");
    } catch (const FormatViolation& e) {
        CHECK(e.offset() > 8);
    }
    CHECK(code_of([&] { load_bytes(good + "x"); }) == ErrorCode::SizeMismatch);

    std::string wide_output = good;
    wide_output[8 + 4 + 8] = 2; // last layer size
    CHECK_THROWS_AS(load_bytes(wide_output), Error);
    CHECK_THROWS_AS(load_bytes(""), FormatViolation);
}

TEST_CASE("8x8 desk-scale training improves the fit and the search")
{
    TrainConfig cfg;
    cfg.nt = cfg.nr = 8;
    cfg.time_slots = 128;
    cfg.num_batches = 105;
    cfg.steps = 3000;
    cfg.minibatch = 128;
    cfg.learning_rate = 1e-4;
    cfg.seed = 31;
    REQUIRE(cfg.total_samples() >= 200000);
    const auto res = train(cfg);

    const auto& trace = res.loss_trace;
    REQUIRE(trace.size() >= 10);
    double head = 0, tail = 0;
    for (std::size_t i = 0; i < 5; ++i) {
        head += trace[i].second;
        tail += trace[trace.size() - 1 - i].second;
    }
    CHECK(tail < head);

    TrainConfig held_out = cfg;
    held_out.seed = 32;
    held_out.num_batches = 4;
    const auto data = generate_dataset(held_out);
    RngStream init_rng(cfg.seed, std::uint64_t{1} << 62);
    const MlpModel untrained = init_model(default_layer_sizes(16), init_rng);
    auto mean_abs_error = [&](const MlpModel& m) {
        double s = 0;
        for (const auto& x : data) {
            const Psv node = x.label_path.prefix(x.level);
            s += std::abs(path_cost(*x.problem, node) + heuristic_eval(m, *x.problem, node) - x.target);
        }
        return s / static_cast<double>(data.size());
    };
    CHECK(mean_abs_error(res.model) * 2 < mean_abs_error(untrained));

    SweepConfig sweep;
    sweep.nt = sweep.nr = 8;
    sweep.snr_db = {15.0};
    sweep.trials = 500;
    sweep.seed = 33;
    sweep.algorithms = parse_algorithm_list("astar-zero,hats:128", kUnboundedMemory);
    TrialParams params;
    params.heuristic = std::make_shared<MlpHeuristic>(res.model);
    const auto rep = sweep_complexity(sweep, params, nullptr);
    CHECK(rep.row(15.0, "hats(128)").mean_visited < rep.row(15.0, "astar-zero").mean_visited);
}
