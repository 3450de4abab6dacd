/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The HATS Detector Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#ifndef HATS_RNG_HPP
#define HATS_RNG_HPP

#include <cstddef>
#include <cstdint>
#include <random>

#include "hats/linalg.hpp"

namespace hats {

/**
 * A reproducible random stream identified by (seed, stream id).
 *
 * Distinct stream ids give statistically independent sequences, so parallel
 * trials can each own a stream without coordinating. A stream is meant for a
 * single consumer.
 */
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id);

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream_id() const noexcept { return stream_id_; }

    double normal();                       // N(0, 1)
    double uniform(double lo, double hi);  // [lo, hi)
    std::size_t index(std::size_t n);      // uniform on [0, n)
    bool bit();

    std::mt19937_64& engine() noexcept { return engine_; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

Vector sample_gaussian(RngStream& rng, std::size_t len);

} // namespace hats

#endif
