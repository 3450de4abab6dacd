/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The HATS Detector Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "hats/rng.hpp"

namespace hats {

namespace {

std::seed_seq make_seed_seq(std::uint64_t seed, std::uint64_t stream_id)
{
    // The 0x48415453 word ("HATS") keeps stream 0 of seed 0 away from the
    // all-zero seed sequence.
    return std::seed_seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                         static_cast<std::uint32_t>(stream_id),
                         static_cast<std::uint32_t>(stream_id >> 32), std::uint32_t{0x48415453}};
}

} // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id)
{
    auto seq = make_seed_seq(seed, stream_id);
    engine_.seed(seq);
}

double RngStream::normal() { return normal_(engine_); }

double RngStream::uniform(double lo, double hi)
{
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
}

std::size_t RngStream::index(std::size_t n)
{
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
}

bool RngStream::bit() { return (engine_() >> 63) != 0; }

Vector sample_gaussian(RngStream& rng, std::size_t len)
{
    Vector v(len);
    for (auto& x : v)
        x = rng.normal();
    return v;
}

} // namespace hats
