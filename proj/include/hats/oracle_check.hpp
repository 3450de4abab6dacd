/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The HATS Detector Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#ifndef HATS_ORACLE_CHECK_HPP
#define HATS_ORACLE_CHECK_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "hats/lattice.hpp"

namespace hats {

struct InvariantResult {
    std::string name;
    std::size_t checked = 0;
    std::size_t violations = 0;
    std::size_t allowed_violations = 0;
    std::string first_failure;

    bool passed() const noexcept { return violations <= allowed_violations; }
};

/// Random QPSK problem of real dimension m (m even) at an SNR drawn from [0, 15] dB.
DetectionProblem random_problem(std::size_t m, std::uint64_t seed, std::uint64_t index);

/**
 * Runs the exhaustive-oracle invariant suite on `instances` random problems:
 * exactness of every exact search against brute force, bounded-memory
 * exactness, constant optimal f along the shortest path, consistency of h*,
 * the m+1 expansion limit under h*, and the QR distance identity.
 */
std::vector<InvariantResult> run_oracle_check(std::size_t m, std::size_t instances, std::uint64_t seed);

} // namespace hats

#endif
