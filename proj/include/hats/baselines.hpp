/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The HATS Detector Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#ifndef HATS_BASELINES_HPP
#define HATS_BASELINES_HPP

#include <span>

#include "hats/search.hpp"

namespace hats {

struct MmseConfig {
    double sigma2 = 1.0; // noise variance per real component
};

/// Linear MMSE estimate rounded to the alphabet, as a goal PSV.
Psv mmse_detect(std::span<const double> y, const Matrix& h, const MmseConfig& cfg, const Alphabet& alphabet);

/// Successive per-level rounding from level 1 up.
Psv babai_point(const DetectionProblem& p);

/**
 * Schnorr-Euchner sphere decoder.
 *
 * Depth-first over levels 1..m, children in ascending branch cost. The
 * incumbent starts at the Babai point and the squared radius shrinks to every
 * improving leaf. Every child whose cost is computed counts as visited.
 */
SearchOutcome sphere_decode(const DetectionProblem& p);

} // namespace hats

#endif
