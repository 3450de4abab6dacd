/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The HATS Detector Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#ifndef HATS_SCENE_HPP
#define HATS_SCENE_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "hats/lattice.hpp"
#include "hats/rng.hpp"

namespace hats {

// Per-receive-antenna SNR = E|H_c x_c|^2 / E|w_c|^2 = Nt * rho * Es / N0 with
// QPSK Es = 2 and N0 = 2 (unit-variance real noise), hence rho = 10^(snr/10) / Nt.
double tap_variance_for_snr(double snr_db, std::size_t nt);

inline constexpr const char* kSnrCalibration = "rho=10^(snr_db/10)/Nt; noise var 1 per real component; QPSK Es=2";

struct Scene {
    ComplexScene complex;
    std::vector<std::uint8_t> bits; // one per real symbol, natural order [Re x_c; Im x_c]; 1 <-> +1
};

Scene sample_scene(std::size_t nt, std::size_t nr, double snr_db, RngStream& rng);

/// Transmitted real symbols in natural order.
Vector transmitted_symbols(const Scene& scene);

} // namespace hats

#endif
