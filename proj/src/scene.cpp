/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The HATS Detector Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "hats/scene.hpp"

#include <cmath>
#include <string>

namespace hats {

double tap_variance_for_snr(double snr_db, std::size_t nt)
{
    return std::pow(10.0, snr_db / 10.0) / static_cast<double>(nt);
}

Scene sample_scene(std::size_t nt, std::size_t nr, double snr_db, RngStream& rng)
{
    if (nt == 0 || nr < nt)
        throw Error(ErrorCode::InvalidConfig,
                    "need Nr >= Nt >= 1, got Nt=" + std::to_string(nt) + " Nr=" + std::to_string(nr));
    Scene scene;
    ComplexScene& cs = scene.complex;
    cs.rho = tap_variance_for_snr(snr_db, nt);

    scene.bits.resize(2 * nt);
    for (auto& b : scene.bits)
        b = rng.bit() ? 1 : 0;
    cs.xc.resize(nt);
    for (std::size_t i = 0; i < nt; ++i)
        cs.xc[i] = Complex(scene.bits[i] ? 1.0 : -1.0, scene.bits[nt + i] ? 1.0 : -1.0);

    const double tap_sd = std::sqrt(cs.rho / 2.0);
    cs.hc = ComplexMatrix(nr, nt);
    for (auto& h : cs.hc.data) {
        const double re = rng.normal();
        const double im = rng.normal();
        h = Complex(tap_sd * re, tap_sd * im);
    }

    cs.wc.resize(nr);
    for (auto& w : cs.wc) {
        const double re = rng.normal();
        const double im = rng.normal();
        w = Complex(re, im);
    }

    cs.yc = complex_mat_vec(cs.hc, cs.xc);
    for (std::size_t i = 0; i < nr; ++i)
        cs.yc[i] += cs.wc[i];
    return scene;
}

Vector transmitted_symbols(const Scene& scene)
{
    Vector x(scene.bits.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        x[i] = scene.bits[i] ? 1.0 : -1.0;
    return x;
}

} // namespace hats
