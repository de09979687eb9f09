#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pinchloc/system_config.hpp"

namespace pinchloc {

/// N complex samples, one per antenna: either the noiseless model output
/// s(u) or a noisy observation r.
using SignalVector = std::vector<Complex>;

// Antenna indices are zero-based throughout the library; files and
// diagnostics use one-based numbering.

/// Euclidean distance from the ground user to antenna n. Always >= d.
double distance(const SystemConfig& cfg, const Position& u, std::size_t n);

/// exp(-(alpha + j beta) v_n): in-guide loss and phase from the feed to antenna n.
Complex waveguide_coefficient(const SystemConfig& cfg, std::size_t n);

/// Noiseless received sample of antenna n: gamma a_n / d_n * exp(-j 2 pi d_n / lambda) * s.
Complex model_sample(const SystemConfig& cfg, const Position& u, std::size_t n);

SignalVector model_signal(const SystemConfig& cfg, const Position& u);

/// model_signal plus circularly-symmetric complex Gaussian noise of total
/// variance sigma^2 per sample. Same (cfg, u, seed) gives the same bits.
SignalVector synthesize_observation(const SystemConfig& cfg, const Position& u, std::uint64_t seed);

/// ||r - s(u)||^2. Minimising this maximises the Gaussian log-likelihood.
double residual(const SystemConfig& cfg, std::span<const Complex> r, const Position& u);

}  // namespace pinchloc
