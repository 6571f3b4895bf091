#pragma once

#include <cstdint>

#include "ddsp/core.hpp"

namespace ddsp {

struct LossAndGrad {
  double loss = 0.0;
  GradientTrack grads;
};

// Multi-window STFT loss of synthesize(track, seed) against target, plus
// analytic partials w.r.t. every frame's P (12) and V (257). The noise
// realization and impulse positions are those of the forward pass; F0
// receives no gradient.
LossAndGrad loss_and_grad(const FeatureTrack& track, const AudioBuffer& target,
                          const VocoderConfig& config, std::uint64_t seed);

// Compares analytic gradients against central finite differences on
// `trials` random (frame, coordinate) picks across P and V; returns the
// max of |g_a - g_fd| / (|g_a| + |g_fd| + 1e-12).
double finite_diff_check(const FeatureTrack& track, const AudioBuffer& target,
                         const VocoderConfig& config, std::uint64_t seed,
                         double eps, int trials);

}  // namespace ddsp
