#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <vector>

#include "ddsp/core.hpp"

namespace ddsp {

// Per-frame synthesis state. Single-owner; not shared across threads.
struct SynthState {
  double running_phase = 0.0;       // impulse phase accumulator, cycles in [0,1)
  Eigen::VectorXd noise_buffer;     // sliding window, length fft_size
  std::mt19937_64 rng;

  SynthState(const VocoderConfig& config, std::uint64_t seed)
      : noise_buffer(Eigen::VectorXd::Zero(config.fft_size)), rng(seed) {}
};

// Uniform draw in [-1, 1] built from the top 53 bits of the generator
// output, so the noise stream is identical on every platform.
double uniform_pm1(std::mt19937_64& rng);

// Sparse interpolation matrix mapping 12 band-wise periodicity values to
// 257 linear-frequency bins. Band centers are equally spaced on the mel
// scale over [0, 12 kHz]; rows hold the two interpolation weights.
const Eigen::MatrixXd& periodicity_basis(const VocoderConfig& config);

// p12 in [0,1]^12 -> per-bin periodicity in [0,1]^257.
Eigen::VectorXd extrapolate_periodicity(const Eigen::VectorXd& p12,
                                        const VocoderConfig& config);

// Zero-phase response of the periodic filter exp(v)*p, circularly shifted
// to the buffer center by flipping the sign of every odd bin.
Eigen::VectorXd periodic_impulse_response(const Eigen::VectorXd& p257,
                                          const Eigen::VectorXd& v257,
                                          const VocoderConfig& config);

// One frame of the filtered impulse train (periodic_buffer_len samples).
// Advances state.running_phase by frame_shift * f0 / sample_rate mod 1.
Eigen::VectorXd render_periodic_frame(const FeatureFrame& frame,
                                      SynthState& state,
                                      const VocoderConfig& config);

// One frame of filtered noise (fft_size samples), windowed by the
// centered Hann. Shifts the noise buffer and draws frame_shift samples.
Eigen::VectorXd render_aperiodic_frame(const FeatureFrame& frame,
                                       SynthState& state,
                                       const VocoderConfig& config);

// Forward-pass record needed to backpropagate through the synthesis.
struct FrameTrace {
  std::vector<int> impulse_offsets;   // within [0, frame_shift)
  double impulse_scale = 0.0;         // 1/sqrt(f0), 0 when unvoiced
  Eigen::VectorXcd noise_spectrum;    // bins 0..fft_size/2 of the raw buffer
  Eigen::VectorXd p257;
};

struct SynthTrace {
  std::vector<FrameTrace> frames;
};

struct SynthPaths {
  AudioBuffer total;
  AudioBuffer periodic;
  AudioBuffer aperiodic;
};

// Whole-utterance synthesis: overlap-add of both excitation paths at the
// frame hop, trimmed by the 256-sample center-alignment latency so the
// output has exactly frames * frame_shift samples. Deterministic for a
// fixed (track, seed).
AudioBuffer synthesize(const FeatureTrack& track, const VocoderConfig& config,
                       std::uint64_t seed);

// As synthesize(), also returning the two paths separately
// (total == periodic + aperiodic, sample-exact).
SynthPaths synthesize_paths(const FeatureTrack& track,
                            const VocoderConfig& config, std::uint64_t seed);

// As synthesize(), recording the forward-pass trace for the gradient.
AudioBuffer synthesize_traced(const FeatureTrack& track,
                              const VocoderConfig& config, std::uint64_t seed,
                              SynthTrace* trace);

}  // namespace ddsp
