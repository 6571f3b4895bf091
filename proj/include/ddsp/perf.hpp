#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ddsp/core.hpp"

namespace ddsp {

// Analytic per-frame FLOP accounting for the synthesis path.
struct FlopsReport {
  double fft_periodic_inverse = 0.0;
  double fft_noise_forward = 0.0;
  double fft_noise_inverse = 0.0;
  double spectral_products = 0.0;
  double filter_exp = 0.0;
  double extrapolation = 0.0;
  double window = 0.0;
  double overlap_add = 0.0;
  double per_frame_total = 0.0;
  double frames_per_second = 0.0;
  double mflops_total = 0.0;  // per second of audio
  std::string conventions;

  std::string to_key_value() const;
};

// Counting rules: an N-point real FFT/iFFT costs 5*N*log2(N), a complex
// multiply 6 per bin, a real multiply-add 2, exp() 1 per bin.
FlopsReport count_flops(const VocoderConfig& config);

struct RtfStats {
  double median = 0.0;
  double p95 = 0.0;
  std::vector<double> samples;
};

// Wall-clock real-time factor of synthesize() for the given track,
// single-threaded, one warm-up run excluded.
RtfStats bench_rtf(const FeatureTrack& track, const VocoderConfig& config,
                   std::uint64_t seed, int repeats);

}  // namespace ddsp
