#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace ddsp {

// All constants default to the synthesis layout used throughout:
// 24 kHz audio, 128-sample hop, 512-point synthesis FFT.
struct VocoderConfig {
  int sample_rate_hz = 24000;
  int frame_shift = 128;
  int fft_size = 512;
  int spectrum_bins = 257;  // fft_size / 2 + 1
  int noise_window_size = 256;
  int periodic_buffer_len = 640;  // fft_size + frame_shift
  std::vector<int> loss_fft_sizes = {512, 1024, 2048};
  std::vector<double> loss_weights_stft = {25.7, 51.3, 102.5};
  double gain_db = 72.0;
  double lambda_f0 = 50.0;
  double lambda_p = 30.0;
  double lambda_adv = 50.0;
  int periodicity_dims = 12;

  // Throws std::invalid_argument if any structural invariant is violated.
  void check() const;
};

struct FeatureFrame {
  double f0 = 0.0;    // Hz; 0 encodes a fully unvoiced frame
  Eigen::VectorXd p;  // periodicity_dims entries in [0, 1]
  Eigen::VectorXd v;  // spectrum_bins entries, natural-log filter magnitude
};

struct FeatureTrack {
  std::vector<FeatureFrame> frames;

  int frame_count() const { return static_cast<int>(frames.size()); }
};

struct AudioBuffer {
  Eigen::VectorXd samples;
  int sample_rate_hz = 24000;

  int length() const { return static_cast<int>(samples.size()); }
  double duration_seconds() const {
    return static_cast<double>(samples.size()) / sample_rate_hz;
  }
};

// Per-frame partials of a spectral loss w.r.t. the P and V features.
struct GradientTrack {
  std::vector<Eigen::VectorXd> d_p;  // periodicity_dims each
  std::vector<Eigen::VectorXd> d_v;  // spectrum_bins each

  int frame_count() const { return static_cast<int>(d_p.size()); }
};

struct Violation {
  int frame = -1;
  std::string field;
  std::string reason;
};

// Reports every invariant violation; empty result means the track is valid.
std::vector<Violation> validate_track(const FeatureTrack& track,
                                      const VocoderConfig& config);

}  // namespace ddsp
