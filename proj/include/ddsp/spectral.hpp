#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ddsp/core.hpp"

namespace ddsp {

// Periodic Hann window: w[n] = 0.5 * (1 - cos(2*pi*n/size)).
// Shifted copies at hop size/2 sum to 1 (COLA).
Eigen::VectorXd hann_window(int size);

// Amplified logarithm: gain by gain_db, log above e, linear below,
// zero maps to zero.
double amp_log(double y, double gain_db = 72.0);

// Derivative of amp_log w.r.t. y. Piecewise: gain/e on the linear branch,
// 1/y on the log branch; continuous at the boundary.
double amp_log_deriv(double y, double gain_db = 72.0);

// Log-amplified magnitude STFT, frames x (fft_size/2 + 1).
// Frame t covers samples [t*hop, t*hop + fft_size) with zero padding past
// the end; frame count = ceil(len / hop). Window = periodic Hann of
// length fft_size.
Eigen::MatrixXd stft_log_mag(const AudioBuffer& audio, int fft_size,
                             int hop = 128, double gain_db = 72.0);

// Raw complex STFT frames (same framing/window as stft_log_mag), used by
// the loss gradient. Row t holds bins 0..fft_size/2 of frame t.
Eigen::MatrixXcd stft_complex(const AudioBuffer& audio, int fft_size,
                              int hop = 128);

struct SpectrogramSet {
  std::vector<int> fft_sizes;
  std::vector<Eigen::MatrixXd> mags;  // one matrix per FFT size
};

SpectrogramSet spectrogram_set(const AudioBuffer& audio,
                               const VocoderConfig& config);

}  // namespace ddsp
