#include "ddsp/spectral.hpp"

#include <cmath>
#include <stdexcept>

#include "ddsp/fft.hpp"

namespace ddsp {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kE = 2.71828182845904523536;
}  // namespace

Eigen::VectorXd hann_window(int size) {
  if (size < 2 || size % 2 != 0)
    throw std::invalid_argument("hann_window: size must be even and >= 2");
  Eigen::VectorXd w(size);
  for (int n = 0; n < size; ++n)
    w[n] = 0.5 * (1.0 - std::cos(2.0 * kPi * n / size));
  return w;
}

double amp_log(double y, double gain_db) {
  if (y < 0.0) throw std::invalid_argument("amp_log: negative input");
  const double gain = std::pow(10.0, gain_db / 20.0);
  const double a = y * gain;
  return a >= kE ? std::log(a) : a / kE;
}

double amp_log_deriv(double y, double gain_db) {
  if (y < 0.0) throw std::invalid_argument("amp_log_deriv: negative input");
  const double gain = std::pow(10.0, gain_db / 20.0);
  return y * gain >= kE ? 1.0 / y : gain / kE;
}

Eigen::MatrixXcd stft_complex(const AudioBuffer& audio, int fft_size,
                              int hop) {
  if (hop <= 0) throw std::invalid_argument("stft: hop must be positive");
  if (fft_size < 2 || (fft_size & (fft_size - 1)) != 0)
    throw std::invalid_argument("stft: fft_size must be a power of two");
  const int len = audio.length();
  const int frames = (len + hop - 1) / hop;
  const int bins = fft_size / 2 + 1;
  const Eigen::VectorXd window = hann_window(fft_size);
  Eigen::MatrixXcd out(frames, bins);
  Eigen::VectorXd frame(fft_size);
  for (int t = 0; t < frames; ++t) {
    const int start = t * hop;
    for (int n = 0; n < fft_size; ++n) {
      const int idx = start + n;
      frame[n] = idx < len ? window[n] * audio.samples[idx] : 0.0;
    }
    out.row(t) = fft::rfft(frame).transpose();
  }
  return out;
}

Eigen::MatrixXd stft_log_mag(const AudioBuffer& audio, int fft_size, int hop,
                             double gain_db) {
  const Eigen::MatrixXcd spec = stft_complex(audio, fft_size, hop);
  Eigen::MatrixXd out(spec.rows(), spec.cols());
  for (int t = 0; t < spec.rows(); ++t)
    for (int k = 0; k < spec.cols(); ++k)
      out(t, k) = amp_log(std::abs(spec(t, k)), gain_db);
  return out;
}

SpectrogramSet spectrogram_set(const AudioBuffer& audio,
                               const VocoderConfig& config) {
  SpectrogramSet set;
  set.fft_sizes = config.loss_fft_sizes;
  for (int c : config.loss_fft_sizes)
    set.mags.push_back(
        stft_log_mag(audio, c, config.frame_shift, config.gain_db));
  return set;
}

}  // namespace ddsp
