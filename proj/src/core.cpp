#include "ddsp/core.hpp"

#include <cmath>
#include <stdexcept>

namespace ddsp {

void VocoderConfig::check() const {
  if (spectrum_bins != fft_size / 2 + 1)
    throw std::invalid_argument("spectrum_bins must equal fft_size/2 + 1");
  if (frame_shift <= 0 || fft_size % frame_shift != 0)
    throw std::invalid_argument("frame_shift must divide fft_size");
  if (loss_fft_sizes.size() != loss_weights_stft.size())
    throw std::invalid_argument("loss_fft_sizes/loss_weights_stft length mismatch");
  for (double w : loss_weights_stft)
    if (!(w > 0.0)) throw std::invalid_argument("loss weights must be positive");
  if (!(lambda_f0 > 0.0) || !(lambda_p > 0.0) || !(lambda_adv > 0.0))
    throw std::invalid_argument("loss weights must be positive");
  if (periodicity_dims <= 0)
    throw std::invalid_argument("periodicity_dims must be positive");
}

std::vector<Violation> validate_track(const FeatureTrack& track,
                                      const VocoderConfig& config) {
  std::vector<Violation> out;
  const double nyquist = 0.5 * config.sample_rate_hz;
  for (int t = 0; t < track.frame_count(); ++t) {
    const FeatureFrame& f = track.frames[t];
    if (f.p.size() != config.periodicity_dims) {
      out.push_back({t, "p", "wrong dimension"});
    } else {
      for (int j = 0; j < f.p.size(); ++j) {
        if (!(f.p[j] >= 0.0 && f.p[j] <= 1.0)) {
          out.push_back({t, "p", "out of range [0,1]"});
          break;
        }
      }
    }
    if (f.v.size() != config.spectrum_bins) {
      out.push_back({t, "v", "wrong dimension"});
    } else if (!f.v.allFinite()) {
      out.push_back({t, "v", "non-finite entry"});
    }
    if (!(f.f0 >= 0.0)) {
      out.push_back({t, "f0", "negative"});
    } else if (!(f.f0 < nyquist)) {
      out.push_back({t, "f0", "at or above Nyquist"});
    }
  }
  return out;
}

}  // namespace ddsp
