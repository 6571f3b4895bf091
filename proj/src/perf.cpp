#include "ddsp/perf.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ddsp/synth.hpp"

namespace ddsp {

FlopsReport count_flops(const VocoderConfig& config) {
  const double n = config.fft_size;
  const double bins = config.spectrum_bins;
  const double hop = config.frame_shift;
  const double win = config.noise_window_size;
  const double fft_cost = 5.0 * n * std::log2(n);

  FlopsReport r;
  r.fft_periodic_inverse = fft_cost;
  r.fft_noise_forward = fft_cost;
  r.fft_noise_inverse = fft_cost;
  // periodic product exp(v)*p with alternating sign: 2 real mults per bin;
  // aperiodic (1-p) per bin plus a complex-by-real multiply at 6 per bin
  r.spectral_products = 2.0 * bins + bins + 6.0 * bins;
  r.filter_exp = bins;
  // 2-point interpolation per bin: 2 MACs
  r.extrapolation = 4.0 * bins;
  // noise Hann window plus the impulse amplitude (1/sqrt(F0) and scale)
  r.window = win + 10.0;
  // scaled impulse response add (MAC per sample) plus aperiodic add
  r.overlap_add = 2.0 * n + n;
  r.per_frame_total = r.fft_periodic_inverse + r.fft_noise_forward +
                      r.fft_noise_inverse + r.spectral_products +
                      r.filter_exp + r.extrapolation + r.window +
                      r.overlap_add;
  r.frames_per_second = static_cast<double>(config.sample_rate_hz) / hop;
  r.mflops_total = r.per_frame_total * r.frames_per_second / 1e6;
  std::ostringstream conv;
  conv << "real FFT/iFFT of size N = 5*N*log2(N) FLOPS; "
       << "complex multiply = 6 FLOPS/bin; real MAC = 2 FLOPS; "
       << "exp = 1 FLOP/bin; one impulse per frame assumed";
  r.conventions = conv.str();
  return r;
}

std::string FlopsReport::to_key_value() const {
  std::ostringstream os;
  os << "fft_periodic_inverse=" << fft_periodic_inverse << "\n"
     << "fft_noise_forward=" << fft_noise_forward << "\n"
     << "fft_noise_inverse=" << fft_noise_inverse << "\n"
     << "spectral_products=" << spectral_products << "\n"
     << "filter_exp=" << filter_exp << "\n"
     << "extrapolation=" << extrapolation << "\n"
     << "window=" << window << "\n"
     << "overlap_add=" << overlap_add << "\n"
     << "per_frame_total=" << per_frame_total << "\n"
     << "frames_per_second=" << frames_per_second << "\n"
     << "mflops_total=" << mflops_total << "\n"
     << "conventions=" << conventions << "\n";
  return os.str();
}

RtfStats bench_rtf(const FeatureTrack& track, const VocoderConfig& config,
                   std::uint64_t seed, int repeats) {
  if (repeats < 3) throw std::invalid_argument("bench_rtf: repeats < 3");
  const double duration =
      static_cast<double>(track.frame_count()) * config.frame_shift /
      config.sample_rate_hz;
  if (duration < 1.0)
    throw std::invalid_argument("bench_rtf: track shorter than 1 second");

  synthesize(track, config, seed);  // warm-up

  RtfStats stats;
  for (int i = 0; i < repeats; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    const AudioBuffer audio = synthesize(track, config, seed);
    const auto t1 = std::chrono::steady_clock::now();
    const double secs = std::chrono::duration<double>(t1 - t0).count();
    stats.samples.push_back(secs / audio.duration_seconds());
  }
  std::vector<double> sorted = stats.samples;
  std::sort(sorted.begin(), sorted.end());
  const size_t m = sorted.size();
  stats.median = m % 2 ? sorted[m / 2]
                       : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);
  const size_t p95_idx =
      std::min(m - 1, static_cast<size_t>(std::ceil(0.95 * m)) - 1);
  stats.p95 = sorted[p95_idx];
  return stats;
}

}  // namespace ddsp
