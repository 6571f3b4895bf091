#include "ddsp/synth.hpp"

#include <cmath>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "ddsp/fft.hpp"
#include "ddsp/spectral.hpp"

namespace ddsp {

namespace {

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

constexpr double kBandTopHz = 12000.0;

Eigen::MatrixXd build_periodicity_basis(const VocoderConfig& config) {
  const int bins = config.spectrum_bins;
  const int bands = config.periodicity_dims;
  std::vector<double> centers_hz(bands);
  const double mel_top = hz_to_mel(kBandTopHz);
  for (int j = 0; j < bands; ++j)
    centers_hz[j] = mel_to_hz(mel_top * j / (bands - 1));
  const double bin_hz =
      static_cast<double>(config.sample_rate_hz) / config.fft_size;
  Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(bins, bands);
  for (int k = 0; k < bins; ++k) {
    const double f = k * bin_hz;
    if (f <= centers_hz.front()) {
      basis(k, 0) = 1.0;
    } else if (f >= centers_hz.back()) {
      basis(k, bands - 1) = 1.0;
    } else {
      int j = 0;
      while (f > centers_hz[j + 1]) ++j;
      const double w =
          (f - centers_hz[j]) / (centers_hz[j + 1] - centers_hz[j]);
      basis(k, j) = 1.0 - w;
      basis(k, j + 1) = w;
    }
  }
  return basis;
}

// Impulse offsets within the frame, advancing the running phase by
// frame_shift * f0 / sample_rate in per-sample steps.
void impulse_offsets(double f0, double& phase, const VocoderConfig& config,
                     std::vector<int>& out) {
  out.clear();
  if (f0 <= 0.0) return;
  const double step = f0 / config.sample_rate_hz;
  // epsilon absorbs accumulated rounding when the period divides the
  // frame exactly
  constexpr double kWrapEps = 1e-9;
  for (int s = 0; s < config.frame_shift; ++s) {
    phase += step;
    if (phase >= 1.0 - kWrapEps) {
      phase -= 1.0;
      out.push_back(s);
    }
  }
}

}  // namespace

double uniform_pm1(std::mt19937_64& rng) {
  const double u = (rng() >> 11) * 0x1.0p-53;  // [0, 1)
  return 2.0 * u - 1.0;
}

const Eigen::MatrixXd& periodicity_basis(const VocoderConfig& config) {
  static std::unordered_map<long long, Eigen::MatrixXd> cache;
  static std::mutex mu;
  const long long key =
      static_cast<long long>(config.spectrum_bins) * 100000 +
      config.periodicity_dims * 100 + config.sample_rate_hz % 100;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, build_periodicity_basis(config)).first;
  return it->second;
}

Eigen::VectorXd extrapolate_periodicity(const Eigen::VectorXd& p12,
                                        const VocoderConfig& config) {
  if (p12.size() != config.periodicity_dims)
    throw std::invalid_argument("extrapolate_periodicity: wrong dimension");
  if ((p12.array() < 0.0).any() || (p12.array() > 1.0).any())
    throw std::invalid_argument("extrapolate_periodicity: input outside [0,1]");
  return periodicity_basis(config) * p12;
}

Eigen::VectorXd periodic_impulse_response(const Eigen::VectorXd& p257,
                                          const Eigen::VectorXd& v257,
                                          const VocoderConfig& config) {
  if (p257.size() != config.spectrum_bins || v257.size() != config.spectrum_bins)
    throw std::invalid_argument("periodic_impulse_response: wrong dimension");
  Eigen::VectorXcd spec(config.spectrum_bins);
  for (int k = 0; k < config.spectrum_bins; ++k) {
    const double sign = (k & 1) ? -1.0 : 1.0;
    spec[k] = std::exp(v257[k]) * p257[k] * sign;
  }
  return fft::irfft(spec, config.fft_size);
}

Eigen::VectorXd render_periodic_frame(const FeatureFrame& frame,
                                      SynthState& state,
                                      const VocoderConfig& config) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(config.periodic_buffer_len);
  std::vector<int> offsets;
  impulse_offsets(frame.f0, state.running_phase, config, offsets);
  if (offsets.empty()) return out;
  const Eigen::VectorXd p257 = extrapolate_periodicity(frame.p, config);
  if (p257.maxCoeff() <= 0.0) return out;  // entirely aperiodic frame
  const Eigen::VectorXd h = periodic_impulse_response(p257, frame.v, config);
  const double scale = 1.0 / std::sqrt(frame.f0);
  for (int t : offsets)
    out.segment(t, config.fft_size) += scale * h;
  return out;
}

Eigen::VectorXd render_aperiodic_frame(const FeatureFrame& frame,
                                       SynthState& state,
                                       const VocoderConfig& config) {
  const int n = config.fft_size;
  const int hop = config.frame_shift;
  const double noise_scale = 1.0 / std::sqrt(config.sample_rate_hz);
  state.noise_buffer.head(n - hop) = state.noise_buffer.tail(n - hop).eval();
  for (int i = n - hop; i < n; ++i)
    state.noise_buffer[i] = uniform_pm1(state.rng) * noise_scale;

  Eigen::VectorXcd spec = fft::rfft(state.noise_buffer);
  const Eigen::VectorXd p257 = extrapolate_periodicity(frame.p, config);
  for (int k = 0; k < config.spectrum_bins; ++k)
    spec[k] *= std::exp(frame.v[k]) * (1.0 - p257[k]);
  const Eigen::VectorXd y = fft::irfft(spec, n);

  const Eigen::VectorXd w = hann_window(config.noise_window_size);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  const int start = (n - config.noise_window_size) / 2;
  for (int i = 0; i < config.noise_window_size; ++i)
    out[start + i] = y[start + i] * w[i];
  return out;
}

namespace {

struct RenderResult {
  Eigen::VectorXd periodic;   // frames*hop + fft_size accumulator
  Eigen::VectorXd aperiodic;  // same length
};

RenderResult render_all(const FeatureTrack& track, const VocoderConfig& config,
                        std::uint64_t seed, SynthTrace* trace) {
  const auto violations = validate_track(track, config);
  if (!violations.empty()) {
    std::ostringstream msg;
    msg << "invalid track:";
    for (const auto& v : violations)
      msg << " [frame " << v.frame << " " << v.field << ": " << v.reason << "]";
    throw std::invalid_argument(msg.str());
  }

  const int frames = track.frame_count();
  const int hop = config.frame_shift;
  const int n = config.fft_size;
  const int total_len = frames * hop + n;
  RenderResult r;
  r.periodic = Eigen::VectorXd::Zero(total_len);
  r.aperiodic = Eigen::VectorXd::Zero(total_len);
  if (trace) trace->frames.resize(frames);

  SynthState state(config, seed);
  const Eigen::MatrixXd& basis = periodicity_basis(config);
  const Eigen::VectorXd noise_win = hann_window(config.noise_window_size);
  const int win_start = (n - config.noise_window_size) / 2;
  const double noise_scale = 1.0 / std::sqrt(config.sample_rate_hz);
  std::vector<int> offsets;
  Eigen::VectorXd p257(config.spectrum_bins);
  Eigen::VectorXd mag(config.spectrum_bins);
  Eigen::VectorXcd spec(config.spectrum_bins);

  for (int i = 0; i < frames; ++i) {
    const FeatureFrame& f = track.frames[i];
    const int base = i * hop;
    p257.noalias() = basis * f.p;
    mag = f.v.array().exp();

    // periodic path
    impulse_offsets(f.f0, state.running_phase, config, offsets);
    const double scale = f.f0 > 0.0 ? 1.0 / std::sqrt(f.f0) : 0.0;
    if (!offsets.empty() && p257.maxCoeff() > 0.0) {
      for (int k = 0; k < config.spectrum_bins; ++k) {
        const double sign = (k & 1) ? -1.0 : 1.0;
        spec[k] = mag[k] * p257[k] * sign;
      }
      const Eigen::VectorXd h = fft::irfft(spec, n);
      for (int t : offsets)
        r.periodic.segment(base + t, n) += scale * h;
    }

    // aperiodic path
    state.noise_buffer.head(n - hop) = state.noise_buffer.tail(n - hop).eval();
    for (int s = n - hop; s < n; ++s)
      state.noise_buffer[s] = uniform_pm1(state.rng) * noise_scale;
    Eigen::VectorXcd noise_spec = fft::rfft(state.noise_buffer);
    if (trace) {
      FrameTrace& ft = trace->frames[i];
      ft.impulse_offsets = offsets;
      ft.impulse_scale = scale;
      ft.noise_spectrum = noise_spec;
      ft.p257 = p257;
    }
    for (int k = 0; k < config.spectrum_bins; ++k)
      noise_spec[k] *= mag[k] * (1.0 - p257[k]);
    const Eigen::VectorXd y = fft::irfft(noise_spec, n);
    for (int s = 0; s < config.noise_window_size; ++s)
      r.aperiodic[base + win_start + s] += y[win_start + s] * noise_win[s];
  }
  return r;
}

AudioBuffer trim(const Eigen::VectorXd& acc, int frames,
                 const VocoderConfig& config) {
  // Both paths share a fft_size/2 center-alignment latency; drop it.
  const int latency = config.fft_size / 2;
  AudioBuffer out;
  out.sample_rate_hz = config.sample_rate_hz;
  out.samples = acc.segment(latency, frames * config.frame_shift);
  return out;
}

}  // namespace

AudioBuffer synthesize(const FeatureTrack& track, const VocoderConfig& config,
                       std::uint64_t seed) {
  const RenderResult r = render_all(track, config, seed, nullptr);
  return trim(r.periodic + r.aperiodic, track.frame_count(), config);
}

SynthPaths synthesize_paths(const FeatureTrack& track,
                            const VocoderConfig& config, std::uint64_t seed) {
  const RenderResult r = render_all(track, config, seed, nullptr);
  SynthPaths out;
  out.periodic = trim(r.periodic, track.frame_count(), config);
  out.aperiodic = trim(r.aperiodic, track.frame_count(), config);
  out.total.sample_rate_hz = config.sample_rate_hz;
  out.total.samples = out.periodic.samples + out.aperiodic.samples;
  return out;
}

AudioBuffer synthesize_traced(const FeatureTrack& track,
                              const VocoderConfig& config, std::uint64_t seed,
                              SynthTrace* trace) {
  const RenderResult r = render_all(track, config, seed, trace);
  return trim(r.periodic + r.aperiodic, track.frame_count(), config);
}

}  // namespace ddsp
