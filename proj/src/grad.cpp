#include "ddsp/grad.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>
#include <vector>

#include "ddsp/fft.hpp"
#include "ddsp/loss.hpp"
#include "ddsp/spectral.hpp"
#include "ddsp/synth.hpp"

namespace ddsp {

namespace {

// dL/dx for the multi-window STFT loss, accumulated over all FFT sizes.
// Returns the loss; gx has one entry per predicted sample.
double stft_loss_backward(const AudioBuffer& target, const AudioBuffer& pred,
                          const VocoderConfig& config, Eigen::VectorXd& gx) {
  const int pred_len = pred.length();
  const int len = std::max(target.length(), pred_len);
  AudioBuffer ref_p = target;
  AudioBuffer pred_p = pred;
  ref_p.samples.conservativeResizeLike(Eigen::VectorXd::Zero(len));
  pred_p.samples.conservativeResizeLike(Eigen::VectorXd::Zero(len));

  gx = Eigen::VectorXd::Zero(pred_len);
  double loss = 0.0;
  const int hop = config.frame_shift;
  std::vector<std::complex<double>> d;

  for (size_t ci = 0; ci < config.loss_fft_sizes.size(); ++ci) {
    const int c = config.loss_fft_sizes[ci];
    const double lambda = config.loss_weights_stft[ci];
    const Eigen::MatrixXcd spec_pred = stft_complex(pred_p, c, hop);
    const Eigen::MatrixXcd spec_ref = stft_complex(ref_p, c, hop);
    const int frames = static_cast<int>(spec_pred.rows());
    const int bins = c / 2 + 1;
    const double n_elems = static_cast<double>(frames) * bins;
    if (n_elems == 0) continue;
    const Eigen::VectorXd w = hann_window(c);
    d.assign(c, {0.0, 0.0});

    for (int t = 0; t < frames; ++t) {
      bool any = false;
      for (int k = 0; k < bins; ++k) {
        const double mag_pred = std::abs(spec_pred(t, k));
        const double mag_ref = std::abs(spec_ref(t, k));
        const double xp = amp_log(mag_pred, config.gain_db);
        const double xr = amp_log(mag_ref, config.gain_db);
        loss += lambda * std::abs(xp - xr) / n_elems;
        double coeff = 0.0;
        if (xp != xr && mag_pred > 0.0) {
          const double sgn = xp > xr ? 1.0 : -1.0;
          coeff = lambda / n_elems * sgn *
                  amp_log_deriv(mag_pred, config.gain_db);
          d[k] = coeff * std::conj(spec_pred(t, k)) / mag_pred;
          any = true;
        } else {
          d[k] = {0.0, 0.0};
        }
      }
      for (int k = bins; k < c; ++k) d[k] = {0.0, 0.0};
      if (!any) continue;
      fft::forward(d);
      const int base = t * hop;
      const int stop = std::min(c, pred_len - base);
      for (int n = 0; n < stop; ++n)
        gx[base + n] += d[n].real() * w[n];
    }
  }
  return loss;
}

}  // namespace

LossAndGrad loss_and_grad(const FeatureTrack& track, const AudioBuffer& target,
                          const VocoderConfig& config, std::uint64_t seed) {
  if (target.sample_rate_hz != config.sample_rate_hz)
    throw std::invalid_argument("loss_and_grad: sample rate mismatch");

  SynthTrace trace;
  const AudioBuffer pred = synthesize_traced(track, config, seed, &trace);

  Eigen::VectorXd gx;
  LossAndGrad out;
  out.loss = stft_loss_backward(target, pred, config, gx);

  const int frames = track.frame_count();
  const int hop = config.frame_shift;
  const int n = config.fft_size;
  const int bins = config.spectrum_bins;
  const int latency = n / 2;
  const int pred_len = pred.length();
  const Eigen::MatrixXd& basis = periodicity_basis(config);
  const Eigen::VectorXd noise_win = hann_window(config.noise_window_size);
  const int win_start = (n - config.noise_window_size) / 2;

  // gradient w.r.t. the untrimmed accumulator sample m
  auto g_raw = [&](int m) -> double {
    const int idx = m - latency;
    return (idx >= 0 && idx < pred_len) ? gx[idx] : 0.0;
  };

  out.grads.d_p.assign(frames, Eigen::VectorXd::Zero(config.periodicity_dims));
  out.grads.d_v.assign(frames, Eigen::VectorXd::Zero(bins));

  Eigen::VectorXd g_buf(n);
  Eigen::VectorXd d_p257(bins);

  for (int i = 0; i < frames; ++i) {
    const FrameTrace& ft = trace.frames[i];
    const FeatureFrame& f = track.frames[i];
    const int base = i * hop;
    d_p257.setZero();
    Eigen::VectorXd& dv = out.grads.d_v[i];

    // periodic path: impulse positions and scale are forward-pass constants
    if (!ft.impulse_offsets.empty() && ft.impulse_scale > 0.0) {
      g_buf.setZero();
      for (int t : ft.impulse_offsets)
        for (int s = 0; s < n; ++s)
          g_buf[s] += ft.impulse_scale * g_raw(base + t + s);
      const Eigen::VectorXcd gh = fft::rfft(g_buf);
      for (int k = 0; k < bins; ++k) {
        const double ck = (k == 0 || k == n / 2) ? 1.0 : 2.0;
        const double d_spec = ck / n * gh[k].real();
        const double sign = (k & 1) ? -1.0 : 1.0;
        const double ev = std::exp(f.v[k]);
        dv[k] += d_spec * ev * ft.p257[k] * sign;
        d_p257[k] += d_spec * ev * sign;
      }
    }

    // aperiodic path: noise spectrum is a forward-pass constant
    g_buf.setZero();
    for (int s = 0; s < config.noise_window_size; ++s)
      g_buf[win_start + s] = g_raw(base + win_start + s) * noise_win[s];
    const Eigen::VectorXcd g2 = fft::rfft(g_buf);
    for (int k = 0; k < bins; ++k) {
      const double ck = (k == 0 || k == n / 2) ? 1.0 : 2.0;
      const std::complex<double> dz = ck / n * g2[k];
      const double dm = (dz * std::conj(ft.noise_spectrum[k])).real();
      const double ev = std::exp(f.v[k]);
      dv[k] += dm * ev * (1.0 - ft.p257[k]);
      d_p257[k] -= dm * ev;
    }

    out.grads.d_p[i].noalias() = basis.transpose() * d_p257;
  }
  return out;
}

double finite_diff_check(const FeatureTrack& track, const AudioBuffer& target,
                         const VocoderConfig& config, std::uint64_t seed,
                         double eps, int trials) {
  if (!(eps > 0.0)) throw std::invalid_argument("finite_diff_check: eps <= 0");
  if (trials < 1) throw std::invalid_argument("finite_diff_check: trials < 1");
  if (track.frame_count() == 0)
    throw std::invalid_argument("finite_diff_check: empty track");

  const LossAndGrad base = loss_and_grad(track, target, config, seed);
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_int_distribution<int> frame_pick(0, track.frame_count() - 1);
  const int coords = config.periodicity_dims + config.spectrum_bins;
  std::uniform_int_distribution<int> coord_pick(0, coords - 1);

  auto forward = [&](const FeatureTrack& t) {
    return mw_stft_loss(target, synthesize(t, config, seed), config);
  };

  double max_rel = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    const int fr = frame_pick(rng);
    const int coord = coord_pick(rng);
    FeatureTrack probe = track;
    double g_a;
    double* slot;
    if (coord < config.periodicity_dims) {
      slot = &probe.frames[fr].p[coord];
      g_a = base.grads.d_p[fr][coord];
    } else {
      slot = &probe.frames[fr].v[coord - config.periodicity_dims];
      g_a = base.grads.d_v[fr][coord - config.periodicity_dims];
    }
    const double orig = *slot;
    *slot = orig + eps;
    const double lp = forward(probe);
    *slot = orig - eps;
    const double lm = forward(probe);
    *slot = orig;
    const double g_fd = (lp - lm) / (2.0 * eps);
    const double rel =
        std::abs(g_a - g_fd) / (std::abs(g_a) + std::abs(g_fd) + 1e-12);
    max_rel = std::max(max_rel, rel);
  }
  return max_rel;
}

}  // namespace ddsp
