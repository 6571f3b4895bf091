#include "ddsp/analysis.hpp"

#include <cmath>
#include <stdexcept>

#include "ddsp/grad.hpp"
#include "ddsp/loss.hpp"
#include "ddsp/synth.hpp"

namespace ddsp {

void adam_step(Eigen::VectorXd& params, const Eigen::VectorXd& grads,
               Eigen::VectorXd& moment1, Eigen::VectorXd& moment2,
               int step_index, const OptimizerConfig& opt) {
  if (grads.size() != params.size() || moment1.size() != params.size() ||
      moment2.size() != params.size())
    throw std::invalid_argument("adam_step: shape mismatch");
  if (step_index < 1) throw std::invalid_argument("adam_step: step_index < 1");

  Eigen::VectorXd g = grads;
  const double norm = g.norm();
  if (opt.grad_clip_norm > 0.0 && norm > opt.grad_clip_norm)
    g *= opt.grad_clip_norm / norm;

  moment1 = opt.beta1 * moment1 + (1.0 - opt.beta1) * g;
  moment2 = opt.beta2 * moment2.array().matrix() +
            (1.0 - opt.beta2) * g.array().square().matrix();
  const double bc1 = 1.0 - std::pow(opt.beta1, step_index);
  const double bc2 = 1.0 - std::pow(opt.beta2, step_index);
  params.array() -=
      opt.learning_rate *
      ((moment1.array() / bc1) /
           ((moment2.array() / bc2).sqrt() + opt.epsilon) +
       opt.weight_decay * params.array());
}

namespace {

FeatureTrack init_track(const std::vector<double>& f0_track,
                        const VocoderConfig& config) {
  FeatureTrack track;
  track.frames.resize(f0_track.size());
  for (size_t t = 0; t < f0_track.size(); ++t) {
    track.frames[t].f0 = f0_track[t];
    track.frames[t].p = Eigen::VectorXd::Constant(config.periodicity_dims, 0.5);
    track.frames[t].v = Eigen::VectorXd::Constant(config.spectrum_bins, -2.0);
  }
  return track;
}

}  // namespace

EstimateResult estimate_features(const AudioBuffer& target,
                                 const std::vector<double>& f0_track,
                                 const VocoderConfig& config,
                                 const OptimizerConfig& opt,
                                 std::uint64_t seed) {
  const int hop = config.frame_shift;
  const int expected_frames = (target.length() + hop - 1) / hop;
  if (static_cast<int>(f0_track.size()) != expected_frames)
    throw std::invalid_argument("estimate_features: f0 frame count mismatch");

  const int frames = expected_frames;
  const int pd = config.periodicity_dims;
  const int vd = config.spectrum_bins;
  const int dim = frames * (pd + vd);

  FeatureTrack track = init_track(f0_track, config);
  EstimateResult result;
  result.track = track;

  if (opt.max_iters <= 0) {
    result.loss_history.push_back(
        mw_stft_loss(target, synthesize(track, config, seed), config));
    return result;
  }

  // flat parameter layout: per frame, p then v
  auto pack = [&](const FeatureTrack& t, Eigen::VectorXd& x) {
    for (int i = 0; i < frames; ++i) {
      x.segment(i * (pd + vd), pd) = t.frames[i].p;
      x.segment(i * (pd + vd) + pd, vd) = t.frames[i].v;
    }
  };
  auto unpack = [&](const Eigen::VectorXd& x, FeatureTrack& t) {
    for (int i = 0; i < frames; ++i) {
      t.frames[i].p = x.segment(i * (pd + vd), pd);
      t.frames[i].v = x.segment(i * (pd + vd) + pd, vd);
    }
  };

  Eigen::VectorXd params(dim);
  pack(track, params);
  Eigen::VectorXd m1 = Eigen::VectorXd::Zero(dim);
  Eigen::VectorXd m2 = Eigen::VectorXd::Zero(dim);
  Eigen::VectorXd g(dim);
  double best = std::numeric_limits<double>::infinity();

  for (int it = 0; it < opt.max_iters; ++it) {
    const LossAndGrad lg = loss_and_grad(track, target, config, seed);
    result.loss_history.push_back(lg.loss);
    if (lg.loss < best) {
      best = lg.loss;
      result.track = track;
    }
    for (int i = 0; i < frames; ++i) {
      g.segment(i * (pd + vd), pd) = lg.grads.d_p[i];
      g.segment(i * (pd + vd) + pd, vd) = lg.grads.d_v[i];
    }
    adam_step(params, g, m1, m2, it + 1, opt);
    // project P back to [0,1]
    for (int i = 0; i < frames; ++i)
      params.segment(i * (pd + vd), pd) =
          params.segment(i * (pd + vd), pd).cwiseMax(0.0).cwiseMin(1.0);
    unpack(params, track);
  }

  const double final_loss =
      mw_stft_loss(target, synthesize(track, config, seed), config);
  result.loss_history.push_back(final_loss);
  if (final_loss < best) result.track = track;
  return result;
}

}  // namespace ddsp
