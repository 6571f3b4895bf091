#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "ddsp/core.hpp"

namespace ddsp {

// Generator hyperparameters reused as optimizer defaults.
struct OptimizerConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.99;
  double weight_decay = 1e-6;
  double grad_clip_norm = 1.0;
  double epsilon = 1e-8;
  int max_iters = 2000;
};

// One bias-corrected Adam update with decoupled weight decay.
// Gradients are clipped to grad_clip_norm (global norm) before the update.
// step_index starts at 1.
void adam_step(Eigen::VectorXd& params, const Eigen::VectorXd& grads,
               Eigen::VectorXd& moment1, Eigen::VectorXd& moment2,
               int step_index, const OptimizerConfig& opt);

struct EstimateResult {
  FeatureTrack track;               // lowest-loss iterate
  std::vector<double> loss_history; // entry 0 = loss at initialization
};

// Analysis-by-synthesis: recover P and V from target audio and a given
// per-frame F0 track by minimizing the multi-window STFT loss.
// P starts at 0.5 and is clamped to [0,1] after every step; V starts at -2.
EstimateResult estimate_features(const AudioBuffer& target,
                                 const std::vector<double>& f0_track,
                                 const VocoderConfig& config,
                                 const OptimizerConfig& opt,
                                 std::uint64_t seed);

}  // namespace ddsp
