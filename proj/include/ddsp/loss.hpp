#pragma once

#include <Eigen/Dense>
#include <array>
#include <utility>
#include <vector>

#include "ddsp/core.hpp"

namespace ddsp {

// Half-open bin range [begin, end).
struct BandRange {
  int begin = 0;
  int end = 0;
  int width() const { return end - begin; }
};

// Eight stride-32 bands over the 257-bin spectrum with 8-bin overlaps:
// band k = [max(0, 32k - 8), min(257, 32k + 40)).
std::array<BandRange, 8> band_ranges(int bins = 257);

// Slices a 257-bin spectrum row into the 8 overlapping bands.
std::vector<Eigen::VectorXd> band_split(const Eigen::VectorXd& spec257);

// L2 feature-space loss: lambda_f0 * mean((F0 - F0~)^2)
// + (lambda_p / d_p) * mean over frames of the squared P error sum.
double refmse_loss(const std::vector<double>& f0_pred,
                   const std::vector<double>& f0_ref,
                   const std::vector<Eigen::VectorXd>& p_pred,
                   const std::vector<Eigen::VectorXd>& p_ref,
                   const VocoderConfig& config);

// L1 distance between log-amplified magnitude spectrograms at the three
// loss FFT sizes, each normalized by its element count and weighted.
// Shorter input is zero-padded to the longer one.
double mw_stft_loss(const AudioBuffer& x_ref, const AudioBuffer& x_pred,
                    const VocoderConfig& config);

struct LsganLosses {
  double d_loss = 0.0;
  double g_loss = 0.0;
};

// Least-squares adversarial loss arithmetic over per-patch scores.
LsganLosses lsgan_losses(const Eigen::VectorXd& scores_real,
                         const Eigen::VectorXd& scores_fake,
                         const VocoderConfig& config);

inline double generator_loss(double refmse, double mw_stft, double adv) {
  return refmse + mw_stft + adv;
}

}  // namespace ddsp
