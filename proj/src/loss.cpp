#include "ddsp/loss.hpp"

#include <algorithm>
#include <stdexcept>

#include "ddsp/spectral.hpp"

namespace ddsp {

std::array<BandRange, 8> band_ranges(int bins) {
  std::array<BandRange, 8> out;
  for (int k = 0; k < 8; ++k)
    out[k] = {std::max(0, 32 * k - 8), std::min(bins, 32 * k + 40)};
  return out;
}

std::vector<Eigen::VectorXd> band_split(const Eigen::VectorXd& spec257) {
  if (spec257.size() != 257)
    throw std::invalid_argument("band_split: expected 257 bins");
  std::vector<Eigen::VectorXd> bands;
  for (const BandRange& r : band_ranges())
    bands.push_back(spec257.segment(r.begin, r.width()));
  return bands;
}

double refmse_loss(const std::vector<double>& f0_pred,
                   const std::vector<double>& f0_ref,
                   const std::vector<Eigen::VectorXd>& p_pred,
                   const std::vector<Eigen::VectorXd>& p_ref,
                   const VocoderConfig& config) {
  if (f0_pred.size() != f0_ref.size() || p_pred.size() != p_ref.size() ||
      f0_pred.size() != p_pred.size())
    throw std::invalid_argument("refmse_loss: frame count mismatch");
  const size_t frames = f0_pred.size();
  if (frames == 0) return 0.0;
  double f0_term = 0.0;
  double p_term = 0.0;
  for (size_t t = 0; t < frames; ++t) {
    const double df = f0_pred[t] - f0_ref[t];
    f0_term += df * df;
    p_term += (p_pred[t] - p_ref[t]).squaredNorm();
  }
  return config.lambda_f0 * f0_term / frames +
         config.lambda_p / config.periodicity_dims * p_term / frames;
}

double mw_stft_loss(const AudioBuffer& x_ref, const AudioBuffer& x_pred,
                    const VocoderConfig& config) {
  const int len = std::max(x_ref.length(), x_pred.length());
  AudioBuffer a = x_ref;
  AudioBuffer b = x_pred;
  a.samples.conservativeResizeLike(Eigen::VectorXd::Zero(len));
  b.samples.conservativeResizeLike(Eigen::VectorXd::Zero(len));
  double loss = 0.0;
  for (size_t i = 0; i < config.loss_fft_sizes.size(); ++i) {
    const int c = config.loss_fft_sizes[i];
    const Eigen::MatrixXd xa =
        stft_log_mag(a, c, config.frame_shift, config.gain_db);
    const Eigen::MatrixXd xb =
        stft_log_mag(b, c, config.frame_shift, config.gain_db);
    const double n = static_cast<double>(xa.size());
    if (n > 0)
      loss += config.loss_weights_stft[i] * (xa - xb).cwiseAbs().sum() / n;
  }
  return loss;
}

LsganLosses lsgan_losses(const Eigen::VectorXd& scores_real,
                         const Eigen::VectorXd& scores_fake,
                         const VocoderConfig& config) {
  if (scores_real.size() == 0 || scores_fake.size() == 0)
    throw std::invalid_argument("lsgan_losses: empty score array");
  LsganLosses out;
  out.d_loss = (scores_real.array() - 1.0).square().mean() +
               scores_fake.array().square().mean();
  out.g_loss = config.lambda_adv * (scores_fake.array() - 1.0).square().mean();
  return out;
}

}  // namespace ddsp
