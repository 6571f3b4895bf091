#include <doctest.h>

#include <cmath>
#include <random>

#include "ddsp/grad.hpp"
#include "ddsp/loss.hpp"
#include "ddsp/synth.hpp"
#include "test_util.hpp"

using namespace ddsp;

namespace {
const VocoderConfig kConfig;

AudioBuffer perturbed_target(const FeatureTrack& track, std::uint64_t seed) {
  FeatureTrack t = track;
  std::mt19937_64 rng(seed * 131 + 7);
  std::uniform_real_distribution<double> unit(-0.2, 0.2);
  for (auto& f : t.frames)
    for (int k = 0; k < f.v.size(); ++k) f.v[k] += unit(rng);
  return synthesize(t, kConfig, seed + 1);
}
}  // namespace

TEST_CASE("gradient vanishes at an exact reconstruction") {
  const FeatureTrack track = testutil::random_track(6, kConfig, 41);
  const AudioBuffer target = synthesize(track, kConfig, 5);
  const LossAndGrad lg = loss_and_grad(track, target, kConfig, 5);
  CHECK(lg.loss == doctest::Approx(0.0).epsilon(1e-12));
  for (int i = 0; i < track.frame_count(); ++i) {
    CHECK(lg.grads.d_p[i].cwiseAbs().maxCoeff() < 1e-9);
    CHECK(lg.grads.d_v[i].cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("single-frame analytic dV matches central differences") {
  const FeatureTrack track = testutil::random_track(1, kConfig, 42);
  const AudioBuffer target = perturbed_target(track, 42);
  const LossAndGrad lg = loss_and_grad(track, target, kConfig, 3);
  const double eps = 1e-5;
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> bin(0, 256);
  for (int rep = 0; rep < 8; ++rep) {
    const int k = bin(rng);
    FeatureTrack probe = track;
    probe.frames[0].v[k] += eps;
    const double lp =
        mw_stft_loss(target, synthesize(probe, kConfig, 3), kConfig);
    probe.frames[0].v[k] -= 2.0 * eps;
    const double lm =
        mw_stft_loss(target, synthesize(probe, kConfig, 3), kConfig);
    const double fd = (lp - lm) / (2.0 * eps);
    const double ga = lg.grads.d_v[0][k];
    CHECK(std::abs(ga - fd) / (std::abs(ga) + std::abs(fd) + 1e-12) < 1e-4);
  }
}

TEST_CASE("finite_diff_check stays under 1e-4 on a smooth random track") {
  const FeatureTrack track = testutil::random_track(8, kConfig, 43);
  const AudioBuffer target = perturbed_target(track, 43);
  const double err = finite_diff_check(track, target, kConfig, 9, 1e-5, 64);
  CHECK(err < 1e-4);
}

TEST_CASE("at a perfect reconstruction both gradient routes are tiny") {
  // the relative-error metric is degenerate when both gradients are near
  // zero (truncation noise dominates), so compare in absolute terms
  const FeatureTrack track = testutil::random_track(4, kConfig, 44);
  const AudioBuffer target = synthesize(track, kConfig, 8);
  const LossAndGrad lg = loss_and_grad(track, target, kConfig, 8);
  for (int i = 0; i < 4; ++i) {
    CHECK(lg.grads.d_p[i].cwiseAbs().maxCoeff() < 1e-9);
    CHECK(lg.grads.d_v[i].cwiseAbs().maxCoeff() < 1e-9);
  }
  const double eps = 1e-5;
  FeatureTrack probe = track;
  probe.frames[1].v[40] += eps;
  const double lp = mw_stft_loss(target, synthesize(probe, kConfig, 8), kConfig);
  probe.frames[1].v[40] -= 2.0 * eps;
  const double lm = mw_stft_loss(target, synthesize(probe, kConfig, 8), kConfig);
  CHECK(std::abs((lp - lm) / (2.0 * eps)) < 1e-3);
  const double err = finite_diff_check(track, target, kConfig, 8, 1e-5, 16);
  CHECK(std::isfinite(err));
}

TEST_CASE("oversized eps still returns a number") {
  const FeatureTrack track = testutil::random_track(2, kConfig, 45);
  const AudioBuffer target = perturbed_target(track, 45);
  const double err = finite_diff_check(track, target, kConfig, 2, 5e-2, 8);
  CHECK(std::isfinite(err));
}

TEST_CASE("frames outside a restricted loss region receive zero gradient") {
  // target identical to the synthesized audio except far from frame 2's
  // influence window: frame 2's gradient must vanish
  const int frames = 30;
  const FeatureTrack track = testutil::random_track(frames, kConfig, 46);
  AudioBuffer target = synthesize(track, kConfig, 12);
  // corrupt a region well past frame 2's influence ([0, 896))
  for (int n = 3000; n < 3200; ++n) target.samples[n] += 0.05;
  const LossAndGrad lg = loss_and_grad(track, target, kConfig, 12);
  // frame 2 influences aligned samples [0, 896); the loss only differs in
  // STFT frames whose windows touch [3000, 3200). The largest loss window
  // is 2048 samples, so frames starting at >= 3200-2048 = 1152 are clean
  // of frame 2's region only if 896 <= start. Check gradients are zero.
  CHECK(lg.grads.d_v[2].cwiseAbs().maxCoeff() < 1e-12);
  CHECK(lg.grads.d_p[2].cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("a small step along the negative gradient decreases the loss") {
  for (int inst = 0; inst < 10; ++inst) {
    const FeatureTrack track = testutil::random_track(3, kConfig, 50 + inst);
    const AudioBuffer target = perturbed_target(track, 50 + inst);
    const LossAndGrad lg = loss_and_grad(track, target, kConfig, 2);
    double norm2 = 0.0;
    for (int i = 0; i < 3; ++i)
      norm2 += lg.grads.d_p[i].squaredNorm() + lg.grads.d_v[i].squaredNorm();
    REQUIRE(norm2 > 0.0);
    const double alpha = 1e-4 / std::sqrt(norm2);
    FeatureTrack stepped = track;
    for (int i = 0; i < 3; ++i) {
      stepped.frames[i].p -= alpha * lg.grads.d_p[i];
      stepped.frames[i].p =
          stepped.frames[i].p.cwiseMax(0.0).cwiseMin(1.0);
      stepped.frames[i].v -= alpha * lg.grads.d_v[i];
    }
    const double after =
        mw_stft_loss(target, synthesize(stepped, kConfig, 2), kConfig);
    CHECK(after < lg.loss);
  }
}

TEST_CASE("sample-rate mismatch is rejected") {
  const FeatureTrack track = testutil::random_track(2, kConfig, 60);
  AudioBuffer target = synthesize(track, kConfig, 1);
  target.sample_rate_hz = 16000;
  CHECK_THROWS_AS(loss_and_grad(track, target, kConfig, 1),
                  std::invalid_argument);
}
