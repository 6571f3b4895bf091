#include <doctest.h>

#include <cmath>
#include <random>

#include "ddsp/loss.hpp"
#include "ddsp/spectral.hpp"

using namespace ddsp;

namespace {
const VocoderConfig kConfig;

std::vector<Eigen::VectorXd> constant_p(int frames, double value) {
  return std::vector<Eigen::VectorXd>(frames,
                                      Eigen::VectorXd::Constant(12, value));
}
}  // namespace

TEST_CASE("refmse is zero for identical predictions") {
  const std::vector<double> f0(10, 120.0);
  const auto p = constant_p(10, 0.5);
  CHECK(refmse_loss(f0, f0, p, p, kConfig) == 0.0);
}

TEST_CASE("refmse F0 term: 1 Hz error everywhere gives lambda_f0") {
  std::vector<double> f0_ref(10, 120.0), f0_pred(10, 121.0);
  const auto p = constant_p(10, 0.5);
  CHECK(refmse_loss(f0_pred, f0_ref, p, p, kConfig) ==
        doctest::Approx(50.0).epsilon(1e-12));
}

TEST_CASE("refmse P term: 0.1 error in all 12 dims gives 0.3") {
  const std::vector<double> f0(10, 120.0);
  const auto p_ref = constant_p(10, 0.5);
  const auto p_pred = constant_p(10, 0.6);
  CHECK(refmse_loss(f0, f0, p_pred, p_ref, kConfig) ==
        doctest::Approx(0.3).epsilon(1e-9));
}

TEST_CASE("refmse rejects mismatched frame counts") {
  const std::vector<double> a(10, 120.0), b(9, 120.0);
  const auto p10 = constant_p(10, 0.5);
  const auto p9 = constant_p(9, 0.5);
  CHECK_THROWS_AS(refmse_loss(a, b, p10, p9, kConfig), std::invalid_argument);
}

TEST_CASE("mw_stft loss of a signal against itself is zero") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  AudioBuffer x;
  x.samples.resize(5000);
  for (int i = 0; i < 5000; ++i) x.samples[i] = unit(rng);
  CHECK(mw_stft_loss(x, x, kConfig) == 0.0);
}

TEST_CASE("mw_stft loss of silence against silence is zero") {
  AudioBuffer a, b;
  a.samples = Eigen::VectorXd::Zero(4000);
  b.samples = Eigen::VectorXd::Zero(4000);
  CHECK(mw_stft_loss(a, b, kConfig) == 0.0);
}

TEST_CASE("mw_stft of a unit sine against silence matches the direct sum") {
  AudioBuffer sine, silence;
  sine.samples.resize(6000);
  for (int i = 0; i < 6000; ++i)
    sine.samples[i] = std::sin(2.0 * M_PI * 1000.0 * i / 24000.0);
  silence.samples = Eigen::VectorXd::Zero(6000);
  const double loss = mw_stft_loss(silence, sine, kConfig);
  // independent route: sum of weighted mean log-amplified magnitudes
  double expected = 0.0;
  for (size_t i = 0; i < kConfig.loss_fft_sizes.size(); ++i) {
    const Eigen::MatrixXd m =
        stft_log_mag(sine, kConfig.loss_fft_sizes[i], 128);
    expected += kConfig.loss_weights_stft[i] * m.sum() / m.size();
  }
  CHECK(loss == doctest::Approx(expected).epsilon(1e-12));
  CHECK(loss > 0.0);
}

TEST_CASE("mw_stft is symmetric and handles length mismatch by padding") {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  AudioBuffer a, b;
  a.samples.resize(4000);
  b.samples.resize(3500);
  for (int i = 0; i < 4000; ++i) a.samples[i] = unit(rng);
  for (int i = 0; i < 3500; ++i) b.samples[i] = unit(rng);
  CHECK(mw_stft_loss(a, b, kConfig) ==
        doctest::Approx(mw_stft_loss(b, a, kConfig)).epsilon(1e-12));
  CHECK(mw_stft_loss(a, b, kConfig) >= 0.0);
}

TEST_CASE("band ranges follow the stride-32 construction") {
  const auto bands = band_ranges();
  CHECK(bands[0].begin == 0);
  CHECK(bands[0].end == 40);
  CHECK(bands[3].begin == 88);
  CHECK(bands[3].end == 136);
  CHECK(bands[3].width() == 48);
  // bands 3 and 4 share [120, 136): 8 bins contributed by each side
  CHECK(bands[4].begin == 120);
  CHECK(bands[3].end - bands[4].begin == 16);
  const std::array<int, 8> widths = {40, 48, 48, 48, 48, 48, 48, 41};
  for (int k = 0; k < 8; ++k) CHECK(bands[k].width() == widths[k]);
}

TEST_CASE("band union covers every bin with uniform adjacent overlaps") {
  const auto bands = band_ranges();
  std::array<int, 257> cover{};
  for (const auto& r : bands)
    for (int k = r.begin; k < r.end; ++k) ++cover[k];
  for (int k = 0; k < 257; ++k) CHECK(cover[k] >= 1);
  for (int k = 0; k < 7; ++k)
    CHECK(bands[k].end - bands[k + 1].begin == 16);
}

TEST_CASE("band_split slices the spectrum consistently") {
  Eigen::VectorXd spec(257);
  for (int k = 0; k < 257; ++k) spec[k] = k;
  const auto bands = band_split(spec);
  REQUIRE(bands.size() == 8);
  CHECK(bands[0][0] == 0.0);
  CHECK(bands[3][0] == 88.0);
  CHECK(bands[7][bands[7].size() - 1] == 256.0);
  CHECK_THROWS_AS(band_split(Eigen::VectorXd::Zero(256)),
                  std::invalid_argument);
}

TEST_CASE("lsgan: perfect discriminator has zero d_loss") {
  const auto losses = lsgan_losses(Eigen::VectorXd::Ones(16),
                                   Eigen::VectorXd::Zero(16), kConfig);
  CHECK(losses.d_loss == 0.0);
}

TEST_CASE("lsgan: fully fooled discriminator has zero g_loss") {
  const auto losses = lsgan_losses(Eigen::VectorXd::Ones(16),
                                   Eigen::VectorXd::Ones(16), kConfig);
  CHECK(losses.g_loss == 0.0);
}

TEST_CASE("lsgan closed-form values at constant 0.5 scores") {
  const auto losses =
      lsgan_losses(Eigen::VectorXd::Constant(10, 0.5),
                   Eigen::VectorXd::Constant(10, 0.5), kConfig);
  CHECK(losses.d_loss == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(losses.g_loss == doctest::Approx(12.5).epsilon(1e-12));
}

TEST_CASE("lsgan d_loss is minimized only at (1, 0) on a constant grid") {
  double best = 1e9;
  double best_r = -1, best_f = -1;
  for (double r = 0.0; r <= 1.0; r += 0.25) {
    for (double f = 0.0; f <= 1.0; f += 0.25) {
      const auto l = lsgan_losses(Eigen::VectorXd::Constant(4, r),
                                  Eigen::VectorXd::Constant(4, f), kConfig);
      if (l.d_loss < best) {
        best = l.d_loss;
        best_r = r;
        best_f = f;
      }
    }
  }
  CHECK(best == 0.0);
  CHECK(best_r == 1.0);
  CHECK(best_f == 0.0);
}

TEST_CASE("lsgan rejects empty score arrays") {
  CHECK_THROWS_AS(
      lsgan_losses(Eigen::VectorXd(), Eigen::VectorXd::Ones(4), kConfig),
      std::invalid_argument);
}

TEST_CASE("generator loss is the plain sum of its terms") {
  CHECK(generator_loss(0, 0, 0) == 0.0);
  CHECK(generator_loss(1, 2, 3) == 6.0);
  CHECK(generator_loss(1.5, 2.5, 0.0) == 4.0);  // pretraining mode, adv = 0
}
