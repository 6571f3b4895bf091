#include <doctest.h>

#include "ddsp/core.hpp"
#include "test_util.hpp"

using namespace ddsp;

TEST_CASE("default config matches the synthesis constants field by field") {
  VocoderConfig c;
  CHECK(c.sample_rate_hz == 24000);
  CHECK(c.frame_shift == 128);
  CHECK(c.fft_size == 512);
  CHECK(c.spectrum_bins == 257);
  CHECK(c.noise_window_size == 256);
  CHECK(c.periodic_buffer_len == 640);
  REQUIRE(c.loss_fft_sizes.size() == 3);
  CHECK(c.loss_fft_sizes[0] == 512);
  CHECK(c.loss_fft_sizes[1] == 1024);
  CHECK(c.loss_fft_sizes[2] == 2048);
  REQUIRE(c.loss_weights_stft.size() == 3);
  CHECK(c.loss_weights_stft[0] == doctest::Approx(25.7));
  CHECK(c.loss_weights_stft[1] == doctest::Approx(51.3));
  CHECK(c.loss_weights_stft[2] == doctest::Approx(102.5));
  CHECK(c.gain_db == doctest::Approx(72.0));
  CHECK(c.lambda_f0 == doctest::Approx(50.0));
  CHECK(c.lambda_p == doctest::Approx(30.0));
  CHECK(c.lambda_adv == doctest::Approx(50.0));
  CHECK(c.periodicity_dims == 12);
  CHECK_NOTHROW(c.check());
}

TEST_CASE("config invariants are enforced") {
  VocoderConfig c;
  c.spectrum_bins = 256;
  CHECK_THROWS_AS(c.check(), std::invalid_argument);
  c = VocoderConfig{};
  c.frame_shift = 100;
  CHECK_THROWS_AS(c.check(), std::invalid_argument);
  c = VocoderConfig{};
  c.loss_weights_stft[1] = -1.0;
  CHECK_THROWS_AS(c.check(), std::invalid_argument);
}

TEST_CASE("validate_track flags out-of-range periodicity") {
  VocoderConfig config;
  FeatureTrack track = testutil::random_track(10, config, 1);
  track.frames[7].p[3] = 1.2;
  const auto report = validate_track(track, config);
  REQUIRE(report.size() == 1);
  CHECK(report[0].frame == 7);
  CHECK(report[0].field == "p");
}

TEST_CASE("validate_track on an empty track reports nothing") {
  VocoderConfig config;
  CHECK(validate_track(FeatureTrack{}, config).empty());
}

TEST_CASE("validate_track flags F0 at or above Nyquist") {
  VocoderConfig config;
  FeatureTrack track = testutil::random_track(3, config, 2);
  track.frames[1].f0 = 13000.0;
  const auto report = validate_track(track, config);
  REQUIRE(report.size() == 1);
  CHECK(report[0].frame == 1);
  CHECK(report[0].field == "f0");
}

TEST_CASE("validate_track flags non-finite filter entries") {
  VocoderConfig config;
  FeatureTrack track = testutil::random_track(2, config, 3);
  track.frames[0].v[10] = std::numeric_limits<double>::infinity();
  const auto report = validate_track(track, config);
  REQUIRE(report.size() == 1);
  CHECK(report[0].field == "v");
}
