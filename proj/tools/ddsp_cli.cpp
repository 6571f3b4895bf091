#include <CLI11.hpp>
#include <cstdint>
#include <iostream>
#include <random>

#include "ddsp/analysis.hpp"
#include "ddsp/core.hpp"
#include "ddsp/grad.hpp"
#include "ddsp/io.hpp"
#include "ddsp/loss.hpp"
#include "ddsp/perf.hpp"
#include "ddsp/synth.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 2;
constexpr int kExitValidation = 3;

int run_synth(const std::string& features, const std::string& out,
              std::uint64_t seed) {
  ddsp::VocoderConfig config;
  ddsp::FeatureTrack track;
  try {
    track = ddsp::io::read_feature_file(features, config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  const auto violations = ddsp::validate_track(track, config);
  if (!violations.empty()) {
    for (const auto& v : violations)
      std::cerr << "frame " << v.frame << " " << v.field << ": " << v.reason
                << "\n";
    return kExitValidation;
  }
  try {
    ddsp::io::write_wav(out, ddsp::synthesize(track, config, seed));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitOk;
}

int run_analyze(const std::string& audio_path, const std::string& f0_path,
                const std::string& out, int iters, std::uint64_t seed,
                double lr) {
  ddsp::VocoderConfig config;
  ddsp::AudioBuffer target;
  std::vector<double> f0;
  try {
    target = ddsp::io::read_wav(audio_path);
    f0 = ddsp::io::read_f0_text(f0_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  if (target.sample_rate_hz != config.sample_rate_hz) {
    std::cerr << "error: expected " << config.sample_rate_hz
              << " Hz audio, got " << target.sample_rate_hz << " Hz\n";
    return kExitIo;
  }
  ddsp::OptimizerConfig opt;
  opt.max_iters = iters;
  opt.learning_rate = lr;
  ddsp::EstimateResult result;
  try {
    result = ddsp::estimate_features(target, f0, config, opt, seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  try {
    ddsp::io::write_feature_file(out, result.track, config);
    ddsp::io::write_loss_history(out + ".loss.txt", result.loss_history);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  if (!result.loss_history.empty())
    std::cout << "initial_loss=" << result.loss_history.front() << "\n"
              << "final_loss=" << result.loss_history.back() << "\n";
  return kExitOk;
}

int run_gradcheck(int frames, int trials, std::uint64_t seed) {
  ddsp::VocoderConfig config;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  ddsp::FeatureTrack track;
  track.frames.resize(frames);
  for (auto& f : track.frames) {
    f.f0 = 90.0 + 150.0 * unit(rng);
    f.p.resize(config.periodicity_dims);
    for (int j = 0; j < config.periodicity_dims; ++j)
      f.p[j] = 0.1 + 0.8 * unit(rng);
    f.v.resize(config.spectrum_bins);
    for (int k = 0; k < config.spectrum_bins; ++k)
      f.v[k] = -3.0 + 2.0 * unit(rng);
  }
  // target from a perturbed copy so gradients are non-degenerate
  ddsp::FeatureTrack target_track = track;
  for (auto& f : target_track.frames) {
    for (int k = 0; k < config.spectrum_bins; ++k)
      f.v[k] += unit(rng) - 0.5;
    for (int j = 0; j < config.periodicity_dims; ++j)
      f.p[j] = std::clamp(f.p[j] + 0.2 * (unit(rng) - 0.5), 0.0, 1.0);
  }
  const ddsp::AudioBuffer target =
      ddsp::synthesize(target_track, config, seed + 1);

  const double err =
      ddsp::finite_diff_check(track, target, config, seed, 1e-5, trials);
  std::cout << "max_relative_error=" << err << "\n";
  return err < 1e-4 ? kExitOk : 1;
}

int run_bench(double seconds, int repeats) {
  ddsp::VocoderConfig config;
  const int frames = static_cast<int>(
      seconds * config.sample_rate_hz / config.frame_shift + 0.5);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  ddsp::FeatureTrack track;
  track.frames.resize(frames);
  for (auto& f : track.frames) {
    f.f0 = 100.0 + 120.0 * unit(rng);
    f.p.resize(config.periodicity_dims);
    for (int j = 0; j < config.periodicity_dims; ++j)
      f.p[j] = 0.2 + 0.6 * unit(rng);
    f.v.resize(config.spectrum_bins);
    for (int k = 0; k < config.spectrum_bins; ++k) f.v[k] = -2.5 + unit(rng);
  }
  const ddsp::RtfStats stats = ddsp::bench_rtf(track, config, 7, repeats);
  const ddsp::FlopsReport report = ddsp::count_flops(config);
  std::cout << report.to_key_value();
  std::cout << "rtf_median=" << stats.median << "\n"
            << "rtf_p95=" << stats.p95 << "\n"
            << "repeats=" << stats.samples.size() << "\n";
  return kExitOk;
}

int run_flops() {
  ddsp::VocoderConfig config;
  std::cout << ddsp::count_flops(config).to_key_value();
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"DDSP source-filter vocoder"};
  app.require_subcommand(1);

  std::string features, out, audio_path, f0_path;
  std::uint64_t seed = 0;
  int iters = 2000, frames = 8, trials = 64, repeats = 5;
  double seconds = 10.0, lr = 1e-3;

  auto* synth = app.add_subcommand("synth", "Synthesize audio from features");
  synth->add_option("--features", features)->required();
  synth->add_option("--out", out)->required();
  synth->add_option("--seed", seed);

  auto* analyze =
      app.add_subcommand("analyze", "Recover P/V features from audio");
  analyze->add_option("--audio", audio_path)->required();
  analyze->add_option("--f0", f0_path)->required();
  analyze->add_option("--out", out)->required();
  analyze->add_option("--iters", iters);
  analyze->add_option("--seed", seed);
  analyze->add_option("--lr", lr);

  auto* gradcheck =
      app.add_subcommand("gradcheck", "Finite-difference gradient check");
  gradcheck->add_option("--frames", frames);
  gradcheck->add_option("--trials", trials);
  gradcheck->add_option("--seed", seed);

  auto* bench = app.add_subcommand("bench", "Real-time-factor benchmark");
  bench->add_option("--seconds", seconds);
  bench->add_option("--repeats", repeats);

  app.add_subcommand("flops", "Print the analytic FLOPS report");

  CLI11_PARSE(app, argc, argv);

  if (synth->parsed()) return run_synth(features, out, seed);
  if (analyze->parsed())
    return run_analyze(audio_path, f0_path, out, iters, seed, lr);
  if (gradcheck->parsed()) return run_gradcheck(frames, trials, seed);
  if (bench->parsed()) return run_bench(seconds, repeats);
  return run_flops();
}
