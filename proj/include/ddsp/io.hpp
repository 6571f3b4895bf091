#pragma once

#include <string>
#include <vector>

#include "ddsp/core.hpp"

namespace ddsp::io {

// Binary feature file. Header: magic "DDSPFEAT", then u32 fields
// (version, frame count, periodicity dims, filter dims, sample rate,
// frame shift), all little-endian. Body: per frame 270 little-endian
// 32-bit floats: f0, p[12], v[257].
inline constexpr char kFeatureMagic[8] = {'D', 'D', 'S', 'P',
                                          'F', 'E', 'A', 'T'};
inline constexpr std::uint32_t kFeatureVersion = 1;

void write_feature_file(const std::string& path, const FeatureTrack& track,
                        const VocoderConfig& config);
FeatureTrack read_feature_file(const std::string& path,
                               const VocoderConfig& config);

// RIFF/WAVE, PCM 16-bit signed little-endian, mono. Samples are clipped
// to [-1, 1] and quantized with round-half-away-from-zero.
void write_wav(const std::string& path, const AudioBuffer& audio);
AudioBuffer read_wav(const std::string& path);

// Plain text, one F0 value (Hz) per line.
std::vector<double> read_f0_text(const std::string& path);
void write_loss_history(const std::string& path,
                        const std::vector<double>& history);

}  // namespace ddsp::io
