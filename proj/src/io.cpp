#include "ddsp/io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

static_assert(std::endian::native == std::endian::little,
              "file formats assume a little-endian host");

namespace ddsp::io {

namespace {

void write_u32(std::ostream& os, std::uint32_t v) {
  os.write(reinterpret_cast<const char*>(&v), 4);
}

std::uint32_t read_u32(std::istream& is) {
  std::uint32_t v = 0;
  is.read(reinterpret_cast<char*>(&v), 4);
  if (!is) throw std::runtime_error("unexpected end of file");
  return v;
}

void write_f32(std::ostream& os, float v) {
  os.write(reinterpret_cast<const char*>(&v), 4);
}

float read_f32(std::istream& is) {
  float v = 0;
  is.read(reinterpret_cast<char*>(&v), 4);
  if (!is) throw std::runtime_error("unexpected end of file");
  return v;
}

}  // namespace

void write_feature_file(const std::string& path, const FeatureTrack& track,
                        const VocoderConfig& config) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os.write(kFeatureMagic, 8);
  write_u32(os, kFeatureVersion);
  write_u32(os, static_cast<std::uint32_t>(track.frame_count()));
  write_u32(os, static_cast<std::uint32_t>(config.periodicity_dims));
  write_u32(os, static_cast<std::uint32_t>(config.spectrum_bins));
  write_u32(os, static_cast<std::uint32_t>(config.sample_rate_hz));
  write_u32(os, static_cast<std::uint32_t>(config.frame_shift));
  for (const FeatureFrame& f : track.frames) {
    write_f32(os, static_cast<float>(f.f0));
    for (int j = 0; j < f.p.size(); ++j)
      write_f32(os, static_cast<float>(f.p[j]));
    for (int k = 0; k < f.v.size(); ++k)
      write_f32(os, static_cast<float>(f.v[k]));
  }
  if (!os) throw std::runtime_error("write failed: " + path);
}

FeatureTrack read_feature_file(const std::string& path,
                               const VocoderConfig& config) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open: " + path);
  char magic[8];
  is.read(magic, 8);
  if (!is || std::memcmp(magic, kFeatureMagic, 8) != 0)
    throw std::runtime_error("bad magic bytes in " + path);
  const std::uint32_t version = read_u32(is);
  if (version != kFeatureVersion)
    throw std::runtime_error("unsupported feature file version");
  const std::uint32_t frames = read_u32(is);
  const std::uint32_t pd = read_u32(is);
  const std::uint32_t vd = read_u32(is);
  const std::uint32_t sr = read_u32(is);
  const std::uint32_t shift = read_u32(is);
  if (pd != static_cast<std::uint32_t>(config.periodicity_dims) ||
      vd != static_cast<std::uint32_t>(config.spectrum_bins))
    throw std::runtime_error("feature dimensions do not match config");
  if (sr != static_cast<std::uint32_t>(config.sample_rate_hz) ||
      shift != static_cast<std::uint32_t>(config.frame_shift))
    throw std::runtime_error("sample rate / frame shift mismatch");

  FeatureTrack track;
  track.frames.resize(frames);
  for (std::uint32_t t = 0; t < frames; ++t) {
    FeatureFrame& f = track.frames[t];
    f.f0 = read_f32(is);
    f.p.resize(pd);
    for (std::uint32_t j = 0; j < pd; ++j) f.p[j] = read_f32(is);
    f.v.resize(vd);
    for (std::uint32_t k = 0; k < vd; ++k) f.v[k] = read_f32(is);
  }
  return track;
}

void write_wav(const std::string& path, const AudioBuffer& audio) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  const std::uint32_t n = static_cast<std::uint32_t>(audio.length());
  const std::uint32_t data_bytes = n * 2;
  const std::uint32_t sr = static_cast<std::uint32_t>(audio.sample_rate_hz);
  os.write("RIFF", 4);
  write_u32(os, 36 + data_bytes);
  os.write("WAVE", 4);
  os.write("fmt ", 4);
  write_u32(os, 16);
  const std::uint16_t pcm = 1, channels = 1, block_align = 2, bits = 16;
  os.write(reinterpret_cast<const char*>(&pcm), 2);
  os.write(reinterpret_cast<const char*>(&channels), 2);
  write_u32(os, sr);
  write_u32(os, sr * 2);  // byte rate
  os.write(reinterpret_cast<const char*>(&block_align), 2);
  os.write(reinterpret_cast<const char*>(&bits), 2);
  os.write("data", 4);
  write_u32(os, data_bytes);
  for (std::uint32_t i = 0; i < n; ++i) {
    double s = audio.samples[i];
    s = std::min(1.0, std::max(-1.0, s));
    const double scaled = s * 32767.0;
    const std::int16_t q = static_cast<std::int16_t>(
        scaled >= 0.0 ? std::floor(scaled + 0.5) : std::ceil(scaled - 0.5));
    os.write(reinterpret_cast<const char*>(&q), 2);
  }
  if (!os) throw std::runtime_error("write failed: " + path);
}

AudioBuffer read_wav(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open: " + path);
  char tag[4];
  is.read(tag, 4);
  if (!is || std::memcmp(tag, "RIFF", 4) != 0)
    throw std::runtime_error("not a RIFF file: " + path);
  read_u32(is);  // riff size
  is.read(tag, 4);
  if (!is || std::memcmp(tag, "WAVE", 4) != 0)
    throw std::runtime_error("not a WAVE file: " + path);

  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t sample_rate = 0;
  AudioBuffer audio;
  bool got_fmt = false;
  while (is.read(tag, 4)) {
    const std::uint32_t chunk = read_u32(is);
    if (std::memcmp(tag, "fmt ", 4) == 0) {
      is.read(reinterpret_cast<char*>(&format), 2);
      is.read(reinterpret_cast<char*>(&channels), 2);
      sample_rate = read_u32(is);
      read_u32(is);  // byte rate
      std::uint16_t block_align;
      is.read(reinterpret_cast<char*>(&block_align), 2);
      is.read(reinterpret_cast<char*>(&bits), 2);
      if (chunk > 16) is.seekg(chunk - 16, std::ios::cur);
      got_fmt = true;
    } else if (std::memcmp(tag, "data", 4) == 0) {
      if (!got_fmt) throw std::runtime_error("data chunk before fmt");
      if (format != 1 || bits != 16)
        throw std::runtime_error("only PCM 16-bit WAV is supported");
      if (channels != 1) throw std::runtime_error("only mono WAV is supported");
      const std::uint32_t n = chunk / 2;
      audio.samples.resize(n);
      audio.sample_rate_hz = static_cast<int>(sample_rate);
      for (std::uint32_t i = 0; i < n; ++i) {
        std::int16_t q;
        is.read(reinterpret_cast<char*>(&q), 2);
        if (!is) throw std::runtime_error("truncated data chunk");
        audio.samples[i] = q / 32767.0;
      }
      return audio;
    } else {
      is.seekg(chunk + (chunk & 1), std::ios::cur);
    }
  }
  throw std::runtime_error("no data chunk in " + path);
}

std::vector<double> read_f0_text(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open: " + path);
  std::vector<double> out;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    double v;
    if (!(ls >> v)) throw std::runtime_error("bad F0 line: " + line);
    out.push_back(v);
  }
  return out;
}

void write_loss_history(const std::string& path,
                        const std::vector<double>& history) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os.precision(12);
  for (size_t i = 0; i < history.size(); ++i)
    os << i << " " << history[i] << "\n";
}

}  // namespace ddsp::io
