#include "mrmix/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include "mrmix/errors.hpp"

namespace mrmix {

namespace {

void put16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xff));
}

void put_tag(std::vector<std::uint8_t>& out, const char* tag) { out.insert(out.end(), tag, tag + 4); }

std::uint16_t get16(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint16_t>(b[at] | (b[at + 1] << 8));
}

std::uint32_t get32(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint32_t>(b[at]) | (static_cast<std::uint32_t>(b[at + 1]) << 8) |
         (static_cast<std::uint32_t>(b[at + 2]) << 16) | (static_cast<std::uint32_t>(b[at + 3]) << 24);
}

bool tag_is(std::span<const std::uint8_t> b, std::size_t at, const char* tag) {
  return std::memcmp(b.data() + at, tag, 4) == 0;
}

std::vector<std::uint8_t> header(int channels, std::size_t frames) {
  const std::uint32_t data_bytes = static_cast<std::uint32_t>(frames * channels * 2);
  std::vector<std::uint8_t> out;
  out.reserve(kWavHeaderBytes + data_bytes);
  put_tag(out, "RIFF");
  put32(out, 36 + data_bytes);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put32(out, 16);
  put16(out, 1);  // PCM
  put16(out, static_cast<std::uint16_t>(channels));
  put32(out, kSampleRate);
  put32(out, static_cast<std::uint32_t>(kSampleRate * channels * 2));
  put16(out, static_cast<std::uint16_t>(channels * 2));
  put16(out, 16);
  put_tag(out, "data");
  put32(out, data_bytes);
  return out;
}

void put_sample(std::vector<std::uint8_t>& out, double x) {
  if (!std::isfinite(x)) throw Error("wav: non-finite sample");
  put16(out, static_cast<std::uint16_t>(quantize_sample(x)));
}

void write_bytes(const std::vector<std::uint8_t>& bytes, const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path.string() + " for writing");
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw Error("write failed: " + path.string());
}

}  // namespace

std::int16_t quantize_sample(double x) {
  return static_cast<std::int16_t>(std::lround(std::clamp(x, -1.0, 1.0) * 32767.0));
}

std::vector<std::uint8_t> encode_wav(const dsp::StereoBuffer& buffer) {
  if (buffer.left.size() != buffer.right.size()) throw Error("wav: channel length mismatch");
  std::vector<std::uint8_t> out = header(2, buffer.frames());
  for (std::size_t i = 0; i < buffer.frames(); ++i) {
    put_sample(out, buffer.left[i]);
    put_sample(out, buffer.right[i]);
  }
  return out;
}

std::vector<std::uint8_t> encode_wav(const AudioClip& clip) {
  if (clip.channels != 1 && clip.channels != 2) throw Error("wav: clips must be mono or stereo");
  std::vector<std::uint8_t> out = header(clip.channels, clip.frames());
  for (float s : clip.samples) put_sample(out, s);
  return out;
}

void write_wav(const dsp::StereoBuffer& buffer, const std::filesystem::path& path) {
  write_bytes(encode_wav(buffer), path);
}

void write_wav(const AudioClip& clip, const std::filesystem::path& path) {
  write_bytes(encode_wav(clip), path);
}

AudioClip decode_wav(std::span<const std::uint8_t> b, std::string id) {
  if (b.size() < 12 || !tag_is(b, 0, "RIFF") || !tag_is(b, 8, "WAVE"))
    throw Error("wav: not a RIFF/WAVE file");
  int channels = 0;
  bool have_fmt = false;
  std::size_t at = 12;
  while (at + 8 <= b.size()) {
    const std::uint32_t size = get32(b, at + 4);
    const std::size_t body = at + 8;
    if (body + size > b.size()) throw Error("wav: truncated chunk");
    if (tag_is(b, at, "fmt ")) {
      if (size < 16) throw Error("wav: short fmt chunk");
      const std::uint16_t format = get16(b, body);
      channels = get16(b, body + 2);
      const std::uint32_t rate = get32(b, body + 4);
      const std::uint16_t bits = get16(b, body + 14);
      if (format != 1 || bits != 16) throw Error("wav: only 16-bit PCM is supported");
      if (channels != 1 && channels != 2) throw Error("wav: only mono or stereo is supported");
      if (rate != static_cast<std::uint32_t>(kSampleRate))
        throw Error("wav: sample rate " + std::to_string(rate) + " Hz, expected " +
                    std::to_string(kSampleRate));
      have_fmt = true;
    } else if (tag_is(b, at, "data")) {
      if (!have_fmt) throw Error("wav: data chunk before fmt chunk");
      AudioClip clip;
      clip.id = std::move(id);
      clip.channels = channels;
      const std::size_t count = size / 2;
      clip.samples.resize(count - count % channels);
      for (std::size_t i = 0; i < clip.samples.size(); ++i)
        clip.samples[i] = static_cast<float>(
            std::max(-1.0, static_cast<std::int16_t>(get16(b, body + 2 * i)) / 32767.0));
      return clip;
    }
    at = body + size + (size & 1);
  }
  throw Error("wav: no data chunk");
}

AudioClip read_wav(const std::filesystem::path& path, std::string id) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path.string());
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)),
                                        std::istreambuf_iterator<char>());
  if (id.empty()) id = path.stem().string();
  return decode_wav(bytes, std::move(id));
}

}  // namespace mrmix
