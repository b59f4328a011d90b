#pragma once

// 16-bit PCM RIFF/WAVE at kSampleRate.

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "mrmix/dsp.hpp"
#include "mrmix/scene.hpp"

namespace mrmix {

inline constexpr std::size_t kWavHeaderBytes = 44;

/// x in [-1, 1] to lround(x * 32767). Out-of-range input is clamped.
std::int16_t quantize_sample(double x);

/// Stereo, 16-bit, little-endian. Throws Error on non-finite samples.
std::vector<std::uint8_t> encode_wav(const dsp::StereoBuffer& buffer);
std::vector<std::uint8_t> encode_wav(const AudioClip& clip);

void write_wav(const dsp::StereoBuffer& buffer, const std::filesystem::path& path);
void write_wav(const AudioClip& clip, const std::filesystem::path& path);

/// Accepts 16-bit PCM, one or two channels, at kSampleRate only. Samples are
/// q / 32767.
AudioClip decode_wav(std::span<const std::uint8_t> bytes, std::string id = {});
AudioClip read_wav(const std::filesystem::path& path, std::string id = {});

}  // namespace mrmix
