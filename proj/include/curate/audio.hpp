#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <vector>

namespace curate::audio {

/// Mono audio in [-1, 1]. The unit every DSP stage works on.
struct AudioBuffer {
    std::vector<double> samples;
    int sample_rate = 22050;

    double duration_s() const {
        return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate : 0.0;
    }
    bool empty() const { return samples.empty(); }
};

/// Fixed-size analysis frames. frame_len >= hop >= 1; frames that would
/// run past the end of the buffer are not counted.
struct FrameGrid {
    std::size_t frame_len = 0;
    std::size_t hop = 0;

    FrameGrid() = default;
    FrameGrid(std::size_t frame_len_, std::size_t hop_);

    std::size_t count_for(std::size_t n_samples) const {
        if (n_samples < frame_len) return 0;
        return (n_samples - frame_len) / hop + 1;
    }
    std::size_t frame_start(std::size_t i) const { return i * hop; }
};

class UnsupportedFormat : public std::runtime_error {
public:
    explicit UnsupportedFormat(const std::string& what) : std::runtime_error(what) {}
};

class TruncatedFile : public std::runtime_error {
public:
    explicit TruncatedFile(const std::string& what) : std::runtime_error(what) {}
};

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// Decode a RIFF/WAVE container holding 16-bit PCM. Multi-channel input is
/// averaged down to mono; samples are scaled by 1/32768.
AudioBuffer decode_wav(const std::vector<std::uint8_t>& bytes);

AudioBuffer load_wav(const std::filesystem::path& path);

/// Encode as 16-bit PCM mono at buf.sample_rate. Samples are clamped to
/// [-1, 1] and rounded to the nearest integer level.
std::vector<std::uint8_t> encode_wav(const AudioBuffer& buf);

void write_wav(const AudioBuffer& buf, const std::filesystem::path& path);

/// Band-limited rate conversion: Kaiser-windowed sinc (beta = 8.6), 64 taps
/// per phase, cutoff 0.45 * min(input, output) rate. Output length is
/// round(len * target / input). Equal rates return the input unchanged.
AudioBuffer resample(const AudioBuffer& buf, int target_rate);

/// Per-frame RMS level in dBFS: 20*log10(max(rms, 1e-9)). A silent frame
/// reports the -180 dBFS floor.
std::vector<double> frame_rms_dbfs(const AudioBuffer& buf, const FrameGrid& grid);

}  // namespace curate::audio
