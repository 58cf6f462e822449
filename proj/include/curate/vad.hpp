#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "curate/audio.hpp"

namespace curate::vad {

enum class TrimMode { Endpoints, Concatenate };

struct VadConfig {
    double frame_ms = 30.0;
    double margin_db = 6.0;          // required rise above the estimated noise floor
    double abs_floor_dbfs = -60.0;   // frames louder than this always count as speech
    int hangover_frames = 5;
    TrimMode mode = TrimMode::Endpoints;
    double max_gap_ms = 300.0;       // Concatenate mode: gaps up to this are kept
    double min_result_s = 1.0;       // shorter trims are flagged as problematic
};

struct SpeechSegment {
    std::size_t start_sample = 0;
    std::size_t end_sample = 0;  // exclusive
};

struct VadResult {
    std::vector<SpeechSegment> segments;
    audio::AudioBuffer trimmed;
    bool flagged_short = false;
};

class EmptyAudio : public std::runtime_error {
public:
    EmptyAudio() : std::runtime_error("empty audio buffer") {}
};

audio::FrameGrid frame_grid(const VadConfig& cfg, int sample_rate);

/// Adaptive-energy speech detection over 30 ms frames. The noise floor is
/// the 10th percentile of frame levels; a frame is speech when it rises
/// margin_db above that floor or exceeds abs_floor_dbfs outright (so a clip
/// that is speech throughout is not mistaken for noise). Raw flags are
/// dilated by hangover_frames on both sides.
std::vector<std::uint8_t> detect_speech_frames(const audio::AudioBuffer& buf, const VadConfig& cfg);

/// Cut non-speech according to cfg.mode. Endpoints keeps the single span
/// from the first to the last speech frame; Concatenate merges speech runs
/// whose gaps are at most max_gap_ms and drops larger internal gaps. A
/// result shorter than min_result_s is flagged.
VadResult trim(const audio::AudioBuffer& buf, const VadConfig& cfg);

}  // namespace curate::vad
