#include "curate/vad.hpp"

#include <algorithm>
#include <cmath>

namespace curate::vad {

namespace {

double percentile(std::vector<double> values, double q) {
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    const double pos = q / 100.0 * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    const double w = pos - static_cast<double>(lo);
    return values[lo] * (1.0 - w) + values[hi] * w;
}

struct FrameRun {
    std::size_t first = 0;
    std::size_t last = 0;  // inclusive
};

std::vector<FrameRun> speech_runs(const std::vector<std::uint8_t>& flags) {
    std::vector<FrameRun> runs;
    std::size_t i = 0;
    while (i < flags.size()) {
        if (!flags[i]) {
            ++i;
            continue;
        }
        FrameRun run{i, i};
        while (run.last + 1 < flags.size() && flags[run.last + 1]) ++run.last;
        runs.push_back(run);
        i = run.last + 1;
    }
    return runs;
}

}  // namespace

audio::FrameGrid frame_grid(const VadConfig& cfg, int sample_rate) {
    const auto frame_len = static_cast<std::size_t>(std::lround(sample_rate * cfg.frame_ms / 1000.0));
    return audio::FrameGrid(std::max<std::size_t>(frame_len, 1), std::max<std::size_t>(frame_len, 1));
}

std::vector<std::uint8_t> detect_speech_frames(const audio::AudioBuffer& buf, const VadConfig& cfg) {
    if (buf.empty()) throw EmptyAudio();
    const auto grid = frame_grid(cfg, buf.sample_rate);
    const auto levels = audio::frame_rms_dbfs(buf, grid);
    if (levels.empty()) return {};

    const double noise_floor = percentile(levels, 10.0);
    const double relative_thr = noise_floor + cfg.margin_db;

    std::vector<std::uint8_t> raw(levels.size(), 0);
    for (std::size_t i = 0; i < levels.size(); ++i) {
        raw[i] = (levels[i] > relative_thr || levels[i] > cfg.abs_floor_dbfs) ? 1 : 0;
    }

    if (cfg.hangover_frames <= 0) return raw;

    const auto h = static_cast<std::size_t>(cfg.hangover_frames);
    std::vector<std::uint8_t> dilated(raw.size(), 0);
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (!raw[i]) continue;
        const std::size_t lo = i > h ? i - h : 0;
        const std::size_t hi = std::min(i + h, raw.size() - 1);
        for (std::size_t j = lo; j <= hi; ++j) dilated[j] = 1;
    }
    return dilated;
}

VadResult trim(const audio::AudioBuffer& buf, const VadConfig& cfg) {
    if (buf.empty()) throw EmptyAudio();
    const auto grid = frame_grid(cfg, buf.sample_rate);
    const auto flags = detect_speech_frames(buf, cfg);
    const std::size_t frame_count = flags.size();

    VadResult result;
    result.trimmed.sample_rate = buf.sample_rate;

    auto run_bounds = [&](const FrameRun& run) -> SpeechSegment {
        SpeechSegment seg;
        seg.start_sample = run.first * grid.frame_len;
        seg.end_sample = (run.last + 1) * grid.frame_len;
        // the tail shorter than a frame is unclassified; keep it when the
        // final frame is speech
        if (run.last + 1 == frame_count) seg.end_sample = buf.samples.size();
        return seg;
    };

    auto runs = speech_runs(flags);
    if (!runs.empty()) {
        std::vector<FrameRun> kept;
        if (cfg.mode == TrimMode::Endpoints) {
            kept.push_back(FrameRun{runs.front().first, runs.back().last});
        } else {
            const auto max_gap = static_cast<std::size_t>(std::lround(cfg.max_gap_ms / cfg.frame_ms));
            kept.push_back(runs.front());
            for (std::size_t i = 1; i < runs.size(); ++i) {
                const std::size_t gap = runs[i].first - kept.back().last - 1;
                if (gap <= max_gap) {
                    kept.back().last = runs[i].last;
                } else {
                    kept.push_back(runs[i]);
                }
            }
        }
        for (const auto& run : kept) {
            const auto seg = run_bounds(run);
            result.segments.push_back(seg);
            result.trimmed.samples.insert(result.trimmed.samples.end(),
                                          buf.samples.begin() + static_cast<std::ptrdiff_t>(seg.start_sample),
                                          buf.samples.begin() + static_cast<std::ptrdiff_t>(seg.end_sample));
        }
    }

    result.flagged_short = result.trimmed.duration_s() < cfg.min_result_s;
    return result;
}

}  // namespace curate::vad
