#include "curate/audio.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

namespace curate::audio {

FrameGrid::FrameGrid(std::size_t frame_len_, std::size_t hop_) : frame_len(frame_len_), hop(hop_) {
    if (hop == 0 || frame_len < hop) throw std::invalid_argument("FrameGrid: need frame_len >= hop >= 1");
}

namespace {

std::uint32_t read_u32le(const std::uint8_t* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t read_u16le(const std::uint8_t* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void put_u32le(std::vector<std::uint8_t>& v, std::uint32_t x) {
    v.push_back(static_cast<std::uint8_t>(x & 0xff));
    v.push_back(static_cast<std::uint8_t>((x >> 8) & 0xff));
    v.push_back(static_cast<std::uint8_t>((x >> 16) & 0xff));
    v.push_back(static_cast<std::uint8_t>((x >> 24) & 0xff));
}

void put_u16le(std::vector<std::uint8_t>& v, std::uint16_t x) {
    v.push_back(static_cast<std::uint8_t>(x & 0xff));
    v.push_back(static_cast<std::uint8_t>((x >> 8) & 0xff));
}

// Zeroth-order modified Bessel function, power series.
double bessel_i0(double x) {
    double sum = 1.0;
    double term = 1.0;
    const double half_x = x / 2.0;
    for (int k = 1; k < 64; ++k) {
        term *= (half_x / k) * (half_x / k);
        sum += term;
        if (term < sum * 1e-16) break;
    }
    return sum;
}

constexpr int kTapsPerPhase = 64;
constexpr int kPhaseSteps = 512;
constexpr double kKaiserBeta = 8.6;

// One row of filter coefficients for a fractional sample offset in [0, 1].
// Row k covers input offsets t - j = frac + (half - 1) - k for k = 0..63.
std::vector<double> kernel_row(double frac, double cutoff) {
    const int half = kTapsPerPhase / 2;
    std::vector<double> row(kTapsPerPhase);
    const double i0_beta = bessel_i0(kKaiserBeta);
    double sum = 0.0;
    for (int k = 0; k < kTapsPerPhase; ++k) {
        const double d = frac + (half - 1) - k;
        const double u = d / half;
        double w = 0.0;
        if (std::abs(u) <= 1.0) {
            w = bessel_i0(kKaiserBeta * std::sqrt(1.0 - u * u)) / i0_beta;
        }
        const double arg = 2.0 * cutoff * d;
        const double s = arg == 0.0 ? 1.0 : std::sin(M_PI * arg) / (M_PI * arg);
        row[k] = 2.0 * cutoff * s * w;
        sum += row[k];
    }
    // Unity DC gain per phase keeps tone amplitudes flat across fractions.
    if (sum != 0.0) {
        for (double& c : row) c /= sum;
    }
    return row;
}

}  // namespace

AudioBuffer decode_wav(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < 12) throw TruncatedFile("WAV shorter than RIFF header");
    if (std::memcmp(bytes.data(), "RIFF", 4) != 0 || std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
        throw UnsupportedFormat("not a RIFF/WAVE container");

    bool have_fmt = false;
    std::uint16_t format = 0, channels = 0, bits = 0;
    std::uint32_t rate = 0;
    const std::uint8_t* data = nullptr;
    std::uint32_t data_len = 0;

    std::size_t pos = 12;
    while (pos + 8 <= bytes.size()) {
        const char* id = reinterpret_cast<const char*>(bytes.data() + pos);
        const std::uint32_t chunk_len = read_u32le(bytes.data() + pos + 4);
        pos += 8;
        if (pos + chunk_len > bytes.size()) throw TruncatedFile("chunk runs past end of file");
        if (std::memcmp(id, "fmt ", 4) == 0) {
            if (chunk_len < 16) throw TruncatedFile("fmt chunk too small");
            format = read_u16le(bytes.data() + pos);
            channels = read_u16le(bytes.data() + pos + 2);
            rate = read_u32le(bytes.data() + pos + 4);
            bits = read_u16le(bytes.data() + pos + 14);
            have_fmt = true;
        } else if (std::memcmp(id, "data", 4) == 0) {
            data = bytes.data() + pos;
            data_len = chunk_len;
        }
        pos += chunk_len + (chunk_len & 1);  // chunks are word-aligned
    }

    if (!have_fmt) throw UnsupportedFormat("missing fmt chunk");
    if (data == nullptr) throw UnsupportedFormat("missing data chunk");
    if (format != 1 || bits != 16) throw UnsupportedFormat("only 16-bit PCM is supported");
    if (channels == 0 || rate == 0) throw UnsupportedFormat("bad fmt fields");

    const std::size_t bytes_per_frame = 2u * channels;
    const std::size_t n_frames = data_len / bytes_per_frame;

    AudioBuffer buf;
    buf.sample_rate = static_cast<int>(rate);
    buf.samples.resize(n_frames);
    for (std::size_t i = 0; i < n_frames; ++i) {
        double acc = 0.0;
        for (std::uint16_t c = 0; c < channels; ++c) {
            const std::uint8_t* p = data + i * bytes_per_frame + 2u * c;
            const std::int16_t s = static_cast<std::int16_t>(p[0] | (p[1] << 8));
            acc += s;
        }
        buf.samples[i] = acc / channels / 32768.0;
    }
    return buf;
}

AudioBuffer load_wav(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    return decode_wav(bytes);
}

std::vector<std::uint8_t> encode_wav(const AudioBuffer& buf) {
    const std::uint32_t n = static_cast<std::uint32_t>(buf.samples.size());
    const std::uint32_t data_len = n * 2;
    std::vector<std::uint8_t> out;
    out.reserve(44 + data_len);
    out.insert(out.end(), {'R', 'I', 'F', 'F'});
    put_u32le(out, 36 + data_len);
    out.insert(out.end(), {'W', 'A', 'V', 'E'});
    out.insert(out.end(), {'f', 'm', 't', ' '});
    put_u32le(out, 16);
    put_u16le(out, 1);  // PCM
    put_u16le(out, 1);  // mono
    put_u32le(out, static_cast<std::uint32_t>(buf.sample_rate));
    put_u32le(out, static_cast<std::uint32_t>(buf.sample_rate) * 2);
    put_u16le(out, 2);
    put_u16le(out, 16);
    out.insert(out.end(), {'d', 'a', 't', 'a'});
    put_u32le(out, data_len);
    for (double s : buf.samples) {
        const double clamped = std::clamp(s, -1.0, 1.0);
        long v = std::lround(clamped * 32768.0);
        v = std::clamp(v, -32768L, 32767L);
        put_u16le(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(v)));
    }
    return out;
}

void write_wav(const AudioBuffer& buf, const std::filesystem::path& path) {
    const auto bytes = encode_wav(buf);
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open " + path.string() + " for writing");
    f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!f) throw IoError("short write to " + path.string());
}

AudioBuffer resample(const AudioBuffer& buf, int target_rate) {
    if (target_rate <= 0) throw std::invalid_argument("resample: target_rate must be positive");
    if (buf.sample_rate <= 0) throw std::invalid_argument("resample: source rate must be positive");
    if (target_rate == buf.sample_rate) return buf;

    const double in_rate = buf.sample_rate;
    const double out_rate = target_rate;
    const double cutoff_hz = 0.45 * std::min(in_rate, out_rate);
    const double cutoff = cutoff_hz / in_rate;  // cycles per input sample

    // Phase table with one extra row so frac ~ 1.0 interpolates cleanly.
    std::vector<std::vector<double>> table(kPhaseSteps + 1);
    for (int p = 0; p <= kPhaseSteps; ++p) {
        table[p] = kernel_row(static_cast<double>(p) / kPhaseSteps, cutoff);
    }

    const std::size_t in_len = buf.samples.size();
    const std::size_t out_len = static_cast<std::size_t>(std::llround(static_cast<double>(in_len) * out_rate / in_rate));

    AudioBuffer out;
    out.sample_rate = target_rate;
    out.samples.resize(out_len, 0.0);

    const int half = kTapsPerPhase / 2;
    const double step = in_rate / out_rate;
    for (std::size_t m = 0; m < out_len; ++m) {
        const double t = m * step;
        const auto i0 = static_cast<std::int64_t>(std::floor(t));
        const double frac = t - static_cast<double>(i0);
        const double fp = frac * kPhaseSteps;
        const int p = std::min(static_cast<int>(fp), kPhaseSteps - 1);
        const double blend = fp - p;
        const auto& row_a = table[p];
        const auto& row_b = table[p + 1];
        double acc = 0.0;
        for (int k = 0; k < kTapsPerPhase; ++k) {
            const std::int64_t j = i0 - (half - 1) + k;
            if (j < 0 || j >= static_cast<std::int64_t>(in_len)) continue;
            const double c = row_a[k] + blend * (row_b[k] - row_a[k]);
            acc += c * buf.samples[static_cast<std::size_t>(j)];
        }
        out.samples[m] = std::clamp(acc, -1.0, 1.0);
    }
    return out;
}

std::vector<double> frame_rms_dbfs(const AudioBuffer& buf, const FrameGrid& grid) {
    const std::size_t count = grid.count_for(buf.samples.size());
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t start = grid.frame_start(i);
        double acc = 0.0;
        for (std::size_t j = 0; j < grid.frame_len; ++j) {
            const double s = buf.samples[start + j];
            acc += s * s;
        }
        const double rms = std::sqrt(acc / grid.frame_len);
        out[i] = 20.0 * std::log10(std::max(rms, 1e-9));
    }
    return out;
}

}  // namespace curate::audio
