#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "sonotact/errors.hpp"

namespace sonotact {

struct Waveform {
    std::vector<float> samples;
    std::uint32_t sample_rate_hz = 0;

    double duration_s() const {
        return sample_rate_hz == 0
                   ? 0.0
                   : static_cast<double>(samples.size()) / sample_rate_hz;
    }
};

namespace wav_detail {

inline std::uint16_t rd_u16(const unsigned char* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}
inline std::uint32_t rd_u32(const unsigned char* p) {
    return std::uint32_t(p[0]) | (std::uint32_t(p[1]) << 8) |
           (std::uint32_t(p[2]) << 16) | (std::uint32_t(p[3]) << 24);
}
inline void wr_u16(std::string& s, std::uint16_t v) {
    s.push_back(static_cast<char>(v & 0xFF));
    s.push_back(static_cast<char>(v >> 8));
}
inline void wr_u32(std::string& s, std::uint32_t v) {
    s.push_back(static_cast<char>(v & 0xFF));
    s.push_back(static_cast<char>((v >> 8) & 0xFF));
    s.push_back(static_cast<char>((v >> 16) & 0xFF));
    s.push_back(static_cast<char>((v >> 24) & 0xFF));
}

}  // namespace wav_detail

// RIFF/WAVE reader for PCM 16-bit and IEEE-float 32-bit. Multichannel input
// is averaged down to mono.
inline Waveform read_wav(const std::string& path) {
    using namespace wav_detail;
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::UnreadableWav, "cannot open " + path);
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
    if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
        std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
        throw Error(ErrorCode::UnreadableWav, path + " is not a RIFF/WAVE file");

    std::uint16_t format = 0, channels = 0, bits = 0;
    std::uint32_t sample_rate = 0;
    const unsigned char* data_ptr = nullptr;
    std::size_t data_len = 0;

    std::size_t pos = 12;
    while (pos + 8 <= bytes.size()) {
        const unsigned char* hdr = bytes.data() + pos;
        const std::uint32_t chunk_len = rd_u32(hdr + 4);
        const unsigned char* body = hdr + 8;
        if (pos + 8 + chunk_len > bytes.size())
            throw Error(ErrorCode::UnreadableWav, path + ": chunk overruns file");
        if (std::memcmp(hdr, "fmt ", 4) == 0) {
            if (chunk_len < 16)
                throw Error(ErrorCode::UnreadableWav, path + ": fmt chunk too small");
            format = rd_u16(body);
            channels = rd_u16(body + 2);
            sample_rate = rd_u32(body + 4);
            bits = rd_u16(body + 14);
        } else if (std::memcmp(hdr, "data", 4) == 0) {
            data_ptr = body;
            data_len = chunk_len;
        }
        pos += 8 + chunk_len + (chunk_len & 1);  // chunks are word-aligned
    }

    if (format == 0 || data_ptr == nullptr)
        throw Error(ErrorCode::UnreadableWav, path + ": missing fmt or data chunk");
    if (channels == 0 || sample_rate == 0)
        throw Error(ErrorCode::UnreadableWav, path + ": degenerate fmt chunk");
    const bool pcm16 = format == 1 && bits == 16;
    const bool f32 = format == 3 && bits == 32;
    if (!pcm16 && !f32)
        throw Error(ErrorCode::UnreadableWav,
                    path + ": only PCM16 and IEEE-float32 are supported");

    const std::size_t bytes_per_sample = bits / 8u;
    const std::size_t frame_bytes = bytes_per_sample * channels;
    const std::size_t n_frames = data_len / frame_bytes;
    if (n_frames == 0)
        throw Error(ErrorCode::UnreadableWav, path + ": empty data chunk");

    Waveform w;
    w.sample_rate_hz = sample_rate;
    w.samples.resize(n_frames);
    for (std::size_t i = 0; i < n_frames; ++i) {
        double acc = 0.0;
        for (std::uint16_t c = 0; c < channels; ++c) {
            const unsigned char* s = data_ptr + i * frame_bytes + c * bytes_per_sample;
            if (pcm16) {
                const auto v = static_cast<std::int16_t>(rd_u16(s));
                acc += static_cast<double>(v) / 32768.0;
            } else {
                float v;
                std::memcpy(&v, s, 4);
                acc += static_cast<double>(v);
            }
        }
        w.samples[i] = static_cast<float>(acc / channels);
    }
    return w;
}

enum class WavEncoding { Pcm16, Float32 };

inline void write_wav(const std::string& path, const Waveform& w,
                      WavEncoding enc = WavEncoding::Float32) {
    using namespace wav_detail;
    if (w.samples.empty() || w.sample_rate_hz == 0)
        throw Error(ErrorCode::IoFailure, "refusing to write empty waveform");

    const std::uint16_t bits = enc == WavEncoding::Pcm16 ? 16 : 32;
    const std::uint16_t format = enc == WavEncoding::Pcm16 ? 1 : 3;
    const std::uint32_t data_len =
        static_cast<std::uint32_t>(w.samples.size() * (bits / 8u));

    std::string out;
    out.reserve(44 + data_len);
    out.append("RIFF", 4);
    wr_u32(out, 36 + data_len);
    out.append("WAVE", 4);
    out.append("fmt ", 4);
    wr_u32(out, 16);
    wr_u16(out, format);
    wr_u16(out, 1);  // mono
    wr_u32(out, w.sample_rate_hz);
    wr_u32(out, w.sample_rate_hz * (bits / 8u));
    wr_u16(out, bits / 8u);
    wr_u16(out, bits);
    out.append("data", 4);
    wr_u32(out, data_len);
    if (enc == WavEncoding::Pcm16) {
        for (float v : w.samples) {
            const double clamped = std::min(1.0, std::max(-1.0, double(v)));
            const auto q = static_cast<std::int16_t>(
                std::lrint(clamped * 32767.0));
            wr_u16(out, static_cast<std::uint16_t>(q));
        }
    } else {
        for (float v : w.samples) {
            char raw[4];
            std::memcpy(raw, &v, 4);
            out.append(raw, 4);
        }
    }

    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::IoFailure, "cannot open " + path + " for write");
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!f) throw Error(ErrorCode::IoFailure, "short write to " + path);
}

}  // namespace sonotact
