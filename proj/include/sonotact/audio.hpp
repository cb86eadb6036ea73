#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "sonotact/errors.hpp"
#include "sonotact/fft.hpp"
#include "sonotact/tensor.hpp"
#include "sonotact/wav.hpp"

namespace sonotact {

inline constexpr double kPi = fft::kPi;

// ---------------------------------------------------------------------------
// Sweep synthesis
// ---------------------------------------------------------------------------

// Exponential sweep: x(t) = A sin(2*pi*f1*T/ln(k) * (k^(t/T) - 1)), k = f2/f1.
// Instantaneous frequency runs f1 -> f2; k == 1 degenerates to a pure tone.
inline Waveform generate_sweep(double duration_s, double f_start_hz,
                               double f_end_hz, std::uint32_t sample_rate_hz,
                               double amplitude) {
    if (!(duration_s > 0.0))
        throw Error(ErrorCode::NonPositiveDuration, "duration must be > 0");
    if (!(f_start_hz > 0.0) || f_start_hz > f_end_hz ||
        !(f_end_hz < sample_rate_hz / 2.0))
        throw Error(ErrorCode::FrequencyAboveNyquist,
                    "need 0 < f_start <= f_end < sample_rate/2");
    if (!(amplitude > 0.0) || amplitude > 1.0)
        throw Error(ErrorCode::InvalidAmplitude, "amplitude must be in (0, 1]");

    const auto n = static_cast<std::size_t>(std::llround(duration_s * sample_rate_hz));
    Waveform w;
    w.sample_rate_hz = sample_rate_hz;
    w.samples.resize(n);
    const double k = f_end_hz / f_start_hz;
    if (k == 1.0) {
        for (std::size_t i = 0; i < n; ++i) {
            const double t = static_cast<double>(i) / sample_rate_hz;
            w.samples[i] = static_cast<float>(
                amplitude * std::sin(2.0 * kPi * f_start_hz * t));
        }
    } else {
        const double lk = std::log(k);
        const double c = 2.0 * kPi * f_start_hz * duration_s / lk;
        for (std::size_t i = 0; i < n; ++i) {
            const double t = static_cast<double>(i) / sample_rate_hz;
            const double phase = c * (std::pow(k, t / duration_s) - 1.0);
            w.samples[i] = static_cast<float>(amplitude * std::sin(phase));
        }
    }
    return w;
}

// Unwrapped analytic phase of the sweep, for oracle use.
inline double sweep_phase(double t, double duration_s, double f_start_hz,
                          double f_end_hz) {
    const double k = f_end_hz / f_start_hz;
    if (k == 1.0) return 2.0 * kPi * f_start_hz * t;
    const double lk = std::log(k);
    return 2.0 * kPi * f_start_hz * duration_s / lk *
           (std::pow(k, t / duration_s) - 1.0);
}

// ---------------------------------------------------------------------------
// STFT
// ---------------------------------------------------------------------------

// Periodic Hann window of length n.
inline std::vector<double> hann_window(std::size_t n) {
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i)
        w[i] = 0.5 * (1.0 - std::cos(2.0 * kPi * static_cast<double>(i) /
                                     static_cast<double>(n)));
    return w;
}

inline std::size_t stft_frame_count(std::size_t n_samples, std::size_t window_len,
                                    std::size_t hop) {
    return (n_samples - window_len) / hop + 1;
}

// Hann-windowed magnitude-squared one-sided DFT.
// Output shape [window_len/2 + 1, n_frames], 64-bit throughout.
inline Tensor<double> stft_power(const Waveform& w, std::size_t window_len,
                                 std::size_t hop) {
    if (hop < 1) throw std::invalid_argument("hop must be >= 1");
    if (!fft::is_power_of_two(window_len))
        throw std::invalid_argument("window_len must be a power of two");
    if (window_len > w.samples.size())
        throw Error(ErrorCode::SignalTooShort,
                    "window longer than signal (" + std::to_string(window_len) +
                        " > " + std::to_string(w.samples.size()) + ")");

    const std::size_t n_bins = window_len / 2 + 1;
    const std::size_t n_frames = stft_frame_count(w.samples.size(), window_len, hop);
    const std::vector<double> win = hann_window(window_len);

    Tensor<double> power({static_cast<std::uint32_t>(n_bins),
                          static_cast<std::uint32_t>(n_frames)});
    std::vector<std::complex<double>> frame(window_len);
    for (std::size_t f = 0; f < n_frames; ++f) {
        const std::size_t start = f * hop;
        for (std::size_t i = 0; i < window_len; ++i)
            frame[i] = {static_cast<double>(w.samples[start + i]) * win[i], 0.0};
        fft::transform_radix2(frame, false);
        for (std::size_t k = 0; k < n_bins; ++k)
            power.at(k, f) = std::norm(frame[k]);
    }
    return power;
}

// ---------------------------------------------------------------------------
// Mel filterbank
// ---------------------------------------------------------------------------

inline double hz_to_mel(double f) { return 2595.0 * std::log10(1.0 + f / 700.0); }
inline double mel_to_hz(double m) { return 700.0 * (std::pow(10.0, m / 2595.0) - 1.0); }

struct MelFilterbank {
    Tensor<double> weights;  // [n_mels, n_fft_bins]
    double f_min_hz = 0.0;
    double f_max_hz = 0.0;
    // Hz centers of the first and last filters; the partition-of-unity band.
    double first_center_hz = 0.0;
    double last_center_hz = 0.0;
};

// Triangular filters, linear in Hz, with n_mels + 2 equally mel-spaced edge
// points; each filter peaks at 1.
inline MelFilterbank mel_filterbank(std::size_t n_mels, std::size_t window_len,
                                    std::uint32_t sample_rate_hz, double f_min_hz,
                                    double f_max_hz) {
    if (n_mels < 2) throw std::invalid_argument("n_mels must be >= 2");
    if (!(f_min_hz >= 0.0) || !(f_min_hz < f_max_hz) ||
        f_max_hz > sample_rate_hz / 2.0)
        throw Error(ErrorCode::InvalidBand, "need 0 <= f_min < f_max <= nyquist");

    const std::size_t n_bins = window_len / 2 + 1;
    std::vector<double> edges(n_mels + 2);
    const double mel_lo = hz_to_mel(f_min_hz);
    const double mel_hi = hz_to_mel(f_max_hz);
    for (std::size_t i = 0; i < edges.size(); ++i)
        edges[i] = mel_to_hz(mel_lo + (mel_hi - mel_lo) * static_cast<double>(i) /
                                          static_cast<double>(n_mels + 1));

    MelFilterbank fb;
    fb.weights = Tensor<double>({static_cast<std::uint32_t>(n_mels),
                                 static_cast<std::uint32_t>(n_bins)});
    fb.f_min_hz = f_min_hz;
    fb.f_max_hz = f_max_hz;
    fb.first_center_hz = edges[1];
    fb.last_center_hz = edges[n_mels];

    for (std::size_t m = 0; m < n_mels; ++m) {
        const double lo = edges[m], mid = edges[m + 1], hi = edges[m + 2];
        bool any = false;
        for (std::size_t k = 0; k < n_bins; ++k) {
            const double f = static_cast<double>(k) * sample_rate_hz /
                             static_cast<double>(window_len);
            double v = 0.0;
            if (f > lo && f < mid)
                v = (f - lo) / (mid - lo);
            else if (f == mid)
                v = 1.0;
            else if (f > mid && f < hi)
                v = (hi - f) / (hi - mid);
            fb.weights.at(m, k) = v;
            any = any || v > 0.0;
        }
        if (!any)
            throw Error(ErrorCode::InvalidBand,
                        "mel filter " + std::to_string(m) +
                            " covers no FFT bin; widen band or FFT window");
    }
    return fb;
}

// ---------------------------------------------------------------------------
// Log-mel spectrogram
// ---------------------------------------------------------------------------

struct SpectrogramConfig {
    std::size_t window_len = 2048;
    std::size_t hop = 512;
    std::size_t n_mels = 64;
    double f_min_hz = 20.0;
    double f_max_hz = 0.0;  // 0 = nyquist
};

struct MelSpectrogram {
    TensorF data;  // [n_mels, n_frames], min-max normalized to [0,1]
    std::size_t n_mels = 0;
    std::size_t n_frames = 0;
    double hop_s = 0.0;
};

// Mel-projected STFT power, log10(P + 1e-10), then per-clip min-max
// normalization. A flat clip (max == min) maps to all zeros.
inline MelSpectrogram log_mel_spectrogram(const Waveform& w,
                                          const SpectrogramConfig& cfg) {
    const double f_max =
        cfg.f_max_hz > 0.0 ? cfg.f_max_hz : w.sample_rate_hz / 2.0;
    const Tensor<double> power = stft_power(w, cfg.window_len, cfg.hop);
    const MelFilterbank fb =
        mel_filterbank(cfg.n_mels, cfg.window_len, w.sample_rate_hz, cfg.f_min_hz, f_max);

    const std::size_t n_bins = power.dims()[0];
    const std::size_t n_frames = power.dims()[1];
    Tensor<double> cells({static_cast<std::uint32_t>(cfg.n_mels),
                          static_cast<std::uint32_t>(n_frames)});
    for (std::size_t m = 0; m < cfg.n_mels; ++m) {
        for (std::size_t f = 0; f < n_frames; ++f) {
            double acc = 0.0;
            for (std::size_t k = 0; k < n_bins; ++k)
                acc += fb.weights.at(m, k) * power.at(k, f);
            cells.at(m, f) = std::log10(acc + 1e-10);
        }
    }

    double lo = cells[0], hi = cells[0];
    for (std::size_t i = 0; i < cells.size(); ++i) {
        lo = std::min(lo, cells[i]);
        hi = std::max(hi, cells[i]);
    }

    MelSpectrogram out;
    out.n_mels = cfg.n_mels;
    out.n_frames = n_frames;
    out.hop_s = static_cast<double>(cfg.hop) / w.sample_rate_hz;
    out.data = TensorF({static_cast<std::uint32_t>(cfg.n_mels),
                        static_cast<std::uint32_t>(n_frames)});
    if (hi > lo) {
        const double inv = 1.0 / (hi - lo);
        for (std::size_t i = 0; i < cells.size(); ++i)
            out.data[i] = static_cast<float>((cells[i] - lo) * inv);
    }
    return out;
}

// Per-band time-averaged log energies, without the min-max normalization.
// Feature vector for the contact-mode classifier.
inline std::vector<double> mel_band_mean_log_energies(const Waveform& w,
                                                      const SpectrogramConfig& cfg) {
    const double f_max =
        cfg.f_max_hz > 0.0 ? cfg.f_max_hz : w.sample_rate_hz / 2.0;
    const Tensor<double> power = stft_power(w, cfg.window_len, cfg.hop);
    const MelFilterbank fb =
        mel_filterbank(cfg.n_mels, cfg.window_len, w.sample_rate_hz, cfg.f_min_hz, f_max);
    const std::size_t n_bins = power.dims()[0];
    const std::size_t n_frames = power.dims()[1];
    std::vector<double> features(cfg.n_mels, 0.0);
    for (std::size_t m = 0; m < cfg.n_mels; ++m) {
        double mean = 0.0;
        for (std::size_t f = 0; f < n_frames; ++f) {
            double acc = 0.0;
            for (std::size_t k = 0; k < n_bins; ++k)
                acc += fb.weights.at(m, k) * power.at(k, f);
            mean += std::log10(acc + 1e-10);
        }
        features[m] = mean / static_cast<double>(n_frames);
    }
    return features;
}

// ---------------------------------------------------------------------------
// Bilinear resize (spectrogram image, and any single-channel grid)
// ---------------------------------------------------------------------------

// Corner-aligned bilinear resize of a 2D grid; equal dims reproduce the input.
inline TensorF resize_bilinear(const TensorF& src, std::size_t out_h,
                               std::size_t out_w) {
    if (out_h < 1 || out_w < 1)
        throw std::invalid_argument("output dims must be >= 1");
    const std::size_t in_h = src.dims()[0];
    const std::size_t in_w = src.dims()[1];
    TensorF dst({static_cast<std::uint32_t>(out_h), static_cast<std::uint32_t>(out_w)});
    const double sy = out_h > 1 ? static_cast<double>(in_h - 1) / (out_h - 1) : 0.0;
    const double sx = out_w > 1 ? static_cast<double>(in_w - 1) / (out_w - 1) : 0.0;
    for (std::size_t y = 0; y < out_h; ++y) {
        const double fy = y * sy;
        const std::size_t y0 = static_cast<std::size_t>(fy);
        const std::size_t y1 = std::min(y0 + 1, in_h - 1);
        const double wy = fy - static_cast<double>(y0);
        for (std::size_t x = 0; x < out_w; ++x) {
            const double fx = x * sx;
            const std::size_t x0 = static_cast<std::size_t>(fx);
            const std::size_t x1 = std::min(x0 + 1, in_w - 1);
            const double wx = fx - static_cast<double>(x0);
            const double v =
                (1 - wy) * ((1 - wx) * src.at(y0, x0) + wx * src.at(y0, x1)) +
                wy * ((1 - wx) * src.at(y1, x0) + wx * src.at(y1, x1));
            dst.at(y, x) = static_cast<float>(v);
        }
    }
    return dst;
}

// [1, out_h, out_w] image from a normalized mel spectrogram.
inline TensorF spectrogram_to_image(const MelSpectrogram& m, std::size_t out_h,
                                    std::size_t out_w) {
    const TensorF resized = resize_bilinear(m.data, out_h, out_w);
    TensorF img({1, static_cast<std::uint32_t>(out_h),
                 static_cast<std::uint32_t>(out_w)});
    std::copy(resized.data(), resized.data() + resized.size(), img.data());
    return img;
}

// ---------------------------------------------------------------------------
// Welch PSD
// ---------------------------------------------------------------------------

struct PsdCurve {
    std::vector<double> freqs_hz;
    std::vector<double> power;  // density, power per Hz
};

// Averaged Hann-windowed periodogram, one-sided density scaling
// |X|^2 / (fs * sum(w^2)), interior bins doubled. 64-bit accumulation.
inline PsdCurve welch_psd(const Waveform& w, std::size_t segment_len,
                          double overlap_frac) {
    if (segment_len < 2) throw std::invalid_argument("segment_len must be >= 2");
    if (!(overlap_frac >= 0.0) || overlap_frac >= 1.0)
        throw std::invalid_argument("overlap_frac must be in [0, 1)");
    if (segment_len > w.samples.size())
        throw Error(ErrorCode::SignalTooShort, "segment longer than signal");

    const std::size_t hop = std::max<std::size_t>(
        1, static_cast<std::size_t>(
               std::llround(static_cast<double>(segment_len) * (1.0 - overlap_frac))));
    const std::vector<double> win = hann_window(segment_len);
    double win_power = 0.0;
    for (double v : win) win_power += v * v;
    const double scale = 1.0 / (static_cast<double>(w.sample_rate_hz) * win_power);

    const std::size_t n_bins = segment_len / 2 + 1;
    std::vector<double> acc(n_bins, 0.0);
    std::size_t n_segments = 0;
    std::vector<std::complex<double>> seg(segment_len);
    for (std::size_t start = 0; start + segment_len <= w.samples.size();
         start += hop) {
        for (std::size_t i = 0; i < segment_len; ++i)
            seg[i] = {static_cast<double>(w.samples[start + i]) * win[i], 0.0};
        fft::forward(seg);
        for (std::size_t k = 0; k < n_bins; ++k)
            acc[k] += std::norm(seg[k]) * scale;
        ++n_segments;
    }

    PsdCurve out;
    out.freqs_hz.resize(n_bins);
    out.power.resize(n_bins);
    for (std::size_t k = 0; k < n_bins; ++k) {
        out.freqs_hz[k] = static_cast<double>(k) * w.sample_rate_hz /
                          static_cast<double>(segment_len);
        double p = acc[k] / static_cast<double>(n_segments);
        if (k != 0 && k != segment_len / 2) p *= 2.0;  // one-sided doubling
        out.power[k] = p;
    }
    return out;
}

inline void write_psd_csv(const std::string& path, const PsdCurve& psd) {
    std::ofstream f(path);
    if (!f) throw Error(ErrorCode::IoFailure, "cannot open " + path + " for write");
    f << "freq_hz,power\n";
    f.precision(12);
    for (std::size_t i = 0; i < psd.freqs_hz.size(); ++i)
        f << psd.freqs_hz[i] << "," << psd.power[i] << "\n";
    if (!f) throw Error(ErrorCode::IoFailure, "short write to " + path);
}

// Mean density over [lo_hz, hi_hz]; PSD-curve comparison helper.
inline double psd_band_mean(const PsdCurve& psd, double lo_hz, double hi_hz) {
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < psd.freqs_hz.size(); ++i) {
        if (psd.freqs_hz[i] >= lo_hz && psd.freqs_hz[i] <= hi_hz) {
            sum += psd.power[i];
            ++n;
        }
    }
    return n == 0 ? 0.0 : sum / static_cast<double>(n);
}

inline double psd_argmax_hz(const PsdCurve& psd) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < psd.power.size(); ++i)
        if (psd.power[i] > psd.power[best]) best = i;
    return psd.freqs_hz[best];
}

}  // namespace sonotact
