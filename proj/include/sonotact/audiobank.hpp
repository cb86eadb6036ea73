#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "sonotact/audio.hpp"
#include "sonotact/errors.hpp"
#include "sonotact/hash.hpp"
#include "sonotact/rng.hpp"
#include "sonotact/wav.hpp"

namespace sonotact {

// ---------------------------------------------------------------------------
// Contact labels
// ---------------------------------------------------------------------------

enum class ContactLabel : int { Free = 0, Point = 1, Line = 2, Patch = 3 };

inline constexpr int kNumLabels = 4;

inline const char* label_name(ContactLabel l) {
    switch (l) {
        case ContactLabel::Free:  return "free";
        case ContactLabel::Point: return "point";
        case ContactLabel::Line:  return "line";
        case ContactLabel::Patch: return "patch";
    }
    return "?";
}

inline ContactLabel parse_label(const std::string& s) {
    if (s == "free") return ContactLabel::Free;
    if (s == "point") return ContactLabel::Point;
    if (s == "line") return ContactLabel::Line;
    if (s == "patch") return ContactLabel::Patch;
    throw Error(ErrorCode::MissingLabel, "unknown contact label '" + s + "'");
}

inline const std::array<ContactLabel, 4> kAllLabels = {
    ContactLabel::Free, ContactLabel::Point, ContactLabel::Line,
    ContactLabel::Patch};

// ---------------------------------------------------------------------------
// Synthetic contact-mode clips
// ---------------------------------------------------------------------------

// Spectral envelopes per contact mode. The point mode carries a narrow
// low-frequency gain bump, the line mode a mid-band plateau with a gentle
// high-frequency rolloff, the patch mode a damped broadband response behind
// a high-pass knee. Free is the unfiltered reference sweep.
struct SynthProfile {
    double point_bump_center_hz = 200.0;
    double point_bump_width_hz = 80.0;
    double point_bump_gain_db = 12.0;

    double line_plateau_lo_hz = 300.0;
    double line_plateau_hi_hz = 1000.0;
    double line_plateau_gain_db = 8.0;
    double line_rolloff_db_per_octave = 3.0;

    double patch_gain_db = -10.0;
    double patch_knee_hz = 100.0;

    double gain_jitter_db = 3.0;       // uniform +/- per clip
    double bump_center_jitter = 0.2;   // +/- fraction of center
    double noise_snr_db = 30.0;

    double sweep_f_start_hz = 20.0;
    double sweep_f_end_hz = 20000.0;
    double sweep_amplitude = 0.15;
    std::uint32_t sample_rate_hz = 44100;
    double duration_s = 1.0;
};

// Linear amplitude gain at frequency f for one contact mode.
inline double synth_envelope_gain(ContactLabel label, const SynthProfile& p,
                                  double f_hz, double bump_center_hz) {
    switch (label) {
        case ContactLabel::Free:
            return 1.0;
        case ContactLabel::Point: {
            const double d = f_hz - bump_center_hz;
            const double db = p.point_bump_gain_db *
                              std::exp(-d * d / (2.0 * p.point_bump_width_hz *
                                                 p.point_bump_width_hz));
            return std::pow(10.0, db / 20.0);
        }
        case ContactLabel::Line: {
            double db = 0.0;
            if (f_hz < p.line_plateau_lo_hz)
                db = p.line_plateau_gain_db * (f_hz / p.line_plateau_lo_hz);
            else if (f_hz <= p.line_plateau_hi_hz)
                db = p.line_plateau_gain_db;
            else
                db = p.line_plateau_gain_db -
                     p.line_rolloff_db_per_octave *
                         std::log2(f_hz / p.line_plateau_hi_hz);
            return std::pow(10.0, db / 20.0);
        }
        case ContactLabel::Patch: {
            const double r = f_hz / p.patch_knee_hz;
            const double hp = r / std::sqrt(1.0 + r * r);  // 0 at DC
            return std::pow(10.0, p.patch_gain_db / 20.0) * hp;
        }
    }
    return 1.0;
}

// One synthetic clip: the active sweep shaped by the label's spectral
// envelope (frequency-domain multiply over the whole clip) plus seeded
// white noise. Bit-deterministic per (label, profile, seed).
inline Waveform synth_clip(ContactLabel label, const SynthProfile& p,
                           std::uint64_t seed) {
    Rng rng(derive_stream_seed(seed, static_cast<std::uint64_t>(label)));
    const double gain_db = rng.uniform(-p.gain_jitter_db, p.gain_jitter_db);
    const double bump_center =
        p.point_bump_center_hz *
        (1.0 + rng.uniform(-p.bump_center_jitter, p.bump_center_jitter));

    const Waveform sweep =
        generate_sweep(p.duration_s, p.sweep_f_start_hz, p.sweep_f_end_hz,
                       p.sample_rate_hz, p.sweep_amplitude);
    const std::size_t n = sweep.samples.size();

    std::size_t n_fft = 1;
    while (n_fft < 2 * n) n_fft <<= 1;
    std::vector<std::complex<double>> spec(n_fft, {0.0, 0.0});
    for (std::size_t i = 0; i < n; ++i) spec[i] = {double(sweep.samples[i]), 0.0};
    fft::forward(spec);

    const double overall = std::pow(10.0, gain_db / 20.0);
    for (std::size_t k = 0; k <= n_fft / 2; ++k) {
        const double f = static_cast<double>(k) * p.sample_rate_hz /
                         static_cast<double>(n_fft);
        const double g = overall * synth_envelope_gain(label, p, f, bump_center);
        spec[k] *= g;
        if (k != 0 && k != n_fft / 2) spec[n_fft - k] *= g;  // keep output real
    }
    fft::inverse(spec);

    Waveform out;
    out.sample_rate_hz = p.sample_rate_hz;
    out.samples.resize(n);
    double signal_power = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        out.samples[i] = static_cast<float>(spec[i].real());
        signal_power += spec[i].real() * spec[i].real();
    }
    signal_power /= static_cast<double>(n);

    const double noise_std =
        std::sqrt(signal_power / std::pow(10.0, p.noise_snr_db / 10.0));
    for (std::size_t i = 0; i < n; ++i)
        out.samples[i] += static_cast<float>(noise_std * rng.normal());
    return out;
}

// ---------------------------------------------------------------------------
// Audio bank
// ---------------------------------------------------------------------------

struct BankClip {
    std::string clip_id;
    ContactLabel label;
    std::string path;    // relative to the bank directory
    std::string sha256;
};

class AudioBank {
public:
    AudioBank(std::filesystem::path dir, std::vector<BankClip> clips,
              std::string manifest_sha)
        : dir_(std::move(dir)),
          clips_(std::move(clips)),
          manifest_sha_(std::move(manifest_sha)) {
        for (std::size_t i = 0; i < clips_.size(); ++i) {
            by_label_[static_cast<int>(clips_[i].label)].push_back(i);
            by_id_[clips_[i].clip_id] = i;
        }
    }

    std::size_t size() const { return clips_.size(); }
    const std::vector<BankClip>& clips() const { return clips_; }
    const std::string& manifest_sha() const { return manifest_sha_; }
    const std::filesystem::path& dir() const { return dir_; }

    std::size_t count(ContactLabel l) const {
        return by_label_[static_cast<int>(l)].size();
    }

    bool covers_all_labels() const {
        for (const auto& v : by_label_)
            if (v.empty()) return false;
        return true;
    }

    const BankClip& clip(const std::string& clip_id) const {
        const auto it = by_id_.find(clip_id);
        if (it == by_id_.end())
            throw Error(ErrorCode::MissingArtifact, "no clip " + clip_id);
        return clips_[it->second];
    }

    Waveform load_waveform(const std::string& clip_id) const {
        return read_wav((dir_ / clip(clip_id).path).string());
    }

    // Uniform draw among the clips of one label; rng state is caller-owned.
    const std::string& sample_clip(ContactLabel label, Rng& rng) const {
        const auto& ids = by_label_[static_cast<int>(label)];
        if (ids.empty())
            throw Error(ErrorCode::MissingLabel,
                        std::string("bank has no clips labeled ") + label_name(label));
        return clips_[ids[rng.uniform_int(ids.size())]].clip_id;
    }

    // A bank view over a subset of clip indices (held-out evaluations).
    AudioBank subset(const std::vector<std::size_t>& indices) const {
        std::vector<BankClip> picked;
        picked.reserve(indices.size());
        for (auto i : indices) picked.push_back(clips_.at(i));
        return AudioBank(dir_, std::move(picked), manifest_sha_);
    }

private:
    std::filesystem::path dir_;
    std::vector<BankClip> clips_;
    std::string manifest_sha_;
    std::array<std::vector<std::size_t>, kNumLabels> by_label_;
    std::map<std::string, std::size_t> by_id_;
};

namespace bank_detail {

inline constexpr std::uint32_t kBankRateHz = 44100;
inline constexpr std::size_t kBankLen = 44100;

// Standardize to exactly 1 s @ 44100 Hz: linear-interpolation resample,
// then truncate or zero-pad.
inline Waveform standardize_clip(const Waveform& in) {
    Waveform out;
    out.sample_rate_hz = kBankRateHz;
    std::vector<float> resampled;
    if (in.sample_rate_hz == kBankRateHz) {
        resampled = in.samples;
    } else {
        const double ratio =
            static_cast<double>(in.sample_rate_hz) / kBankRateHz;
        const auto n_out = static_cast<std::size_t>(
            std::floor(static_cast<double>(in.samples.size() - 1) / ratio)) + 1;
        resampled.resize(n_out);
        for (std::size_t i = 0; i < n_out; ++i) {
            const double src = i * ratio;
            const auto i0 = static_cast<std::size_t>(src);
            const std::size_t i1 = std::min(i0 + 1, in.samples.size() - 1);
            const double frac = src - static_cast<double>(i0);
            resampled[i] = static_cast<float>((1.0 - frac) * in.samples[i0] +
                                              frac * in.samples[i1]);
        }
    }
    resampled.resize(kBankLen, 0.0f);
    out.samples = std::move(resampled);
    return out;
}

inline std::string manifest_path(const std::filesystem::path& dir) {
    return (dir / "manifest.jsonl").string();
}

}  // namespace bank_detail

struct SyntheticBankSpec {
    std::map<ContactLabel, std::size_t> counts;  // clips per label
    std::uint64_t base_seed = 1;
    SynthProfile profile;
};

// Materialize a synthetic bank: WAV files plus a JSONL manifest with one
// record per clip {clip_id, label, path, sha256}.
inline AudioBank build_bank_synthetic(const SyntheticBankSpec& spec,
                                      const std::filesystem::path& out_dir) {
    for (auto l : kAllLabels) {
        const auto it = spec.counts.find(l);
        if (it == spec.counts.end() || it->second == 0)
            throw Error(ErrorCode::MissingLabel,
                        std::string("synthetic spec must cover label ") +
                            label_name(l));
    }
    std::filesystem::create_directories(out_dir / "clips");

    std::vector<BankClip> clips;
    std::ofstream manifest(bank_detail::manifest_path(out_dir));
    if (!manifest)
        throw Error(ErrorCode::IoFailure, "cannot write bank manifest");
    for (auto label : kAllLabels) {
        const std::size_t n = spec.counts.at(label);
        for (std::size_t i = 0; i < n; ++i) {
            char idbuf[64];
            std::snprintf(idbuf, sizeof(idbuf), "%s_%05zu", label_name(label), i);
            const std::string clip_id = idbuf;
            const std::string rel = "clips/" + clip_id + ".wav";
            const std::uint64_t clip_seed = derive_stream_seed(
                spec.base_seed,
                (static_cast<std::uint64_t>(label) << 32) | i);
            const Waveform w = synth_clip(label, spec.profile, clip_seed);
            write_wav((out_dir / rel).string(), w, WavEncoding::Float32);

            BankClip c;
            c.clip_id = clip_id;
            c.label = label;
            c.path = rel;
            c.sha256 = sha256_file_hex((out_dir / rel).string());
            nlohmann::json j = {{"clip_id", c.clip_id},
                                {"label", label_name(c.label)},
                                {"path", c.path},
                                {"sha256", c.sha256}};
            manifest << j.dump() << "\n";
            clips.push_back(std::move(c));
        }
    }
    manifest.close();
    return AudioBank(out_dir, std::move(clips),
                     sha256_file_hex(bank_detail::manifest_path(out_dir)));
}

// Ingest a directory of recorded WAVs described by a JSONL label manifest
// (one {"path": ..., "label": ...} per line). Clips are standardized to
// 1 s @ 44100 Hz and rewritten into the bank directory.
inline AudioBank build_bank_from_directory(const std::filesystem::path& src_dir,
                                           const std::string& label_manifest,
                                           const std::filesystem::path& out_dir) {
    std::ifstream in(label_manifest);
    if (!in)
        throw Error(ErrorCode::IoFailure,
                    "cannot open label manifest " + label_manifest);
    std::filesystem::create_directories(out_dir / "clips");

    std::vector<BankClip> clips;
    std::ofstream manifest(bank_detail::manifest_path(out_dir));
    if (!manifest)
        throw Error(ErrorCode::IoFailure, "cannot write bank manifest");
    std::string line;
    std::size_t index = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorCode::IoFailure,
                        "bad manifest line " + std::to_string(index) + ": " +
                            e.what());
        }
        const ContactLabel label = parse_label(j.at("label").get<std::string>());
        const std::string src_rel = j.at("path").get<std::string>();
        const Waveform raw = read_wav((src_dir / src_rel).string());
        const Waveform std_clip = bank_detail::standardize_clip(raw);

        char idbuf[64];
        std::snprintf(idbuf, sizeof(idbuf), "%s_%05zu", label_name(label), index);
        const std::string clip_id = idbuf;
        const std::string rel = "clips/" + clip_id + ".wav";
        write_wav((out_dir / rel).string(), std_clip, WavEncoding::Float32);

        BankClip c;
        c.clip_id = clip_id;
        c.label = label;
        c.path = rel;
        c.sha256 = sha256_file_hex((out_dir / rel).string());
        nlohmann::json rec = {{"clip_id", c.clip_id},
                              {"label", label_name(c.label)},
                              {"path", c.path},
                              {"sha256", c.sha256}};
        manifest << rec.dump() << "\n";
        clips.push_back(std::move(c));
        ++index;
    }
    if (clips.empty()) throw Error(ErrorCode::EmptyBank, "no clips ingested");
    manifest.close();
    AudioBank bank(out_dir, std::move(clips),
                   sha256_file_hex(bank_detail::manifest_path(out_dir)));
    return bank;
}

// Reopen a previously built bank from its manifest.
inline AudioBank open_bank(const std::filesystem::path& dir,
                           bool verify_checksums = false) {
    const std::string mpath = bank_detail::manifest_path(dir);
    std::ifstream in(mpath);
    if (!in) throw Error(ErrorCode::MissingArtifact, "no bank manifest at " + mpath);
    std::vector<BankClip> clips;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const nlohmann::json j = nlohmann::json::parse(line);
        BankClip c;
        c.clip_id = j.at("clip_id").get<std::string>();
        c.label = parse_label(j.at("label").get<std::string>());
        c.path = j.at("path").get<std::string>();
        c.sha256 = j.at("sha256").get<std::string>();
        if (verify_checksums &&
            sha256_file_hex((dir / c.path).string()) != c.sha256)
            throw Error(ErrorCode::ChecksumMismatch,
                        "clip " + c.clip_id + " does not match its manifest hash");
        clips.push_back(std::move(c));
    }
    if (clips.empty()) throw Error(ErrorCode::EmptyBank, "bank manifest is empty");
    return AudioBank(dir, std::move(clips), sha256_file_hex(mpath));
}

}  // namespace sonotact
