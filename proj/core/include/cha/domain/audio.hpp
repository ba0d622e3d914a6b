#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace cha {

inline constexpr std::uint32_t kCanonicalSampleRate = 16000;

/// 16-bit PCM. Samples are interleaved when channels > 1; the canonical form is mono.
struct AudioClip {
    std::vector<std::int16_t> samples;
    std::uint32_t sample_rate = kCanonicalSampleRate;
    std::uint16_t channels = 1;

    std::size_t frame_count() const { return channels == 0 ? 0 : samples.size() / channels; }
    double duration_seconds() const;
    bool is_canonical() const { return channels == 1 && sample_rate == kCanonicalSampleRate; }

    friend bool operator==(const AudioClip&, const AudioClip&) = default;
};

/// SHA-256 over the sample rate (8-byte big-endian) followed by little-endian PCM.
std::string fingerprint_audio(const AudioClip& clip);

/// Content-addressed handle. `clip` may be empty when only the digest is known
/// (for instance after reloading a trace).
struct AudioRef {
    std::string digest;
    std::shared_ptr<const AudioClip> clip;

    static AudioRef of(AudioClip clip);

    friend bool operator==(const AudioRef& a, const AudioRef& b) { return a.digest == b.digest; }
};

/// Down-mixes to mono and resamples (linear interpolation) to 16 kHz.
AudioClip canonicalize(const AudioClip& clip);

/// Canonical RIFF/WAVE bytes: 44-byte header, PCM 16-bit.
std::string encode_wav(const AudioClip& clip);

/// Accepts PCM 8/16/24/32-bit integer and 32-bit float WAV, any rate and
/// channel count; returns 16-bit samples at the file's rate and layout.
/// Throws Error(Errc::decode_error).
AudioClip decode_wav(std::string_view bytes);

/// Sine tone at `frequency` Hz, mono.
AudioClip make_tone(double frequency, double seconds, std::uint32_t sample_rate = kCanonicalSampleRate,
                    double amplitude = 0.3);

}  // namespace cha
