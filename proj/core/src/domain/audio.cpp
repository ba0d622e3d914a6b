#include "cha/domain/audio.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>

#include "cha/error.hpp"
#include "cha/util/digest.hpp"

namespace cha {

namespace {

void put_u16(std::string& out, std::uint16_t v) {
    out.push_back(static_cast<char>(v & 0xFF));
    out.push_back(static_cast<char>((v >> 8) & 0xFF));
}

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint32_t get_u32(std::string_view b, std::size_t at) {
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | static_cast<std::uint8_t>(b[at + static_cast<std::size_t>(i)]);
    return v;
}

std::uint16_t get_u16(std::string_view b, std::size_t at) {
    return static_cast<std::uint16_t>(static_cast<std::uint8_t>(b[at]) |
                                      (static_cast<std::uint8_t>(b[at + 1]) << 8));
}

std::int16_t clamp16(double v) {
    return static_cast<std::int16_t>(std::clamp(std::lround(v), -32768L, 32767L));
}

}  // namespace

double AudioClip::duration_seconds() const {
    if (sample_rate == 0) return 0.0;
    return static_cast<double>(frame_count()) / static_cast<double>(sample_rate);
}

std::string fingerprint_audio(const AudioClip& clip) {
    Sha256 h;
    std::uint8_t rate_be[8];
    const std::uint64_t rate = clip.sample_rate;
    for (int i = 0; i < 8; ++i) rate_be[i] = static_cast<std::uint8_t>(rate >> (8 * (7 - i)));
    h.update(std::span<const std::uint8_t>(rate_be, 8));

    std::vector<std::uint8_t> pcm;
    pcm.reserve(clip.samples.size() * 2);
    for (std::int16_t s : clip.samples) {
        const auto u = static_cast<std::uint16_t>(s);
        pcm.push_back(static_cast<std::uint8_t>(u & 0xFF));
        pcm.push_back(static_cast<std::uint8_t>(u >> 8));
    }
    h.update(pcm);
    return h.hex_digest();
}

AudioRef AudioRef::of(AudioClip clip) {
    AudioRef ref;
    ref.digest = fingerprint_audio(clip);
    ref.clip = std::make_shared<const AudioClip>(std::move(clip));
    return ref;
}

AudioClip canonicalize(const AudioClip& clip) {
    if (clip.channels == 0 || clip.sample_rate == 0) {
        throw Error(Errc::decode_error, "audio without channels or sample rate");
    }
    std::vector<double> mono(clip.frame_count());
    for (std::size_t f = 0; f < mono.size(); ++f) {
        long sum = 0;
        for (std::size_t c = 0; c < clip.channels; ++c) sum += clip.samples[f * clip.channels + c];
        mono[f] = static_cast<double>(sum) / clip.channels;
    }

    AudioClip out;
    out.channels = 1;
    out.sample_rate = kCanonicalSampleRate;
    if (clip.sample_rate == kCanonicalSampleRate) {
        out.samples.reserve(mono.size());
        for (double v : mono) out.samples.push_back(clamp16(v));
        return out;
    }

    const double ratio = static_cast<double>(clip.sample_rate) / kCanonicalSampleRate;
    const auto n_out = static_cast<std::size_t>(
        std::floor(static_cast<double>(mono.size()) * kCanonicalSampleRate / clip.sample_rate));
    out.samples.reserve(n_out);
    for (std::size_t i = 0; i < n_out; ++i) {
        const double pos = static_cast<double>(i) * ratio;
        const auto i0 = static_cast<std::size_t>(pos);
        const double frac = pos - static_cast<double>(i0);
        const double a = mono[std::min(i0, mono.size() - 1)];
        const double b = mono[std::min(i0 + 1, mono.size() - 1)];
        out.samples.push_back(clamp16(a + (b - a) * frac));
    }
    return out;
}

std::string encode_wav(const AudioClip& clip) {
    const auto data_bytes = static_cast<std::uint32_t>(clip.samples.size() * 2);
    std::string out;
    out.reserve(44 + data_bytes);
    out += "RIFF";
    put_u32(out, 36 + data_bytes);
    out += "WAVE";
    out += "fmt ";
    put_u32(out, 16);
    put_u16(out, 1);
    put_u16(out, clip.channels);
    put_u32(out, clip.sample_rate);
    put_u32(out, clip.sample_rate * clip.channels * 2);
    put_u16(out, static_cast<std::uint16_t>(clip.channels * 2));
    put_u16(out, 16);
    out += "data";
    put_u32(out, data_bytes);
    for (std::int16_t s : clip.samples) put_u16(out, static_cast<std::uint16_t>(s));
    return out;
}

AudioClip decode_wav(std::string_view b) {
    if (b.size() < 12 || b.substr(0, 4) != "RIFF" || b.substr(8, 4) != "WAVE") {
        throw Error(Errc::decode_error, "not a RIFF/WAVE file");
    }
    std::uint16_t format = 0;
    std::uint16_t channels = 0;
    std::uint32_t rate = 0;
    std::uint16_t bits = 0;
    bool have_fmt = false;
    std::size_t pos = 12;
    while (pos + 8 <= b.size()) {
        const std::string_view id = b.substr(pos, 4);
        const std::uint32_t size = get_u32(b, pos + 4);
        const std::size_t body = pos + 8;
        if (id == "fmt ") {
            if (size < 16 || body + 16 > b.size()) throw Error(Errc::decode_error, "short fmt chunk");
            format = get_u16(b, body);
            channels = get_u16(b, body + 2);
            rate = get_u32(b, body + 4);
            bits = get_u16(b, body + 14);
            if (format == 0xFFFE && size >= 40 && body + 26 <= b.size()) {
                format = get_u16(b, body + 24);  // WAVE_FORMAT_EXTENSIBLE subformat
            }
            have_fmt = true;
        } else if (id == "data") {
            if (!have_fmt) throw Error(Errc::decode_error, "data before fmt");
            if (channels == 0 || rate == 0) throw Error(Errc::decode_error, "zero channels or rate");
            const std::size_t len = std::min<std::size_t>(size, b.size() - body);
            const std::string_view data = b.substr(body, len);
            AudioClip clip;
            clip.channels = channels;
            clip.sample_rate = rate;
            const std::size_t width = bits / 8;
            if (format == 1 && (bits == 8 || bits == 16 || bits == 24 || bits == 32)) {
                const std::size_t n = data.size() / width;
                clip.samples.reserve(n);
                for (std::size_t i = 0; i < n; ++i) {
                    const auto* p = reinterpret_cast<const std::uint8_t*>(data.data() + i * width);
                    std::int32_t v = 0;
                    switch (bits) {
                        case 8: v = (static_cast<std::int32_t>(p[0]) - 128) << 8; break;
                        case 16: v = static_cast<std::int16_t>(p[0] | (p[1] << 8)); break;
                        case 24: v = static_cast<std::int32_t>((p[0] << 8) | (p[1] << 16) |
                                                               (static_cast<std::uint32_t>(p[2]) << 24)) >> 16;
                            break;
                        default: v = static_cast<std::int32_t>(p[0] | (p[1] << 8) | (p[2] << 16) |
                                                               (static_cast<std::uint32_t>(p[3]) << 24)) >> 16;
                    }
                    clip.samples.push_back(static_cast<std::int16_t>(v));
                }
            } else if (format == 3 && bits == 32) {
                const std::size_t n = data.size() / 4;
                clip.samples.reserve(n);
                for (std::size_t i = 0; i < n; ++i) {
                    float f = 0;
                    std::memcpy(&f, data.data() + i * 4, 4);
                    clip.samples.push_back(clamp16(static_cast<double>(f) * 32767.0));
                }
            } else {
                throw Error(Errc::decode_error, "unsupported WAV encoding");
            }
            clip.samples.resize(clip.samples.size() - clip.samples.size() % channels);
            return clip;
        }
        pos = body + size + (size & 1);
    }
    throw Error(Errc::decode_error, "missing data chunk");
}

AudioClip make_tone(double frequency, double seconds, std::uint32_t sample_rate, double amplitude) {
    AudioClip clip;
    clip.sample_rate = sample_rate;
    const auto n = static_cast<std::size_t>(std::llround(seconds * sample_rate));
    clip.samples.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / sample_rate;
        clip.samples.push_back(clamp16(amplitude * 32767.0 * std::sin(2.0 * std::numbers::pi * frequency * t)));
    }
    return clip;
}

}  // namespace cha
