#include "cha/service/ingest.hpp"

#include "cha/error.hpp"
#include "cha/service/opus.hpp"
#include "cha/util/text.hpp"

namespace cha {

std::string_view to_string(AudioFormat format) {
    switch (format) {
        case AudioFormat::wav: return "wav";
        case AudioFormat::ogg_opus: return "ogg-opus";
        case AudioFormat::webm_opus: return "webm-opus";
    }
    return "wav";
}

std::optional<AudioFormat> parse_audio_format(std::string_view text) {
    std::string t = to_lower(trim(text));
    if (const auto semi = t.find(';'); semi != std::string::npos) {
        // "audio/webm;codecs=opus"
        t = std::string(trim(std::string_view(t).substr(0, semi)));
    }
    if (t == "wav" || t == "audio/wav" || t == "audio/x-wav" || t == "audio/wave") return AudioFormat::wav;
    if (t == "ogg-opus" || t == "ogg" || t == "audio/ogg") return AudioFormat::ogg_opus;
    if (t == "webm-opus" || t == "webm" || t == "audio/webm") return AudioFormat::webm_opus;
    return std::nullopt;
}

bool opus_decoding_available() { return opus_available(); }

AudioClip ingest_audio(std::string_view bytes, AudioFormat format) {
    if (bytes.size() > kMaxPayloadBytes) {
        throw Error(Errc::payload_too_large, std::to_string(bytes.size()) + " bytes");
    }
    AudioClip clip;
    switch (format) {
        case AudioFormat::wav: clip = decode_wav(bytes); break;
        case AudioFormat::ogg_opus: clip = decode_ogg_opus(bytes); break;
        case AudioFormat::webm_opus: clip = decode_webm_opus(bytes); break;
    }
    if (clip.duration_seconds() > kMaxAudioSeconds) {
        throw Error(Errc::payload_too_large, "audio longer than 120 s");
    }
    return canonicalize(clip);
}

}  // namespace cha
