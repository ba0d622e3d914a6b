#pragma once

#include <cstddef>
#include <optional>
#include <string_view>

#include "cha/domain/audio.hpp"

namespace cha {

enum class AudioFormat { wav, ogg_opus, webm_opus };

std::string_view to_string(AudioFormat format);
/// "wav", "ogg-opus", "webm-opus" plus the matching MIME types.
std::optional<AudioFormat> parse_audio_format(std::string_view text);

inline constexpr std::size_t kMaxPayloadBytes = 10 * 1024 * 1024;
inline constexpr double kMaxAudioSeconds = 120.0;

/// True when libopus could be loaded at runtime.
bool opus_decoding_available();

/// Decodes and canonicalizes an upload.
/// Throws Errc::payload_too_large (bytes or duration) and Errc::decode_error.
AudioClip ingest_audio(std::string_view bytes, AudioFormat format);

}  // namespace cha
