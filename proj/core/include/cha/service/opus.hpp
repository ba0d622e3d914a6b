#pragma once

#include <string>
#include <string_view>

#include "cha/domain/audio.hpp"

namespace cha {

/// libopus is loaded with dlopen on first use; these report whether it was found.
bool opus_available();

/// Mono 48 kHz decode of the first Opus stream. Throws Errc::decode_error.
AudioClip decode_ogg_opus(std::string_view bytes);
AudioClip decode_webm_opus(std::string_view bytes);

/// Minimal single-stream encoders (20 ms frames, mono, VOIP mode), used to
/// produce test uploads. Input is resampled to 48 kHz first.
std::string encode_ogg_opus(const AudioClip& clip);
std::string encode_webm_opus(const AudioClip& clip);

}  // namespace cha
