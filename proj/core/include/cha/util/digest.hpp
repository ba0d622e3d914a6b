#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cha {

/// Incremental SHA-256 producing lowercase hex.
class Sha256 {
public:
    Sha256();
    ~Sha256();
    Sha256(const Sha256&) = delete;
    Sha256& operator=(const Sha256&) = delete;

    Sha256& update(std::span<const std::uint8_t> bytes);
    Sha256& update(std::string_view bytes);
    std::string hex_digest();

private:
    void* ctx_;
};

std::string sha256_hex(std::string_view bytes);

std::string hex_encode(std::span<const std::uint8_t> bytes);

std::string base64_encode(std::string_view bytes);

/// Strict decode: rejects characters outside the alphabet and bad padding.
/// Throws Error(Errc::decode_error).
std::string base64_decode(std::string_view text);

/// Hex of `bytes` bytes from the OS random source.
std::string random_hex_id(std::size_t bytes = 16);

}  // namespace cha
