#include "cha/util/digest.hpp"

#include <openssl/evp.h>
#include <openssl/rand.h>

#include <array>

#include "cha/error.hpp"

namespace cha {

namespace {

EVP_MD_CTX* as_ctx(void* p) { return static_cast<EVP_MD_CTX*>(p); }

}  // namespace

Sha256::Sha256() : ctx_(EVP_MD_CTX_new()) {
    if (ctx_ == nullptr || EVP_DigestInit_ex(as_ctx(ctx_), EVP_sha256(), nullptr) != 1) {
        throw Error(Errc::io_error, "sha256 init");
    }
}

Sha256::~Sha256() { EVP_MD_CTX_free(as_ctx(ctx_)); }

Sha256& Sha256::update(std::span<const std::uint8_t> bytes) {
    EVP_DigestUpdate(as_ctx(ctx_), bytes.data(), bytes.size());
    return *this;
}

Sha256& Sha256::update(std::string_view bytes) {
    EVP_DigestUpdate(as_ctx(ctx_), bytes.data(), bytes.size());
    return *this;
}

std::string Sha256::hex_digest() {
    std::array<std::uint8_t, EVP_MAX_MD_SIZE> out{};
    unsigned int len = 0;
    EVP_DigestFinal_ex(as_ctx(ctx_), out.data(), &len);
    return hex_encode(std::span(out.data(), len));
}

std::string sha256_hex(std::string_view bytes) { return Sha256().update(bytes).hex_digest(); }

std::string hex_encode(std::span<const std::uint8_t> bytes) {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (std::uint8_t b : bytes) {
        out.push_back(kDigits[b >> 4]);
        out.push_back(kDigits[b & 0x0F]);
    }
    return out;
}

std::string base64_encode(std::string_view bytes) {
    std::string out(4 * ((bytes.size() + 2) / 3), '\0');
    const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                  reinterpret_cast<const unsigned char*>(bytes.data()),
                                  static_cast<int>(bytes.size()));
    out.resize(static_cast<std::size_t>(n));
    return out;
}

std::string base64_decode(std::string_view text) {
    auto valid = [](char c) {
        return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
               c == '+' || c == '/';
    };
    if (text.size() % 4 != 0) throw Error(Errc::decode_error, "base64 length");
    std::size_t padding = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (c == '=') {
            if (i + 2 < text.size()) throw Error(Errc::decode_error, "base64 padding");
            ++padding;
        } else if (!valid(c) || padding > 0) {
            throw Error(Errc::decode_error, "base64 alphabet");
        }
    }
    std::string out(3 * (text.size() / 4), '\0');
    const int n = EVP_DecodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                  reinterpret_cast<const unsigned char*>(text.data()),
                                  static_cast<int>(text.size()));
    if (n < 0) throw Error(Errc::decode_error, "base64");
    out.resize(static_cast<std::size_t>(n) - padding);
    return out;
}

std::string random_hex_id(std::size_t bytes) {
    std::vector<std::uint8_t> buf(bytes);
    if (RAND_bytes(buf.data(), static_cast<int>(buf.size())) != 1) {
        throw Error(Errc::io_error, "random source");
    }
    return hex_encode(buf);
}

}  // namespace cha
