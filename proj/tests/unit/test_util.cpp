#include <gtest/gtest.h>

#include "cha/error.hpp"
#include "cha/util/digest.hpp"
#include "cha/util/html.hpp"
#include "cha/util/text.hpp"
#include "cha/util/url.hpp"
#include "generators.hpp"

namespace cha {
namespace {

// Expected digests below were produced with Python's hashlib.
TEST(Sha256, KnownVectors) {
    EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    EXPECT_EQ(sha256_hex("how can I sleep better"),
              "79464987e69970e6d105f87aaa6e999c46a25b070bafc7b79aa9997ddd623f0c");
}

TEST(Sha256, IncrementalMatchesOneShot) {
    test::Rng rng(3);
    for (int i = 0; i < 50; ++i) {
        const std::string text = test::random_text(rng) + test::random_text(rng);
        const std::size_t cut = rng.below(text.size() + 1);
        Sha256 h;
        h.update(std::string_view(text).substr(0, cut)).update(std::string_view(text).substr(cut));
        EXPECT_EQ(h.hex_digest(), sha256_hex(text));
    }
}

TEST(Base64, KnownAndStrict) {
    EXPECT_EQ(base64_encode(std::string("\x00\x01\x02\x03\x04\x05\x06", 7)), "AAECAwQFBg==");
    EXPECT_EQ(base64_encode("\xff\xfe"), "//4=");
    EXPECT_EQ(base64_decode("//4="), "\xff\xfe");
    EXPECT_THROW(base64_decode("//4"), Error);
    EXPECT_THROW(base64_decode("a*b="), Error);
}

TEST(Base64, RoundTripProperty) {
    test::Rng rng(11);
    for (int i = 0; i < 200; ++i) {
        std::string bytes(rng.below(40), '\0');
        for (auto& c : bytes) c = static_cast<char>(rng.below(256));
        EXPECT_EQ(base64_decode(base64_encode(bytes)), bytes);
    }
}

TEST(Text, WhitespaceAndCase) {
    EXPECT_EQ(trim("  a b \n"), "a b");
    EXPECT_EQ(to_lower("SaD"), "sad");
    EXPECT_EQ(normalize_whitespace("  how\t can\n\nI  "), "how can I");
    EXPECT_TRUE(starts_with_icase("FINAL_plan x", "final_PLAN"));
}

TEST(Text, Utf8LengthCountsCodePoints) {
    EXPECT_EQ(utf8_length("caf\xC3\xA9"), 4u);
    EXPECT_EQ(utf8_length("\xF0\x9F\x99\x82"), 1u);
}

TEST(Text, TruncateAtWhitespace) {
    EXPECT_EQ(truncate_at_whitespace("short", 10), "short");
    EXPECT_EQ(truncate_at_whitespace("one two three", 9), "one two");
    EXPECT_EQ(truncate_at_whitespace("abcdefgh", 3), "abc");
}

TEST(Text, TruncateNeverExceedsBudget) {
    test::Rng rng(5);
    for (int i = 0; i < 300; ++i) {
        const std::string text = test::random_text(rng);
        const std::size_t budget = rng.below(30);
        const std::string cut = truncate_at_whitespace(text, budget);
        EXPECT_LE(utf8_length(cut), budget);
        EXPECT_EQ(text.compare(0, cut.size(), cut), 0);
    }
}

TEST(Text, FormatFixed) {
    EXPECT_EQ(format_fixed(624, 2), "6.24");
    EXPECT_EQ(format_fixed(89, 2), "0.89");
    EXPECT_EQ(format_fixed(100, 2), "1.00");
    EXPECT_EQ(format_fixed(83, 1), "8.3");
}

TEST(Url, ParseAndEncode) {
    const auto u = parse_url("https://wellbeing.example.org/sleep?x=1");
    EXPECT_EQ(u.host, "wellbeing.example.org");
    EXPECT_EQ(u.port, 443);
    EXPECT_EQ(u.path, "/sleep?x=1");
    EXPECT_EQ(parse_url("http://127.0.0.1:9000").path, "/");
    EXPECT_THROW(parse_url("ftp://x"), Error);
    // Python urllib.parse.quote(..., safe='')
    EXPECT_EQ(url_encode("a b/c~d?\xC3\xA9"), "a%20b%2Fc~d%3F%C3%A9");
}

TEST(Html, DropsScriptsAndDecodes) {
    const std::string html =
        "<html><head><title>t</title></head><body><script>var x=1;</script>"
        "<p>Sleep &amp; rest</p>\n<p>matter</p></body></html>";
    EXPECT_EQ(html_to_text(html), "Sleep & rest matter");
}

}  // namespace
}  // namespace cha
