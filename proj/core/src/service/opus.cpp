#include "cha/service/opus.hpp"

#include <dlfcn.h>

#include <algorithm>
#include <array>
#include <cstdint>
#include <mutex>
#include <vector>

#include "cha/error.hpp"

namespace cha {

namespace {

// The handful of libopus entry points we need; the library ships without
// headers here, so the prototypes are declared by hand.
struct OpusApi {
    using DecoderCreate = void* (*)(std::int32_t, int, int*);
    using Decode = int (*)(void*, const unsigned char*, std::int32_t, std::int16_t*, int, int);
    using DecoderDestroy = void (*)(void*);
    using EncoderCreate = void* (*)(std::int32_t, int, int, int*);
    using Encode = std::int32_t (*)(void*, const std::int16_t*, int, unsigned char*, std::int32_t);
    using EncoderDestroy = void (*)(void*);

    DecoderCreate decoder_create = nullptr;
    Decode decode = nullptr;
    DecoderDestroy decoder_destroy = nullptr;
    EncoderCreate encoder_create = nullptr;
    Encode encode = nullptr;
    EncoderDestroy encoder_destroy = nullptr;
    bool ok = false;
};

constexpr int kOpusApplicationVoip = 2048;
constexpr std::uint32_t kOpusRate = 48000;
constexpr int kMaxFrame = 5760;  // 120 ms at 48 kHz

const OpusApi& opus_api() {
    static OpusApi api;
    static std::once_flag once;
    std::call_once(once, [] {
        void* lib = dlopen("libopus.so.0", RTLD_NOW | RTLD_LOCAL);
        if (lib == nullptr) lib = dlopen("libopus.so", RTLD_NOW | RTLD_LOCAL);
        if (lib == nullptr) return;
        api.decoder_create = reinterpret_cast<OpusApi::DecoderCreate>(dlsym(lib, "opus_decoder_create"));
        api.decode = reinterpret_cast<OpusApi::Decode>(dlsym(lib, "opus_decode"));
        api.decoder_destroy = reinterpret_cast<OpusApi::DecoderDestroy>(dlsym(lib, "opus_decoder_destroy"));
        api.encoder_create = reinterpret_cast<OpusApi::EncoderCreate>(dlsym(lib, "opus_encoder_create"));
        api.encode = reinterpret_cast<OpusApi::Encode>(dlsym(lib, "opus_encode"));
        api.encoder_destroy = reinterpret_cast<OpusApi::EncoderDestroy>(dlsym(lib, "opus_encoder_destroy"));
        api.ok = api.decoder_create && api.decode && api.decoder_destroy && api.encoder_create && api.encode &&
                 api.encoder_destroy;
    });
    return api;
}

const OpusApi& require_api() {
    const auto& api = opus_api();
    if (!api.ok) throw Error(Errc::decode_error, "opus decoding unavailable (libopus not found)");
    return api;
}

[[noreturn]] void bad(const std::string& what) { throw Error(Errc::decode_error, what); }

std::uint32_t le32(const unsigned char* p) { return p[0] | p[1] << 8 | p[2] << 16 | std::uint32_t(p[3]) << 24; }
std::uint16_t le16(const unsigned char* p) { return static_cast<std::uint16_t>(p[0] | p[1] << 8); }
std::uint64_t le64(const unsigned char* p) { return le32(p) | std::uint64_t(le32(p + 4)) << 32; }

struct OpusHead {
    int channels = 1;
    std::uint16_t pre_skip = 0;
};

OpusHead parse_opus_head(std::string_view packet) {
    if (packet.size() < 19 || packet.substr(0, 8) != "OpusHead") bad("missing OpusHead");
    const auto* p = reinterpret_cast<const unsigned char*>(packet.data());
    OpusHead head;
    head.channels = p[9];
    head.pre_skip = le16(p + 10);
    if (head.channels < 1 || head.channels > 2) bad("unsupported opus channel layout");
    return head;
}

/// Decodes packets to mono 48 kHz, dropping the pre-skip and keeping at most
/// `total` samples when given.
AudioClip decode_packets(const std::vector<std::string_view>& packets, const OpusHead& head,
                         std::int64_t total = -1) {
    const auto& api = require_api();
    int err = 0;
    void* dec = api.decoder_create(static_cast<std::int32_t>(kOpusRate), 1, &err);
    if (dec == nullptr || err != 0) bad("opus decoder init failed");
    AudioClip clip;
    clip.sample_rate = kOpusRate;
    clip.channels = 1;
    std::vector<std::int16_t> frame(kMaxFrame);
    for (auto packet : packets) {
        const int n = api.decode(dec, reinterpret_cast<const unsigned char*>(packet.data()),
                                 static_cast<std::int32_t>(packet.size()), frame.data(), kMaxFrame, 0);
        if (n < 0) {
            api.decoder_destroy(dec);
            bad("corrupt opus packet");
        }
        clip.samples.insert(clip.samples.end(), frame.begin(), frame.begin() + n);
    }
    api.decoder_destroy(dec);
    const std::size_t skip = std::min<std::size_t>(head.pre_skip, clip.samples.size());
    clip.samples.erase(clip.samples.begin(), clip.samples.begin() + static_cast<std::ptrdiff_t>(skip));
    if (total >= 0 && static_cast<std::size_t>(total) < clip.samples.size()) clip.samples.resize(total);
    return clip;
}

// ---- Ogg ----

std::uint32_t ogg_crc(const unsigned char* data, std::size_t size) {
    static const auto table = [] {
        std::array<std::uint32_t, 256> t{};
        for (std::uint32_t i = 0; i < 256; ++i) {
            std::uint32_t r = i << 24;
            for (int k = 0; k < 8; ++k) r = (r & 0x80000000u) ? (r << 1) ^ 0x04c11db7u : r << 1;
            t[i] = r;
        }
        return t;
    }();
    std::uint32_t crc = 0;
    for (std::size_t i = 0; i < size; ++i) crc = (crc << 8) ^ table[((crc >> 24) & 0xff) ^ data[i]];
    return crc;
}

struct OggStream {
    std::vector<std::string> packets;
    std::int64_t last_granule = -1;
};

OggStream read_ogg(std::string_view bytes) {
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
    std::size_t pos = 0;
    bool have_serial = false;
    std::uint32_t serial = 0;
    OggStream stream;
    std::string partial;
    while (pos < bytes.size()) {
        if (bytes.size() - pos < 27 || bytes.substr(pos, 4) != "OggS") bad("bad ogg page");
        const unsigned char* page = p + pos;
        const std::uint32_t page_serial = le32(page + 14);
        const int nsegs = page[26];
        if (bytes.size() - pos < 27u + nsegs) bad("truncated ogg page");
        std::size_t body = 0;
        for (int i = 0; i < nsegs; ++i) body += page[27 + i];
        const std::size_t page_len = 27 + nsegs + body;
        if (bytes.size() - pos < page_len) bad("truncated ogg page");

        std::vector<unsigned char> check(page, page + page_len);
        std::fill_n(check.begin() + 22, 4, 0);
        if (ogg_crc(check.data(), check.size()) != le32(page + 22)) bad("ogg checksum mismatch");

        if (!have_serial) {
            serial = page_serial;
            have_serial = true;
        }
        if (page_serial == serial) {
            const auto granule = static_cast<std::int64_t>(le64(page + 6));
            if (granule >= 0) stream.last_granule = granule;
            const unsigned char* data = page + 27 + nsegs;
            for (int i = 0; i < nsegs; ++i) {
                const int lace = page[27 + i];
                partial.append(reinterpret_cast<const char*>(data), lace);
                data += lace;
                if (lace < 255) {
                    stream.packets.push_back(std::move(partial));
                    partial.clear();
                }
            }
        }
        pos += page_len;
    }
    return stream;
}

void write_ogg_page(std::string& out, std::uint32_t serial, std::uint32_t seq, std::uint8_t flags,
                    std::int64_t granule, std::string_view packet) {
    std::vector<unsigned char> segs;
    std::size_t left = packet.size();
    while (left >= 255) {
        segs.push_back(255);
        left -= 255;
    }
    segs.push_back(static_cast<unsigned char>(left));
    if (segs.size() > 255) throw Error(Errc::invalid_argument, "opus packet too large for one page");

    std::string page = "OggS";
    page += '\0';
    page += static_cast<char>(flags);
    for (int i = 0; i < 8; ++i) page += static_cast<char>((static_cast<std::uint64_t>(granule) >> (8 * i)) & 0xff);
    for (int i = 0; i < 4; ++i) page += static_cast<char>((serial >> (8 * i)) & 0xff);
    for (int i = 0; i < 4; ++i) page += static_cast<char>((seq >> (8 * i)) & 0xff);
    page.append(4, '\0');
    page += static_cast<char>(segs.size());
    page.append(segs.begin(), segs.end());
    page.append(packet);
    const std::uint32_t crc = ogg_crc(reinterpret_cast<const unsigned char*>(page.data()), page.size());
    for (int i = 0; i < 4; ++i) page[22 + i] = static_cast<char>((crc >> (8 * i)) & 0xff);
    out += page;
}

// ---- WebM / Matroska ----

constexpr std::uint32_t kEbmlHeader = 0x1A45DFA3;
constexpr std::uint32_t kSegment = 0x18538067;
constexpr std::uint32_t kCluster = 0x1F43B675;
constexpr std::uint32_t kTracks = 0x1654AE6B;
constexpr std::uint32_t kTrackEntry = 0xAE;
constexpr std::uint32_t kTrackNumber = 0xD7;
constexpr std::uint32_t kCodecId = 0x86;
constexpr std::uint32_t kCodecPrivate = 0x63A2;
constexpr std::uint32_t kBlockGroup = 0xA0;
constexpr std::uint32_t kBlock = 0xA1;
constexpr std::uint32_t kSimpleBlock = 0xA3;
constexpr std::uint64_t kUnknownSize = ~std::uint64_t{0};

struct Reader {
    const unsigned char* p;
    std::size_t size;
    std::size_t pos = 0;

    bool done() const { return pos >= size; }

    std::uint64_t vint(bool keep_marker) {
        if (pos >= size) bad("truncated webm");
        const unsigned char first = p[pos];
        int len = 1;
        while (len <= 8 && !(first & (0x80 >> (len - 1)))) ++len;
        if (len > 8 || pos + len > size) bad("bad webm varint");
        std::uint64_t v = keep_marker ? first : first & (0xFF >> len);
        bool all_ones = (first & (0xFF >> len)) == (0xFF >> len);
        for (int i = 1; i < len; ++i) {
            all_ones = all_ones && p[pos + i] == 0xFF;
            v = (v << 8) | p[pos + i];
        }
        pos += len;
        if (!keep_marker && all_ones) return kUnknownSize;
        return v;
    }
};

bool is_master(std::uint32_t id) {
    return id == kSegment || id == kCluster || id == kTracks || id == kTrackEntry || id == kBlockGroup;
}

struct WebmTrack {
    std::uint64_t number = 0;
    std::string codec;
    std::string codec_private;
};

std::uint64_t read_uint(const unsigned char* d, std::size_t n) {
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < n; ++i) v = (v << 8) | d[i];
    return v;
}

std::string ebml_id(std::uint32_t id) {
    std::string s;
    for (int shift = 24; shift >= 0; shift -= 8) {
        if (auto b = (id >> shift) & 0xff; b != 0 || !s.empty()) s += static_cast<char>(b);
    }
    return s;
}

std::string ebml_size(std::uint64_t size) {
    // Always 8-byte sizes: simple and valid.
    std::string s(8, '\0');
    s[0] = 0x01;
    for (int i = 7; i >= 1; --i) {
        s[i] = static_cast<char>(size & 0xff);
        size >>= 8;
    }
    return s;
}

std::string ebml_element(std::uint32_t id, std::string_view payload) {
    return ebml_id(id) + ebml_size(payload.size()) + std::string(payload);
}

std::string ebml_uint(std::uint32_t id, std::uint64_t v) {
    std::string payload;
    for (int shift = 56; shift >= 0; shift -= 8) payload += static_cast<char>((v >> shift) & 0xff);
    return ebml_element(id, payload);
}

std::string opus_head(std::uint16_t pre_skip, std::uint32_t input_rate) {
    std::string h = "OpusHead";
    h += '\x01';
    h += '\x01';  // mono
    h += static_cast<char>(pre_skip & 0xff);
    h += static_cast<char>(pre_skip >> 8);
    for (int i = 0; i < 4; ++i) h += static_cast<char>((input_rate >> (8 * i)) & 0xff);
    h.append(2, '\0');  // output gain
    h += '\0';          // mapping family
    return h;
}

/// Encodes 20 ms frames; returns packets and the pre-skip.
std::vector<std::string> encode_frames(const AudioClip& clip, std::uint16_t& pre_skip, std::size_t& samples_48k) {
    const auto& api = require_api();
    AudioClip mono = canonicalize(clip);
    // Upsample 16 kHz -> 48 kHz by linear interpolation.
    std::vector<std::int16_t> pcm;
    pcm.reserve(mono.samples.size() * 3);
    for (std::size_t i = 0; i < mono.samples.size(); ++i) {
        const int a = mono.samples[i];
        const int b = i + 1 < mono.samples.size() ? mono.samples[i + 1] : a;
        for (int k = 0; k < 3; ++k) pcm.push_back(static_cast<std::int16_t>(a + (b - a) * k / 3));
    }
    samples_48k = pcm.size();
    int err = 0;
    void* enc = api.encoder_create(static_cast<std::int32_t>(kOpusRate), 1, kOpusApplicationVoip, &err);
    if (enc == nullptr || err != 0) throw Error(Errc::invalid_argument, "opus encoder init failed");
    pre_skip = 312;  // libopus default lookahead at 48 kHz
    constexpr int kFrame = 960;
    pcm.resize((pcm.size() + pre_skip + kFrame - 1) / kFrame * kFrame + kFrame, 0);
    std::vector<std::string> packets;
    std::vector<unsigned char> buf(4000);
    for (std::size_t off = 0; off + kFrame <= pcm.size(); off += kFrame) {
        const int n = api.encode(enc, pcm.data() + off, kFrame, buf.data(), static_cast<std::int32_t>(buf.size()));
        if (n < 0) {
            api.encoder_destroy(enc);
            throw Error(Errc::invalid_argument, "opus encode failed");
        }
        packets.emplace_back(reinterpret_cast<const char*>(buf.data()), n);
    }
    api.encoder_destroy(enc);
    return packets;
}

}  // namespace

bool opus_available() { return opus_api().ok; }

AudioClip decode_ogg_opus(std::string_view bytes) {
    OggStream stream = read_ogg(bytes);
    if (stream.packets.size() < 2) bad("ogg stream without opus headers");
    const OpusHead head = parse_opus_head(stream.packets[0]);
    if (stream.packets[1].substr(0, 8) != "OpusTags") bad("missing OpusTags");
    std::vector<std::string_view> audio(stream.packets.begin() + 2, stream.packets.end());
    const std::int64_t total = stream.last_granule >= head.pre_skip ? stream.last_granule - head.pre_skip : -1;
    return decode_packets(audio, head, total);
}

AudioClip decode_webm_opus(std::string_view bytes) {
    Reader r{reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size()};
    std::vector<WebmTrack> tracks;
    WebmTrack* current = nullptr;
    std::vector<std::pair<std::uint64_t, std::string_view>> blocks;
    bool saw_header = false;

    while (!r.done()) {
        const auto id = static_cast<std::uint32_t>(r.vint(true));
        const std::uint64_t size = r.vint(false);
        if (id == kEbmlHeader) saw_header = true;
        if (is_master(id)) {
            if (id == kTrackEntry) {
                tracks.emplace_back();
                current = &tracks.back();
            }
            continue;  // descend: children follow inline
        }
        if (size == kUnknownSize || size > r.size - r.pos) bad("bad webm element size");
        const unsigned char* d = r.p + r.pos;
        const std::string_view payload(reinterpret_cast<const char*>(d), size);
        if (current != nullptr && id == kTrackNumber) current->number = read_uint(d, size);
        if (current != nullptr && id == kCodecId) current->codec.assign(payload);
        if (current != nullptr && id == kCodecPrivate) current->codec_private.assign(payload);
        if (id == kSimpleBlock || id == kBlock) {
            Reader br{d, size};
            const std::uint64_t track = br.vint(false);
            if (br.pos + 3 > size) bad("truncated webm block");
            const unsigned char flags = d[br.pos + 2];
            if (flags & 0x06) bad("laced webm blocks are not supported");
            blocks.emplace_back(track, payload.substr(br.pos + 3));
        }
        r.pos += size;
    }
    if (!saw_header) bad("not a webm file");
    const WebmTrack* opus = nullptr;
    for (const auto& t : tracks) {
        if (t.codec == "A_OPUS") {
            opus = &t;
            break;
        }
    }
    if (opus == nullptr) bad("webm without an opus track");
    const OpusHead head = parse_opus_head(opus->codec_private);
    std::vector<std::string_view> packets;
    for (const auto& [track, data] : blocks) {
        if (track == opus->number) packets.push_back(data);
    }
    return decode_packets(packets, head);
}

std::string encode_ogg_opus(const AudioClip& clip) {
    std::uint16_t pre_skip = 0;
    std::size_t samples = 0;
    const auto packets = encode_frames(clip, pre_skip, samples);
    constexpr std::uint32_t serial = 0x43484131;
    std::string out;
    std::uint32_t seq = 0;
    write_ogg_page(out, serial, seq++, 0x02, 0, opus_head(pre_skip, clip.sample_rate));
    std::string tags = "OpusTags";
    const std::string vendor = "cha";
    for (int i = 0; i < 4; ++i) tags += static_cast<char>((vendor.size() >> (8 * i)) & 0xff);
    tags += vendor;
    tags.append(4, '\0');
    write_ogg_page(out, serial, seq++, 0x00, 0, tags);
    std::int64_t granule = 0;
    const auto final_granule = static_cast<std::int64_t>(samples + pre_skip);
    for (std::size_t i = 0; i < packets.size(); ++i) {
        granule += 960;
        const bool last = i + 1 == packets.size();
        write_ogg_page(out, serial, seq++, last ? 0x04 : 0x00, last ? final_granule : granule, packets[i]);
    }
    return out;
}

std::string encode_webm_opus(const AudioClip& clip) {
    std::uint16_t pre_skip = 0;
    std::size_t samples = 0;
    const auto packets = encode_frames(clip, pre_skip, samples);

    std::string header = ebml_element(0x4282, "webm");  // DocType
    std::string out = ebml_element(kEbmlHeader, header);

    std::string entry = ebml_uint(kTrackNumber, 1) + ebml_uint(0x83, 2) /* TrackType audio */ +
                        ebml_element(kCodecId, "A_OPUS") + ebml_element(kCodecPrivate, opus_head(pre_skip, 48000));
    std::string tracks = ebml_element(kTracks, ebml_element(kTrackEntry, entry));

    std::string cluster = ebml_uint(0xE7, 0);  // Timecode
    for (std::size_t i = 0; i < packets.size(); ++i) {
        std::string block;
        block += static_cast<char>(0x81);  // track 1
        const auto tc = static_cast<std::uint16_t>(i * 20);
        block += static_cast<char>(tc >> 8);
        block += static_cast<char>(tc & 0xff);
        block += static_cast<char>(0x80);  // keyframe, no lacing
        block += packets[i];
        cluster += ebml_element(kSimpleBlock, block);
    }
    // Segment and Cluster use the unknown size a live recorder would write.
    std::string segment = tracks + ebml_id(kCluster) + std::string("\x01\xFF\xFF\xFF\xFF\xFF\xFF\xFF", 8) + cluster;
    out += ebml_id(kSegment) + std::string("\x01\xFF\xFF\xFF\xFF\xFF\xFF\xFF", 8) + segment;
    (void)samples;
    return out;
}

}  // namespace cha
