#include "cha/service/store.hpp"

#include <fstream>
#include <sstream>

#include "cha/error.hpp"
#include "cha/util/digest.hpp"
#include "json_codec.hpp"

namespace cha {

namespace fs = std::filesystem;
using detail::ojson;
using json = nlohmann::json;

namespace {

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::io_error, "cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

bool is_hex_digest(const std::string& s) {
    if (s.size() != 64) return false;
    for (char c : s) {
        if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) return false;
    }
    return true;
}

ojson message_to_json(const Message& m) {
    ojson j{
        {"id", m.id},
        {"session_id", m.session_id},
        {"role", to_string(m.role)},
        {"transcript", m.transcript},
        {"audio_ref", m.audio_ref ? ojson(*m.audio_ref) : ojson(nullptr)},
        {"created_seq", m.created_seq},
        {"status", to_string(m.status)},
        {"failure_reason", m.failure_reason},
        {"trace_id", m.trace_id},
        {"reply_to", m.reply_to},
    };
    return j;
}

Message message_from_json(const json& j) {
    const std::string ctx = "message";
    Message m;
    m.id = detail::get_field<std::string>(j, "id", ctx);
    m.session_id = detail::get_field<std::string>(j, "session_id", ctx);
    m.role = parse_role(detail::get_field<std::string>(j, "role", ctx));
    m.transcript = detail::get_field<std::string>(j, "transcript", ctx);
    if (j.contains("audio_ref") && !j["audio_ref"].is_null()) m.audio_ref = j["audio_ref"].get<std::string>();
    m.created_seq = detail::get_field<std::uint64_t>(j, "created_seq", ctx);
    m.status = parse_message_status(detail::get_field<std::string>(j, "status", ctx));
    m.failure_reason = detail::get_field<std::string>(j, "failure_reason", ctx);
    m.trace_id = detail::get_field<std::string>(j, "trace_id", ctx);
    m.reply_to = detail::get_field<std::string>(j, "reply_to", ctx);
    return m;
}

}  // namespace

void write_file_atomic(const fs::path& path, std::string_view bytes) {
    fs::path tmp = path;
    tmp += ".tmp-" + random_hex_id(4);
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(Errc::io_error, "cannot write " + tmp.string());
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        out.flush();
        if (!out) throw Error(Errc::io_error, "write failed: " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw Error(Errc::io_error, "rename to " + path.string());
    }
}

// ---- BlobStore ----

BlobStore::BlobStore(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

fs::path BlobStore::path_for(const std::string& digest) const {
    if (!is_hex_digest(digest)) throw Error(Errc::not_found, "audio " + digest);
    return dir_ / (digest + ".wav");
}

std::string BlobStore::put(const AudioClip& canonical) {
    const std::string digest = fingerprint_audio(canonical);
    const fs::path path = path_for(digest);
    if (!fs::exists(path)) write_file_atomic(path, encode_wav(canonical));
    return digest;
}

bool BlobStore::contains(const std::string& digest) const {
    return is_hex_digest(digest) && fs::exists(dir_ / (digest + ".wav"));
}

std::string BlobStore::get_bytes(const std::string& digest) const {
    const fs::path path = path_for(digest);
    if (!fs::exists(path)) throw Error(Errc::not_found, "audio " + digest);
    return read_file(path);
}

AudioRef BlobStore::load(const std::string& digest) const {
    AudioRef ref = AudioRef::of(decode_wav(get_bytes(digest)));
    if (ref.digest != digest) throw Error(Errc::io_error, "audio blob " + digest + " does not match its name");
    return ref;
}

// ---- sessions ----

std::string session_to_json(const Session& session) {
    ojson messages = ojson::array();
    for (const auto& m : session.messages) messages.push_back(message_to_json(m));
    return ojson{{"id", session.id}, {"next_seq", session.next_seq}, {"messages", messages}}.dump(2) + "\n";
}

Session session_from_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(Errc::parse_error, std::string("session: ") + e.what());
    }
    Session s;
    s.id = detail::get_field<std::string>(doc, "id", "session");
    s.next_seq = detail::get_field<std::uint64_t>(doc, "next_seq", "session");
    if (!doc.contains("messages") || !doc["messages"].is_array()) throw Error(Errc::parse_error, "session: messages");
    for (const auto& m : doc["messages"]) s.messages.push_back(message_from_json(m));
    return s;
}

SessionStore::SessionStore(fs::path dir) : dir_(std::move(dir)) {
    fs::create_directories(dir_);
    for (const auto& entry : fs::directory_iterator(dir_)) {
        const auto& path = entry.path();
        if (path.extension() != ".json") {
            // Leftover temp file from an interrupted write.
            if (path.filename().string().find(".tmp-") != std::string::npos) fs::remove(path);
            continue;
        }
        Session s = session_from_json(read_file(path));
        bool changed = false;
        for (auto& m : s.messages) {
            if (m.status == MessageStatus::pending) {
                m.status = MessageStatus::failed;
                m.failure_reason = "interrupted";
                changed = true;
            }
        }
        if (changed) persist(s);
        sessions_.emplace(s.id, std::move(s));
    }
}

void SessionStore::persist(const Session& session) const {
    write_file_atomic(dir_ / (session.id + ".json"), session_to_json(session));
}

std::string SessionStore::create() {
    std::lock_guard lock(mutex_);
    std::string id;
    do {
        id = random_hex_id(16);
    } while (sessions_.count(id));
    Session s{id, 0, {}};
    persist(s);
    sessions_.emplace(id, std::move(s));
    return id;
}

Session SessionStore::get(const std::string& id) const {
    std::lock_guard lock(mutex_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) throw Error(Errc::not_found, "session " + id);
    return it->second;
}

bool SessionStore::contains(const std::string& id) const {
    std::lock_guard lock(mutex_);
    return sessions_.count(id) > 0;
}

std::size_t SessionStore::size() const {
    std::lock_guard lock(mutex_);
    return sessions_.size();
}

Message SessionStore::append(const std::string& session_id, Message message) {
    std::lock_guard lock(mutex_);
    auto it = sessions_.find(session_id);
    if (it == sessions_.end()) throw Error(Errc::not_found, "session " + session_id);
    Session& s = it->second;
    if (message.id.empty()) message.id = random_hex_id(16);
    message.session_id = session_id;
    message.created_seq = s.next_seq++;
    s.messages.push_back(message);
    persist(s);
    return message;
}

void SessionStore::update(const Message& message) {
    std::lock_guard lock(mutex_);
    auto it = sessions_.find(message.session_id);
    if (it == sessions_.end()) throw Error(Errc::not_found, "session " + message.session_id);
    for (auto& m : it->second.messages) {
        if (m.id == message.id) {
            m = message;
            persist(it->second);
            return;
        }
    }
    throw Error(Errc::not_found, "message " + message.id);
}

Message SessionStore::message(const std::string& session_id, const std::string& message_id) const {
    std::lock_guard lock(mutex_);
    auto it = sessions_.find(session_id);
    if (it == sessions_.end()) throw Error(Errc::not_found, "session " + session_id);
    for (const auto& m : it->second.messages) {
        if (m.id == message_id) return m;
    }
    throw Error(Errc::not_found, "message " + message_id);
}

// ---- trace log ----

TraceLog::TraceLog(fs::path file) : file_(std::move(file)) {
    if (file_.has_parent_path()) fs::create_directories(file_.parent_path());
    if (!fs::exists(file_)) return;

    const std::string content = read_file(file_);
    std::size_t pos = 0;
    while (pos < content.size()) {
        const auto nl = content.find('\n', pos);
        const bool terminated = nl != std::string::npos;
        const std::string_view line(content.data() + pos, (terminated ? nl : content.size()) - pos);
        pos = terminated ? nl + 1 : content.size();
        if (line.empty()) continue;
        try {
            if (!terminated) throw Error(Errc::parse_error, "torn line");
            TraceLogEntry entry = parse_trace_log_line(line);
            canonical_.insert_or_assign(entry.trace.trace_id, canonical_part_of_log_line(line));
        } catch (const Error&) {
            ++skipped_;
        }
    }
    if (!content.empty() && content.back() != '\n') {
        // Close off the torn fragment so the next append starts a fresh line.
        std::ofstream out(file_, std::ios::binary | std::ios::app);
        out << '\n';
    }
}

void TraceLog::append(const TraceRecord& trace, const TraceMeta& meta) {
    const std::string line = trace_log_line(trace, meta) + "\n";
    std::lock_guard lock(mutex_);
    std::ofstream out(file_, std::ios::binary | std::ios::app);
    if (!out) throw Error(Errc::io_error, "cannot append to " + file_.string());
    out.write(line.data(), static_cast<std::streamsize>(line.size()));
    out.flush();
    if (!out) throw Error(Errc::io_error, "append failed: " + file_.string());
    canonical_.insert_or_assign(trace.trace_id, canonical_part_of_log_line(line.substr(0, line.size() - 1)));
}

std::optional<std::string> TraceLog::find_canonical(const std::string& trace_id) const {
    std::lock_guard lock(mutex_);
    auto it = canonical_.find(trace_id);
    if (it == canonical_.end()) return std::nullopt;
    return it->second;
}

std::optional<TraceRecord> TraceLog::find(const std::string& trace_id) const {
    auto text = find_canonical(trace_id);
    if (!text) return std::nullopt;
    return parse_trace_json(*text);
}

std::size_t TraceLog::size() const {
    std::lock_guard lock(mutex_);
    return canonical_.size();
}

}  // namespace cha
