#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "cha/domain/audio.hpp"
#include "cha/domain/message.hpp"
#include "cha/domain/trace.hpp"
#include "cha/orchestrator/pipeline.hpp"

namespace cha {

/// Writes `bytes` to a sibling temp file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);

/// Canonical WAV files named by fingerprint: <dir>/<digest>.wav.
class BlobStore {
public:
    explicit BlobStore(std::filesystem::path dir);

    /// Stores a canonical clip and returns its digest. Idempotent.
    std::string put(const AudioClip& canonical);
    bool contains(const std::string& digest) const;
    /// Stored WAV bytes. Throws Errc::not_found.
    std::string get_bytes(const std::string& digest) const;
    /// Throws Errc::not_found.
    AudioRef load(const std::string& digest) const;

private:
    std::filesystem::path path_for(const std::string& digest) const;
    std::filesystem::path dir_;
};

struct Session {
    std::string id;
    std::uint64_t next_seq = 0;
    std::vector<Message> messages;

    friend bool operator==(const Session&, const Session&) = default;
};

std::string session_to_json(const Session& session);
Session session_from_json(std::string_view text);

/// Sessions persisted one file each under <dir>/<id>.json.
class SessionStore {
public:
    /// Loads existing sessions; messages still pending from a previous process
    /// are marked failed("interrupted").
    explicit SessionStore(std::filesystem::path dir);

    std::string create();
    /// Throws Errc::not_found.
    Session get(const std::string& id) const;
    bool contains(const std::string& id) const;
    std::size_t size() const;

    /// Assigns id (when empty), session id and sequence number, persists and
    /// returns the stored message. Throws Errc::not_found.
    Message append(const std::string& session_id, Message message);
    /// Replaces a stored message by id. Throws Errc::not_found.
    void update(const Message& message);
    /// Throws Errc::not_found.
    Message message(const std::string& session_id, const std::string& message_id) const;

private:
    void persist(const Session& session) const;

    std::filesystem::path dir_;
    mutable std::mutex mutex_;
    std::map<std::string, Session> sessions_;
};

/// Append-only trace file, one log line per trace. A torn final line left by a
/// crash is skipped on reload and never extended.
class TraceLog final : public TraceSink {
public:
    explicit TraceLog(std::filesystem::path file);

    void append(const TraceRecord& trace, const TraceMeta& meta) override;

    std::optional<TraceRecord> find(const std::string& trace_id) const;
    /// Canonical JSON exactly as stored.
    std::optional<std::string> find_canonical(const std::string& trace_id) const;
    std::size_t size() const;
    std::size_t skipped_lines() const { return skipped_; }

private:
    std::filesystem::path file_;
    mutable std::mutex mutex_;
    std::map<std::string, std::string> canonical_;
    std::size_t skipped_ = 0;
};

}  // namespace cha
