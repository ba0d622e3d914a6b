#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cha/domain/trace.hpp"
#include "cha/domain/value.hpp"

namespace cha {

struct MemoryEntry {
    std::string key;  // step<k>.<field>
    Value value;
    std::size_t byte_size = 0;
    std::string producer_task;
};

/// Write-once, insertion-ordered store of one pipeline run's tool outputs.
class ShortTermMemory {
public:
    /// Throws Errc::duplicate_memory_key if `key` is already present.
    void insert(std::string key, Value value, std::string producer_task);

    /// Throws Errc::missing_memory_key.
    const Value& at(std::string_view key) const;
    const MemoryEntry* find(std::string_view key) const;

    const std::vector<MemoryEntry>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }
    std::size_t size() const { return entries_.size(); }

    /// "step<k>.<field> (<producer>): <value>" per line; empty when nothing stored.
    std::string summary() const;

    /// The first emotion value stored, in insertion order.
    std::optional<EmotionLabel> first_emotion() const;

    std::vector<MemoryRecord> to_records() const;
    static ShortTermMemory from_records(const std::vector<MemoryRecord>& records);

private:
    std::vector<MemoryEntry> entries_;
    std::map<std::string, std::size_t, std::less<>> index_;
};

}  // namespace cha
