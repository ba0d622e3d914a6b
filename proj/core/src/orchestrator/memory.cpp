#include "cha/orchestrator/memory.hpp"

#include "cha/error.hpp"

namespace cha {

void ShortTermMemory::insert(std::string key, Value value, std::string producer_task) {
    if (index_.contains(key)) throw Error(Errc::duplicate_memory_key, key);
    const std::size_t size = value_byte_size(value);
    index_.emplace(key, entries_.size());
    entries_.push_back(MemoryEntry{std::move(key), std::move(value), size, std::move(producer_task)});
}

const MemoryEntry* ShortTermMemory::find(std::string_view key) const {
    auto it = index_.find(key);
    return it == index_.end() ? nullptr : &entries_[it->second];
}

const Value& ShortTermMemory::at(std::string_view key) const {
    if (const auto* entry = find(key)) return entry->value;
    throw Error(Errc::missing_memory_key, std::string(key));
}

std::string ShortTermMemory::summary() const {
    std::string out;
    for (const auto& e : entries_) {
        out += e.key + " (" + e.producer_task + "): " + describe_value(e.value) + '\n';
    }
    return out;
}

std::optional<EmotionLabel> ShortTermMemory::first_emotion() const {
    for (const auto& e : entries_) {
        if (const auto* label = std::get_if<EmotionLabel>(&e.value)) return *label;
    }
    return std::nullopt;
}

std::vector<MemoryRecord> ShortTermMemory::to_records() const {
    std::vector<MemoryRecord> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) out.push_back(MemoryRecord{e.key, e.producer_task, e.byte_size, e.value});
    return out;
}

ShortTermMemory ShortTermMemory::from_records(const std::vector<MemoryRecord>& records) {
    ShortTermMemory memory;
    for (const auto& r : records) memory.insert(r.key, r.value, r.producer_task);
    return memory;
}

}  // namespace cha
