#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "harvest/document.hpp"
#include "harvest/hash128.hpp"

namespace harvest {

struct DedupCounters {
    std::uint64_t docs_seen = 0;
    std::uint64_t docs_kept = 0;
    std::uint64_t docs_dropped_exact = 0;
    std::uint64_t docs_dropped_window = 0;
    std::uint64_t lines_seen = 0;
    std::uint64_t lines_kept = 0;
    std::uint64_t lines_dropped = 0;

    bool operator==(const DedupCounters&) const = default;
};

// Global doc/window hash sets, persistent across crawls within a run.
// Single-writer by design: dedup is the pipeline's serialization point.
struct DedupState {
    std::unordered_set<Hash128, Hash128Hasher> doc_hashes;
    std::unordered_set<Hash128, Hash128Hasher> window_hashes;
    DedupCounters counters;

    bool operator==(const DedupState&) const = default;

    // Versioned binary image: magic, version, two sorted hash arrays,
    // counter block, trailing checksum. Byte-deterministic for equal state.
    std::string serialize() const;
    static DedupState deserialize(std::string_view bytes);

    // Atomic write (temp + rename). load refuses corrupt files loudly.
    void save(const std::string& path) const;
    static DedupState load(const std::string& path);
};

// Content-only hash of the newline-joined lines; url/timestamp excluded so
// identical content at different URLs collides intentionally.
Hash128 doc_hash(const Document& doc);

// Hash per three-consecutive-line window, lines joined with 0x1E (cannot
// occur inside a normalized line). Lists shorter than 3 yield nothing.
std::vector<std::pair<std::size_t, Hash128>> window_hashes(
    const std::vector<std::string>& lines);

// Exact-duplicate stage: true = first sighting (hash inserted), false =
// duplicate. Updates docs_seen/docs_dropped_exact and line counters.
bool dedup_document_exact(const Document& doc, DedupState& state);

// Window stage for a doc that passed the exact stage. A window whose hash is
// already known marks its three lines discarded and does not re-insert;
// fresh windows insert. Returns the document with surviving lines, or
// nullopt when none survive.
std::optional<Document> dedup_windows(Document doc, DedupState& state);

// Both stages in order.
std::optional<Document> dedup_apply(Document doc, DedupState& state);

// Batch form of the exact stage, in arrival order.
std::vector<Document> dedup_documents(std::vector<Document> docs, DedupState& state);

}  // namespace harvest
