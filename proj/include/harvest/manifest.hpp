#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "harvest/hash128.hpp"

namespace harvest {

// Append-only JSON-lines event log. Every event is one self-terminated line,
// flushed immediately so a killed process leaves at most one partial line.
class ManifestWriter {
  public:
    // Opens for append; if the file ends mid-line (prior crash), a newline
    // is inserted first so the next event starts clean.
    explicit ManifestWriter(std::string path);

    // Adds "event": type to the object and appends it.
    void append(const std::string& type, nlohmann::json data = nlohmann::json::object());

    const std::string& path() const { return path_; }

  private:
    std::string path_;
};

struct ManifestReadResult {
    std::vector<nlohmann::json> events;
    std::size_t skipped_lines = 0;  // unparseable lines, e.g. a crash-cut tail
};

// Missing file yields an empty event list.
ManifestReadResult read_manifest(const std::string& path);

// 32 hex chars (lo then hi, 16 each).
std::string hash_hex(const Hash128& h);

// Content digest of a file; throws std::runtime_error when unreadable.
Hash128 file_digest(const std::string& path);

}  // namespace harvest
