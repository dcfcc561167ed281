#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "harvest/http_client.hpp"

namespace harvest {

// Crawl collection label, e.g. "CC-MAIN-2020-10".
struct CrawlId {
    std::string label;

    static bool valid(std::string_view label);
    bool operator==(const CrawlId&) const = default;
};

// Filter fields use the index API syntax: a leading '~' marks a regex match,
// e.g. ("~mime", ".*html.*") or ("status", "200").
using IndexFilter = std::pair<std::string, std::string>;

std::vector<IndexFilter> default_index_filters();

struct IndexQuery {
    std::string url_pattern;
    CrawlId crawl;
    int page = 0;
    std::vector<IndexFilter> filters;
};

// One index hit: where a captured page lives inside the crawl bucket.
struct IndexEntry {
    std::string urlkey;
    std::string timestamp;  // 14-digit UTC, YYYYMMDDhhmmss
    std::string url;
    std::string mime;
    std::string status;     // 3-digit HTTP status as served
    std::string digest;     // base-32 content hash
    std::string filename;   // dump file path within the bucket
    std::uint64_t offset = 0;
    std::uint64_t length = 0;

    bool operator==(const IndexEntry&) const = default;
};

// Canonical downstream order; dedup and fetch scheduling both rely on it.
inline bool entry_key_less(const IndexEntry& a, const IndexEntry& b) {
    if (a.filename != b.filename) return a.filename < b.filename;
    return a.offset < b.offset;
}

// Manifest/intermediate-file representation of an entry. from_json throws
// nlohmann::json::exception when required fields are missing or mistyped.
nlohmann::json entry_to_json(const IndexEntry& entry);
IndexEntry entry_from_json(const nlohmann::json& j);

struct CdxError : std::runtime_error {
    explicit CdxError(const std::string& what) : std::runtime_error(what) {}
};

std::string url_encode_component(std::string_view raw);

// Path + query string for one index request ("/<crawl>-index?url=...").
std::string build_index_path(const IndexQuery& query, bool show_num_pages);

// nullopt on any malformed line: bad JSON, missing url/timestamp/filename,
// unparseable offset/length, length == 0, offset + length overflow, or a
// non-3-digit status. Offset and length are accepted as numbers or strings.
std::optional<IndexEntry> parse_index_line(std::string_view line);

struct IndexPage {
    std::vector<IndexEntry> entries;  // served order
    std::size_t lines_skipped = 0;
};

IndexPage parse_index_page(std::string_view body);

struct FailedPage {
    CrawlId crawl;
    int page = -1;  // -1: the page-count handshake itself failed
    std::string reason;
};

struct EnumerateStats {
    std::uint64_t pages_fetched = 0;
    std::uint64_t pages_failed = 0;
    std::uint64_t lines_parsed = 0;
    std::uint64_t lines_skipped = 0;
    std::uint64_t duplicates_dropped = 0;
};

struct EnumerateResult {
    std::vector<IndexEntry> entries;  // (filename, offset)-sorted and unique
    EnumerateStats stats;
    std::vector<FailedPage> failed_pages;
};

class CdxClient {
  public:
    CdxClient(HttpClient client, RetryPolicy retry);

    // Pagination handshake (&showNumPages=true). Throws CdxError when the
    // server answer is not usable even after retries.
    std::uint64_t page_count(const IndexQuery& query) const;

    // Tolerant page fetch; throws CdxError on persistent transport/5xx/4xx
    // failure so the caller can record the page as failed and continue.
    IndexPage fetch_index_page(const IndexQuery& query) const;

    // All pages of all crawls. Per-page failures are collected, never fatal.
    EnumerateResult enumerate_tld(const std::string& pattern,
                                  const std::vector<CrawlId>& crawls,
                                  const std::vector<IndexFilter>& filters) const;

  private:
    HttpClient client_;
    RetryPolicy retry_;
};

}  // namespace harvest
