#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "harvest/cdx.hpp"
#include "harvest/http_client.hpp"

namespace harvest {

struct RangeRequest {
    std::string filename;
    std::uint64_t offset = 0;
    std::uint64_t length = 0;  // > 0

    static RangeRequest from(const IndexEntry& entry) {
        return {entry.filename, entry.offset, entry.length};
    }
    bool operator==(const RangeRequest&) const = default;
};

// done: bytes hold one decompressed WARC record.
// failed: transport/HTTP error after retries (nothing retrieved or short).
// corrupt: range retrieved but gzip/WARC framing is broken.
enum class FetchOutcome { done, failed, corrupt };

std::string_view to_string(FetchOutcome outcome);

struct FetchResult {
    RangeRequest source;
    FetchOutcome outcome = FetchOutcome::failed;
    std::string bytes;  // decompressed record, empty unless done
    std::string error;  // empty when done
    std::uint64_t compressed_length = 0;  // bytes actually retrieved over HTTP
};

struct FetchTotals {
    std::uint64_t attempted = 0;
    std::uint64_t done = 0;
    std::uint64_t failed = 0;
    std::uint64_t corrupt = 0;
    std::uint64_t compressed_bytes = 0;    // retrieved ranges (done + corrupt)
    std::uint64_t decompressed_bytes = 0;  // done only
};

// Stable local name for a retrieved record: the dump filename with every
// character outside [A-Za-z0-9._-] replaced by '_', then "__<offset>.warc".
std::string spool_filename(std::string_view dump_filename, std::uint64_t offset);

// One ranged fetch: Range: bytes=offset-(offset+length-1). A 200 answer is
// tolerated by slicing the range out of the full body.
FetchResult fetch_range(const HttpClient& client, const RetryPolicy& retry,
                        const RangeRequest& request);

// Fetches every entry and hands results to sink in (filename, offset) order,
// independent of parallelism: chunks are fetched with an OpenMP pool but the
// chunk result vector acts as the reorder buffer.
FetchTotals fetch_all(const HttpClient& client, const RetryPolicy& retry,
                      std::vector<IndexEntry> entries, int parallelism,
                      const std::function<void(FetchResult&&)>& sink,
                      std::size_t chunk_size = 64);

}  // namespace harvest
