#include "harvest/fetch.hpp"

#include <algorithm>
#include <cctype>

#include "harvest/gzip.hpp"

namespace harvest {

std::string_view to_string(FetchOutcome outcome) {
    switch (outcome) {
        case FetchOutcome::done: return "done";
        case FetchOutcome::failed: return "failed";
        case FetchOutcome::corrupt: return "corrupt";
    }
    return "unknown";
}

std::string spool_filename(std::string_view dump_filename, std::uint64_t offset) {
    std::string out;
    out.reserve(dump_filename.size() + 24);
    for (unsigned char c : dump_filename) {
        bool keep = std::isalnum(c) || c == '.' || c == '_' || c == '-';
        out.push_back(keep ? static_cast<char>(c) : '_');
    }
    out += "__";
    out += std::to_string(offset);
    out += ".warc";
    return out;
}

FetchResult fetch_range(const HttpClient& client, const RetryPolicy& retry,
                        const RangeRequest& request) {
    FetchResult result;
    result.source = request;

    std::string range_value = "bytes=" + std::to_string(request.offset) + "-" +
                              std::to_string(request.offset + request.length - 1);
    auto response = client.get_with_retry("/" + request.filename,
                                          {{"Range", range_value}}, retry);
    if (response.status == 0) {
        result.error = "transport failure: " + response.error;
        return result;
    }
    if (response.status != 206 && response.status != 200) {
        result.error = "HTTP " + std::to_string(response.status);
        return result;
    }

    std::string compressed;
    if (response.status == 206) {
        compressed = std::move(response.body);
    } else {
        // Server ignored the range header; slice the member out ourselves.
        if (response.body.size() < request.offset + request.length) {
            result.error = "full body shorter than requested range";
            return result;
        }
        compressed = response.body.substr(request.offset, request.length);
    }
    if (compressed.size() != request.length) {
        result.error = "range answer has " + std::to_string(compressed.size()) +
                       " bytes, expected " + std::to_string(request.length);
        return result;
    }
    result.compressed_length = compressed.size();

    try {
        result.bytes = gzip_decompress_member(compressed);
    } catch (const GzipError& err) {
        result.outcome = FetchOutcome::corrupt;
        result.error = err.what();
        return result;
    }
    if (result.bytes.size() < 5 || result.bytes.compare(0, 5, "WARC/") != 0) {
        result.outcome = FetchOutcome::corrupt;
        result.error = "decompressed range is not a WARC record";
        result.bytes.clear();
        return result;
    }
    result.outcome = FetchOutcome::done;
    return result;
}

FetchTotals fetch_all(const HttpClient& client, const RetryPolicy& retry,
                      std::vector<IndexEntry> entries, int parallelism,
                      const std::function<void(FetchResult&&)>& sink,
                      std::size_t chunk_size) {
    std::stable_sort(entries.begin(), entries.end(), entry_key_less);
    if (parallelism < 1) parallelism = 1;
    if (chunk_size == 0) chunk_size = 1;

    FetchTotals totals;
    for (std::size_t base = 0; base < entries.size(); base += chunk_size) {
        std::size_t count = std::min(chunk_size, entries.size() - base);
        std::vector<FetchResult> results(count);
#pragma omp parallel for schedule(dynamic) num_threads(parallelism)
        for (std::size_t i = 0; i < count; ++i) {
            results[i] = fetch_range(client, retry, RangeRequest::from(entries[base + i]));
        }
        for (auto& result : results) {
            ++totals.attempted;
            totals.compressed_bytes += result.compressed_length;
            switch (result.outcome) {
                case FetchOutcome::done:
                    ++totals.done;
                    totals.decompressed_bytes += result.bytes.size();
                    break;
                case FetchOutcome::failed: ++totals.failed; break;
                case FetchOutcome::corrupt: ++totals.corrupt; break;
            }
            sink(std::move(result));
        }
    }
    return totals;
}

}  // namespace harvest
