#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "harvest/boilerplate.hpp"
#include "harvest/cdx.hpp"
#include "harvest/document.hpp"
#include "harvest/langid.hpp"

namespace harvest {

// Per-record CPU work: WARC parse → HTTP extract → charset decode →
// boilerplate removal → language decision. Pure per record, so the parallel
// kernel must match the serial reference bit for bit.

enum class RecordFate {
    document,       // kept; doc populated
    not_response,   // request/metadata/… record, skipped
    parse_error,    // WARC or HTTP framing broken
    non_200,        // embedded response status unusable
    empty_extract,  // zero good blocks
    lang_dropped,   // language decision negative
};

std::string_view to_string(RecordFate fate);

struct ExtractOutcome {
    RecordFate fate = RecordFate::parse_error;
    Document doc;                  // valid iff fate == document
    std::uint64_t text_bytes = 0;  // newline-joined extracted text size
    LangVerdict verdict;           // filled for document/lang_dropped
    std::string error;             // filled for parse_error
};

struct ExtractContext {
    const LangModel* model = nullptr;
    std::string target_label;
    double lang_threshold = 0.8;
    BoilerplateParams params;
    const StopwordList* stopwords = nullptr;
};

ExtractOutcome process_record(const std::string& warc_bytes, const IndexEntry& entry,
                              const ExtractContext& ctx);

// Serial reference implementation.
std::vector<ExtractOutcome> process_records_serial(
    const std::vector<std::string>& warc_bytes, const std::vector<IndexEntry>& entries,
    const ExtractContext& ctx);

// OpenMP kernel; output order equals input order regardless of thread count.
std::vector<ExtractOutcome> process_records_parallel(
    const std::vector<std::string>& warc_bytes, const std::vector<IndexEntry>& entries,
    const ExtractContext& ctx, int parallelism);

// Token counting over document lines: serial reference and sharded OpenMP
// version with a deterministic merge (addition commutes).
std::unordered_map<std::string, std::uint64_t> vocab_count_serial(
    const std::vector<Document>& docs);
std::unordered_map<std::string, std::uint64_t> vocab_count_parallel(
    const std::vector<Document>& docs, int parallelism);

}  // namespace harvest
