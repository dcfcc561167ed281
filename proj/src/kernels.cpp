#include "harvest/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include "harvest/stats.hpp"
#include "harvest/warc.hpp"

namespace harvest {

std::string_view to_string(RecordFate fate) {
    switch (fate) {
        case RecordFate::document: return "document";
        case RecordFate::not_response: return "not_response";
        case RecordFate::parse_error: return "parse_error";
        case RecordFate::non_200: return "non_200";
        case RecordFate::empty_extract: return "empty_extract";
        case RecordFate::lang_dropped: return "lang_dropped";
    }
    return "unknown";
}

ExtractOutcome process_record(const std::string& warc_bytes, const IndexEntry& entry,
                              const ExtractContext& ctx) {
    ExtractOutcome out;
    WarcRecord record;
    try {
        record = parse_warc(warc_bytes);
    } catch (const WarcParseError& err) {
        out.fate = RecordFate::parse_error;
        out.error = err.what();
        return out;
    }
    if (record.warc_type() != "response") {
        out.fate = RecordFate::not_response;
        return out;
    }
    HttpPayload payload;
    try {
        payload = extract_http(record);
    } catch (const std::exception& err) {
        out.fate = RecordFate::parse_error;
        out.error = err.what();
        return out;
    }
    if (payload.status != 200) {
        out.fate = RecordFate::non_200;
        return out;
    }

    DecodedText decoded = decode_text(payload);
    std::vector<std::string> lines =
        extract_clean_text(decoded.text, ctx.params, *ctx.stopwords);
    if (lines.empty()) {
        out.fate = RecordFate::empty_extract;
        return out;
    }

    Document doc;
    doc.id = Document::make_id(entry.digest, entry.timestamp, entry.url);
    doc.url = entry.url;
    doc.timestamp = entry.timestamp;
    doc.lines = std::move(lines);
    for (const auto& line : doc.lines) out.text_bytes += line.size();
    out.text_bytes += doc.lines.size() - 1;  // joining newlines

    LangDecision decision =
        filter_language(doc, *ctx.model, ctx.target_label, ctx.lang_threshold);
    out.verdict = decision.verdict;
    if (!decision.keep) {
        out.fate = RecordFate::lang_dropped;
        return out;
    }
    doc.lang_score = decision.verdict.score;
    out.doc = std::move(doc);
    out.fate = RecordFate::document;
    return out;
}

std::vector<ExtractOutcome> process_records_serial(
    const std::vector<std::string>& warc_bytes, const std::vector<IndexEntry>& entries,
    const ExtractContext& ctx) {
    std::vector<ExtractOutcome> outcomes(warc_bytes.size());
    for (std::size_t i = 0; i < warc_bytes.size(); ++i) {
        outcomes[i] = process_record(warc_bytes[i], entries[i], ctx);
    }
    return outcomes;
}

std::vector<ExtractOutcome> process_records_parallel(
    const std::vector<std::string>& warc_bytes, const std::vector<IndexEntry>& entries,
    const ExtractContext& ctx, int parallelism) {
    if (parallelism < 1) parallelism = 1;
    std::vector<ExtractOutcome> outcomes(warc_bytes.size());
#pragma omp parallel for schedule(dynamic) num_threads(parallelism)
    for (std::size_t i = 0; i < warc_bytes.size(); ++i) {
        outcomes[i] = process_record(warc_bytes[i], entries[i], ctx);
    }
    return outcomes;
}

std::unordered_map<std::string, std::uint64_t> vocab_count_serial(
    const std::vector<Document>& docs) {
    std::unordered_map<std::string, std::uint64_t> counts;
    for (const auto& doc : docs) {
        for (const auto& line : doc.lines) {
            for (auto& token : tokenize(line)) ++counts[std::move(token)];
        }
    }
    return counts;
}

std::unordered_map<std::string, std::uint64_t> vocab_count_parallel(
    const std::vector<Document>& docs, int parallelism) {
    if (parallelism < 1) parallelism = 1;
    std::vector<std::unordered_map<std::string, std::uint64_t>> shards(
        static_cast<std::size_t>(parallelism));
#pragma omp parallel for schedule(static) num_threads(parallelism)
    for (std::size_t i = 0; i < docs.size(); ++i) {
        int shard = 0;
#ifdef _OPENMP
        shard = omp_get_thread_num();
#endif
        auto& counts = shards[static_cast<std::size_t>(shard)];
        for (const auto& line : docs[i].lines) {
            for (auto& token : tokenize(line)) ++counts[std::move(token)];
        }
    }
    auto merged = std::move(shards[0]);
    for (std::size_t s = 1; s < shards.size(); ++s) {
        for (auto& [token, count] : shards[s]) merged[token] += count;
    }
    return merged;
}

}  // namespace harvest
