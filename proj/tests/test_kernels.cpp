#include <random>
#include <string>
#include <vector>

#include "doctest.h"

#include "harvest/gzip.hpp"
#include "harvest/kernels.hpp"
#include "harvest/stats.hpp"
#include "harvest/warc.hpp"
#include "test_support.hpp"

using namespace harvest;

namespace {

const StopwordList& fixture_stopwords() {
    static const StopwordList list = [] {
        testsup::TempDir dir;
        testsup::write_file(dir.sub("sw.txt"), testsup::fixture_stopwords_text());
        return StopwordList::load(dir.sub("sw.txt"), "is");
    }();
    return list;
}

const LangModel& seed_model() {
    static const LangModel model =
        LangModel::train(load_seed_dir(std::string(TEST_SOURCE_ROOT) + "/data/seed"));
    return model;
}

ExtractContext fixture_context() {
    ExtractContext ctx;
    ctx.model = &seed_model();
    ctx.target_label = "is";
    ctx.stopwords = &fixture_stopwords();
    return ctx;
}

// Decompressed record bytes for fixture members [0, 11); member 11 is the
// deliberately damaged one and never reaches the CPU kernel in the pipeline.
std::vector<std::string> fixture_record_bytes(const testsup::FixtureStore& store) {
    std::vector<std::string> bytes;
    for (std::size_t i = 0; i + 1 < store.entries.size(); ++i) {
        const auto& entry = store.entries[i];
        bytes.push_back(gzip_decompress_member(
            std::string_view(store.dump_bytes).substr(entry.offset, entry.length)));
    }
    return bytes;
}

IndexEntry synthetic_entry(const std::string& url) {
    IndexEntry entry;
    entry.urlkey = url;
    entry.timestamp = "20200501000000";
    entry.url = url;
    entry.mime = "text/html";
    entry.status = "200";
    entry.digest = "SYNTH";
    entry.filename = "crawl-data/x.warc.gz";
    return entry;
}

std::string response_record(const std::string& http) {
    return serialize_warc(make_warc_record(
        "response",
        {{"WARC-Record-ID", "<urn:test:r>"},
         {"WARC-Target-URI", "https://example.is/x"},
         {"Content-Type", "application/http; msgtype=response"}},
        http));
}

bool same_outcome(const ExtractOutcome& a, const ExtractOutcome& b) {
    return a.fate == b.fate && a.doc == b.doc && a.text_bytes == b.text_bytes &&
           a.verdict.label == b.verdict.label && a.verdict.score == b.verdict.score &&
           a.error == b.error;
}

}  // namespace

TEST_CASE("fixture records land on their designed fates") {
    const auto store = testsup::build_fixture_store();
    const auto bytes = fixture_record_bytes(store);
    const auto ctx = fixture_context();
    REQUIRE(bytes.size() == 11);

    std::vector<RecordFate> fates;
    for (std::size_t i = 0; i < bytes.size(); ++i) {
        fates.push_back(process_record(bytes[i], store.entries[i], ctx).fate);
    }
    using F = RecordFate;
    std::vector<RecordFate> expected = {F::document, F::document, F::document,
                                        F::document, F::empty_extract, F::lang_dropped,
                                        F::lang_dropped, F::lang_dropped, F::lang_dropped,
                                        F::not_response, F::not_response};
    CHECK(fates == expected);
}

TEST_CASE("kept fixture documents match the hand-verified extraction") {
    const auto store = testsup::build_fixture_store();
    const auto bytes = fixture_record_bytes(store);
    const auto ctx = fixture_context();

    // Records 0, 2, 3 correspond to expected docs A, B, C (record 1 is the
    // mirror of A; dedup handles it later, the kernel just extracts). Page C
    // still carries the shared footer here: only window dedup removes it.
    const std::size_t record_of[3] = {0, 2, 3};
    for (std::size_t d = 0; d < 3; ++d) {
        CAPTURE(d);
        auto out = process_record(bytes[record_of[d]], store.entries[record_of[d]], ctx);
        REQUIRE(out.fate == RecordFate::document);
        const Document& want = store.expected_docs[d];
        std::vector<std::string> want_lines = want.lines;
        if (d == 2) {
            want_lines.insert(want_lines.end(), store.footer_lines.begin(),
                              store.footer_lines.end());
        }
        CHECK(out.doc.id == want.id);
        CHECK(out.doc.url == want.url);
        CHECK(out.doc.timestamp == want.timestamp);
        CHECK(out.doc.lines == want_lines);
        CHECK(out.doc.lang_score == out.verdict.score);
        CHECK(out.verdict.label == "is");
        CHECK(out.verdict.score >= 0.8);

        std::uint64_t joined = out.doc.lines.size() - 1;
        for (const auto& line : out.doc.lines) joined += line.size();
        CHECK(out.text_bytes == joined);
    }

    auto mirror = process_record(bytes[1], store.entries[1], ctx);
    REQUIRE(mirror.fate == RecordFate::document);
    CHECK(mirror.doc.lines == store.expected_docs[0].lines);
    CHECK(mirror.doc.url == "https://spegill.example.is/vedur");
}

TEST_CASE("english fixture pages carry an en verdict") {
    const auto store = testsup::build_fixture_store();
    const auto bytes = fixture_record_bytes(store);
    const auto ctx = fixture_context();
    for (std::size_t i = 5; i <= 8; ++i) {
        CAPTURE(i);
        auto out = process_record(bytes[i], store.entries[i], ctx);
        CHECK(out.fate == RecordFate::lang_dropped);
        CHECK(out.verdict.label == "en");
    }
}

TEST_CASE("broken records report parse errors, unusable statuses non_200") {
    const auto ctx = fixture_context();
    const auto entry = synthetic_entry("https://example.is/x");

    auto garbage = process_record("not a warc record at all", entry, ctx);
    CHECK(garbage.fate == RecordFate::parse_error);
    CHECK_FALSE(garbage.error.empty());

    auto bad_http = process_record(response_record("this is not an http response"),
                                   entry, ctx);
    CHECK(bad_http.fate == RecordFate::parse_error);
    CHECK_FALSE(bad_http.error.empty());

    auto missing = process_record(
        response_record("HTTP/1.1 404 Not Found\r\nContent-Length: 9\r\n\r\nnot found"),
        entry, ctx);
    CHECK(missing.fate == RecordFate::non_200);

    auto moved = process_record(
        response_record("HTTP/1.1 301 Moved\r\nLocation: /y\r\nContent-Length: 0\r\n\r\n"),
        entry, ctx);
    CHECK(moved.fate == RecordFate::non_200);
}

TEST_CASE("parallel extraction kernel matches the serial reference") {
    const auto store = testsup::build_fixture_store();
    const auto ctx = fixture_context();

    // Mix of real fixture records and synthetic edge cases, repeated so the
    // schedule has enough work items to interleave.
    std::vector<std::string> bytes = fixture_record_bytes(store);
    std::vector<IndexEntry> entries(store.entries.begin(), store.entries.end() - 1);
    bytes.push_back("junk");
    entries.push_back(synthetic_entry("https://example.is/junk"));
    bytes.push_back(
        response_record("HTTP/1.1 500 Boom\r\nContent-Length: 4\r\n\r\noops"));
    entries.push_back(synthetic_entry("https://example.is/boom"));

    const std::size_t base = bytes.size();
    for (std::size_t rep = 0; rep < 2; ++rep) {
        for (std::size_t i = 0; i < base; ++i) {
            bytes.push_back(bytes[i]);
            entries.push_back(entries[i]);
        }
    }

    const auto serial = process_records_serial(bytes, entries, ctx);
    REQUIRE(serial.size() == bytes.size());
    for (int parallelism : {1, 2, 4, 8}) {
        CAPTURE(parallelism);
        const auto parallel = process_records_parallel(bytes, entries, ctx, parallelism);
        REQUIRE(parallel.size() == serial.size());
        for (std::size_t i = 0; i < serial.size(); ++i) {
            CAPTURE(i);
            CHECK(same_outcome(serial[i], parallel[i]));
        }
    }
}

TEST_CASE("parallel vocab counting matches the serial reference and stats::vocab") {
    std::mt19937_64 rng(717);
    std::vector<Document> docs;
    for (int d = 0; d < 200; ++d) {
        Document doc;
        doc.id = "doc" + std::to_string(d);
        int lines = 1 + static_cast<int>(rng() % 6);
        for (int l = 0; l < lines; ++l) doc.lines.push_back(testsup::random_line(rng));
        docs.push_back(std::move(doc));
    }

    const auto serial = vocab_count_serial(docs);
    CHECK(serial == vocab(docs, 1).counts);
    for (int parallelism : {1, 2, 4, 8}) {
        CAPTURE(parallelism);
        CHECK(vocab_count_parallel(docs, parallelism) == serial);
    }

    CHECK(vocab_count_serial({}).empty());
    CHECK(vocab_count_parallel({}, 4).empty());
}
