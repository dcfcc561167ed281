// Times the OpenMP kernels against their serial reference implementations on
// a synthetic workload and verifies the outputs agree. The parallel kernels
// must be drop-in: same results, ideally less wall time.

#include <chrono>
#include <cstdint>
#include <iomanip>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "harvest/kernels.hpp"
#include "harvest/warc.hpp"

namespace {

using steady = std::chrono::steady_clock;

const std::vector<std::string> kWordsA = {
    "veður",  "fjall",   "bátur", "morgunn", "saga",  "vindur", "strönd",
    "kaffið", "dagur",   "nótt",  "himinn",  "regn",  "sumar",  "vetur",
    "brauð",  "ljósið",  "vegur", "borgin",  "fólk",  "hafið"};
const std::vector<std::string> kWordsB = {
    "weather", "mountain", "boat",   "morning", "story",  "wind",  "shore",
    "coffee",  "day",      "night",  "sky",     "rain",   "summer", "winter",
    "bread",   "light",    "road",   "city",    "people", "sea"};
const std::vector<std::string> kFunction = {"og", "að", "er", "við", "það",
                                            "sem", "ekki", "um", "en", "til"};

std::string sentence(std::mt19937_64& rng, const std::vector<std::string>& pool) {
    std::uniform_int_distribution<std::size_t> len(8, 16);
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    std::uniform_int_distribution<std::size_t> func(0, kFunction.size() - 1);
    std::string out;
    std::size_t n = len(rng);
    for (std::size_t i = 0; i < n; ++i) {
        if (!out.empty()) out += " ";
        out += (i % 2 == 0) ? pool[pick(rng)] : kFunction[func(rng)];
    }
    out += ".";
    return out;
}

std::string page(std::mt19937_64& rng, const std::vector<std::string>& pool) {
    std::uniform_int_distribution<int> paragraphs(3, 8);
    std::string html = "<html><head><title>bench</title></head><body>";
    html += "<div><a href=\"/\">home</a> <a href=\"/x\">nav</a></div>";
    int n = paragraphs(rng);
    for (int i = 0; i < n; ++i) {
        html += "<p>";
        for (int s = 0; s < 4; ++s) html += sentence(rng, pool) + " ";
        html += "</p>";
    }
    html += "</body></html>";
    return html;
}

double time_ms(const std::function<void()>& fn, int repeat) {
    double best = 1e300;
    for (int i = 0; i < repeat; ++i) {
        auto start = steady::now();
        fn();
        std::chrono::duration<double, std::milli> elapsed = steady::now() - start;
        best = std::min(best, elapsed.count());
    }
    return best;
}

bool same_outcome(const harvest::ExtractOutcome& a, const harvest::ExtractOutcome& b) {
    return a.fate == b.fate && a.doc == b.doc && a.text_bytes == b.text_bytes;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"serial vs OpenMP kernel comparison"};
    int records = 400;
    int repeat = 3;
    app.add_option("--records", records, "synthetic records per run");
    app.add_option("--repeat", repeat, "runs per timing (best wins)");
    CLI11_PARSE(app, argc, argv);

    std::mt19937_64 rng(7);

    std::vector<std::pair<std::string, std::string>> samples;  // (text, label)
    for (int i = 0; i < 150; ++i) samples.emplace_back(sentence(rng, kWordsA), "aa");
    for (int i = 0; i < 150; ++i) samples.emplace_back(sentence(rng, kWordsB), "bb");
    harvest::LangTrainOptions options;
    options.epochs = 10;
    harvest::LangModel model = harvest::LangModel::train(samples, options);

    std::vector<std::string> stopwords = kFunction;
    stopwords.insert(stopwords.end(), {"the", "and", "a", "of"});
    harvest::StopwordList stoplist = harvest::StopwordList::from_words(stopwords, "aa");

    std::vector<std::string> bytes;
    std::vector<harvest::IndexEntry> entries;
    for (int i = 0; i < records; ++i) {
        std::string body = page(rng, i % 2 == 0 ? kWordsA : kWordsB);
        std::string http = "HTTP/1.1 200 OK\r\nContent-Type: text/html; charset=utf-8\r\n"
                           "Content-Length: " + std::to_string(body.size()) + "\r\n\r\n" +
                           body;
        harvest::WarcRecord record = harvest::make_warc_record(
            "response",
            {{"WARC-Target-URI", "http://bench.example/" + std::to_string(i)},
             {"Content-Type", "application/http; msgtype=response"}},
            http);
        bytes.push_back(harvest::serialize_warc(record));
        harvest::IndexEntry entry;
        entry.url = "http://bench.example/" + std::to_string(i);
        entry.timestamp = "20200101000000";
        entry.digest = "D" + std::to_string(i);
        entry.filename = "bench.warc.gz";
        entry.offset = static_cast<std::uint64_t>(i);
        entry.length = 1;
        entries.push_back(entry);
    }

    harvest::ExtractContext ctx;
    ctx.model = &model;
    ctx.target_label = "aa";
    ctx.lang_threshold = 0.5;
    ctx.stopwords = &stoplist;

    std::vector<harvest::ExtractOutcome> serial, parallel;
    double serial_ms = time_ms(
        [&] { serial = harvest::process_records_serial(bytes, entries, ctx); }, repeat);
    std::cout << "extract kernel, " << records << " records\n";
    std::cout << "  serial reference   " << std::fixed << std::setprecision(1)
              << std::setw(8) << serial_ms << " ms\n";
    for (int threads : {1, 2, 4, 8}) {
        double parallel_ms = time_ms(
            [&] {
                parallel = harvest::process_records_parallel(bytes, entries, ctx, threads);
            },
            repeat);
        bool equal = serial.size() == parallel.size();
        for (std::size_t i = 0; equal && i < serial.size(); ++i) {
            equal = same_outcome(serial[i], parallel[i]);
        }
        std::cout << "  openmp x" << threads << "          " << std::setw(8)
                  << parallel_ms << " ms  speedup " << std::setprecision(2)
                  << serial_ms / parallel_ms << (equal ? "" : "  MISMATCH")
                  << std::setprecision(1) << "\n";
        if (!equal) return 1;
    }

    std::vector<harvest::Document> docs;
    for (auto& outcome : serial) {
        if (outcome.fate == harvest::RecordFate::document) docs.push_back(outcome.doc);
    }
    auto counts_serial = harvest::vocab_count_serial(docs);
    double vocab_serial_ms =
        time_ms([&] { counts_serial = harvest::vocab_count_serial(docs); }, repeat);
    std::cout << "vocab kernel, " << docs.size() << " documents\n";
    std::cout << "  serial reference   " << std::setw(8) << vocab_serial_ms << " ms\n";
    for (int threads : {1, 2, 4, 8}) {
        std::unordered_map<std::string, std::uint64_t> counts_parallel;
        double vocab_parallel_ms = time_ms(
            [&] { counts_parallel = harvest::vocab_count_parallel(docs, threads); },
            repeat);
        bool equal = counts_serial == counts_parallel;
        std::cout << "  openmp x" << threads << "          " << std::setw(8)
                  << vocab_parallel_ms << " ms  speedup " << std::setprecision(2)
                  << vocab_serial_ms / vocab_parallel_ms << (equal ? "" : "  MISMATCH")
                  << std::setprecision(1) << "\n";
        if (!equal) return 1;
    }
    return 0;
}
