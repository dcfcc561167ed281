// harvest: web-corpus construction pipeline.
//
// `run` executes the whole flow (index enumeration → ranged fetch →
// extraction → language filter → dedup → corpus + report) with a resumable
// manifest; the per-stage subcommands read/write the same JSON-lines shapes
// for desk-scale debugging. Exit codes: 0 ok, 1 config, 2 corrupt state,
// 3 failure share at or above --fail-threshold.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "harvest/kernels.hpp"
#include "harvest/manifest.hpp"
#include "harvest/pipeline.hpp"
#include "harvest/warc.hpp"

namespace {

// "-" means stdin/stdout.
std::unique_ptr<std::istream> open_input(const std::string& path) {
    if (path == "-") return std::make_unique<std::istream>(std::cin.rdbuf());
    auto in = std::make_unique<std::ifstream>(path, std::ios::binary);
    if (!*in) throw harvest::ConfigError("cannot open input: " + path);
    return in;
}

std::unique_ptr<std::ostream> open_output(const std::string& path) {
    if (path == "-") return std::make_unique<std::ostream>(std::cout.rdbuf());
    auto out = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
    if (!*out) throw harvest::ConfigError("cannot open output: " + path);
    return out;
}

// Applies fn to every line that parses as a JSON object; returns the count
// of lines skipped as unparseable.
std::size_t for_each_json_line(std::istream& in,
                               const std::function<void(nlohmann::json&&)>& fn) {
    std::size_t skipped = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
            ++skipped;
            continue;
        }
        fn(std::move(j));
    }
    return skipped;
}

std::string_view trimmed(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

// Flat `key = value` file using the long flag names; `#` starts a comment and
// `crawl` may repeat. Command-line flags override file values.
void apply_config_file(const std::string& path, harvest::PipelineConfig& cfg,
                       CLI::App* cmd) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw harvest::ConfigError("cannot open config file: " + path);

    auto flag_given = [&](const std::string& name) {
        return cmd->get_option("--" + name)->count() > 0;
    };
    auto to_double = [](const std::string& key, const std::string& value) {
        std::size_t pos = 0;
        double parsed = 0;
        try {
            parsed = std::stod(value, &pos);
        } catch (const std::exception&) {
            pos = std::string::npos;
        }
        if (pos != value.size()) {
            throw harvest::ConfigError("config key " + key + ": not a number: " + value);
        }
        return parsed;
    };
    auto to_int = [&](const std::string& key, const std::string& value) {
        double parsed = to_double(key, value);
        if (parsed != static_cast<int>(parsed)) {
            throw harvest::ConfigError("config key " + key + ": not an integer: " + value);
        }
        return static_cast<int>(parsed);
    };

    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view body = trimmed(line);
        if (body.empty() || body.front() == '#') continue;
        std::size_t eq = body.find('=');
        if (eq == std::string_view::npos) {
            throw harvest::ConfigError("config line " + std::to_string(line_no) +
                                       ": expected key = value");
        }
        std::string key{trimmed(body.substr(0, eq))};
        std::string value{trimmed(body.substr(eq + 1))};
        if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') &&
            value.back() == value.front()) {
            value = value.substr(1, value.size() - 2);
        }

        if (key == "crawl") {
            if (!flag_given("crawl")) cfg.crawls.push_back(value);
            continue;
        }
        if (flag_given(key)) continue;
        if (key == "url-pattern") cfg.url_pattern = value;
        else if (key == "crawl-from") cfg.crawl_from = value;
        else if (key == "crawl-to") cfg.crawl_to = value;
        else if (key == "index-url") cfg.index_base_url = value;
        else if (key == "data-url") cfg.data_base_url = value;
        else if (key == "language") cfg.language = value;
        else if (key == "lang-threshold") cfg.lang_threshold = to_double(key, value);
        else if (key == "model") cfg.lang_model_path = value;
        else if (key == "seed-dir") cfg.seed_dir = value;
        else if (key == "stopwords") cfg.stopwords_path = value;
        else if (key == "max-link-density")
            cfg.boilerplate.max_link_density = to_double(key, value);
        else if (key == "length-low") cfg.boilerplate.length_low = to_int(key, value);
        else if (key == "length-high") cfg.boilerplate.length_high = to_int(key, value);
        else if (key == "stopwords-low")
            cfg.boilerplate.stopwords_low = to_double(key, value);
        else if (key == "stopwords-high")
            cfg.boilerplate.stopwords_high = to_double(key, value);
        else if (key == "max-heading-distance")
            cfg.boilerplate.max_heading_distance = to_int(key, value);
        else if (key == "output") cfg.output_dir = value;
        else if (key == "state") cfg.state_path = value;
        else if (key == "parallelism") cfg.parallelism = to_int(key, value);
        else if (key == "checkpoint-interval")
            cfg.checkpoint_interval = to_int(key, value);
        else if (key == "chunk-size")
            cfg.chunk_size = static_cast<std::size_t>(to_int(key, value));
        else if (key == "fail-threshold") cfg.fail_threshold = to_double(key, value);
        else if (key == "retry-max-attempts")
            cfg.retry_max_attempts = to_int(key, value);
        else if (key == "retry-initial-delay-ms")
            cfg.retry_initial_delay_ms = to_int(key, value);
        else
            throw harvest::ConfigError("unknown config key: " + key);
    }
}

void add_boilerplate_flags(CLI::App* cmd, harvest::BoilerplateParams& params) {
    cmd->add_option("--max-link-density", params.max_link_density,
                    "blocks above this anchor-character share are bad");
    cmd->add_option("--length-low", params.length_low, "short-block threshold (chars)");
    cmd->add_option("--length-high", params.length_high, "long-block threshold (chars)");
    cmd->add_option("--stopwords-low", params.stopwords_low,
                    "minimum stopword density for neargood");
    cmd->add_option("--stopwords-high", params.stopwords_high,
                    "minimum stopword density for good");
    cmd->add_option("--max-heading-distance", params.max_heading_distance,
                    "chars a heading may sit above its good block");
}

void print_outcome(const harvest::RunOutcome& outcome, const std::string& output_dir) {
    if (outcome.already_complete) {
        std::cout << "run already complete; outputs in " << output_dir << "\n";
        return;
    }
    if (outcome.funnel_error.empty()) {
        std::cout << outcome.funnel.to_text();
    } else {
        std::cout << "funnel unavailable: " << outcome.funnel_error << "\n";
    }
    std::cout << "entries " << outcome.entries_total << ", fetched " << outcome.fetch.done
              << ", failed " << outcome.fetch.failed << ", corrupt "
              << outcome.fetch.corrupt << ", documents kept " << outcome.dedup.docs_kept
              << "\n";
    std::cout << "report: " << output_dir << "/report.txt, corpus: " << output_dir
              << "/corpus.jsonl\n";
}

const char* env_or(const char* name, const std::string& fallback) {
    const char* v = std::getenv(name);
    return (v && *v) ? v : fallback.c_str();
}

int do_index(const std::string& pattern, const std::vector<std::string>& crawl_labels,
             std::string index_url, const std::string& out_path) {
    index_url = env_or("HARVEST_INDEX_URL", index_url);
    std::vector<harvest::CrawlId> crawls;
    for (const auto& label : crawl_labels) {
        if (!harvest::CrawlId::valid(label)) {
            throw harvest::ConfigError("invalid crawl label: " + label);
        }
        crawls.push_back({label});
    }
    harvest::CdxClient client(harvest::HttpClient(index_url), harvest::RetryPolicy{});
    auto result =
        client.enumerate_tld(pattern, crawls, harvest::default_index_filters());
    auto out = open_output(out_path);
    for (const auto& entry : result.entries) {
        *out << harvest::entry_to_json(entry).dump() << "\n";
    }
    std::cerr << "entries " << result.entries.size() << ", pages fetched "
              << result.stats.pages_fetched << ", pages failed "
              << result.stats.pages_failed << ", lines skipped "
              << result.stats.lines_skipped << ", duplicates dropped "
              << result.stats.duplicates_dropped << "\n";
    for (const auto& page : result.failed_pages) {
        std::cerr << "failed: " << page.crawl.label << " page " << page.page << ": "
                  << page.reason << "\n";
    }
    return 0;
}

int do_fetch(const std::string& entries_path, const std::string& spool_dir,
             std::string data_url, int parallelism, std::size_t chunk_size,
             const std::string& out_path) {
    data_url = env_or("HARVEST_DATA_URL", data_url);
    std::vector<harvest::IndexEntry> entries;
    std::size_t skipped = 0;
    {
        auto in = open_input(entries_path);
        skipped += for_each_json_line(*in, [&](nlohmann::json&& j) {
            try {
                entries.push_back(harvest::entry_from_json(j));
            } catch (const nlohmann::json::exception&) {
                ++skipped;
            }
        });
    }
    std::filesystem::create_directories(spool_dir);
    auto out = open_output(out_path);
    harvest::HttpClient client(data_url);
    auto totals = harvest::fetch_all(
        client, harvest::RetryPolicy{}, entries, parallelism,
        [&](harvest::FetchResult&& result) {
            // The record carries the full entry so later stages can build ids.
            harvest::IndexEntry matching;
            for (const auto& e : entries) {
                if (e.filename == result.source.filename &&
                    e.offset == result.source.offset) {
                    matching = e;
                    break;
                }
            }
            nlohmann::json record = harvest::entry_to_json(matching);
            record["outcome"] = std::string(harvest::to_string(result.outcome));
            record["compressed"] = result.compressed_length;
            record["decompressed"] = result.bytes.size();
            if (result.outcome == harvest::FetchOutcome::done) {
                std::string name =
                    harvest::spool_filename(result.source.filename, result.source.offset);
                std::string path = spool_dir + "/" + name;
                std::ofstream spool(path, std::ios::binary | std::ios::trunc);
                spool.write(result.bytes.data(),
                            static_cast<std::streamsize>(result.bytes.size()));
                if (!spool) throw harvest::StateError("cannot write spool file: " + path);
                record["spool"] = name;
            } else {
                record["error"] = result.error;
            }
            *out << record.dump() << "\n";
        },
        chunk_size);
    std::cerr << "attempted " << totals.attempted << ", done " << totals.done
              << ", failed " << totals.failed << ", corrupt " << totals.corrupt
              << ", skipped input lines " << skipped << "\n";
    return 0;
}

int do_extract(const std::string& records_path, const std::string& spool_dir,
               const std::string& stopwords_path, const std::string& language,
               const harvest::BoilerplateParams& params, const std::string& out_path) {
    auto stopwords = harvest::StopwordList::load(stopwords_path, language);
    auto in = open_input(records_path);
    auto out = open_output(out_path);
    std::size_t documents = 0, skipped = 0, empties = 0, errors = 0;
    for_each_json_line(*in, [&](nlohmann::json&& j) {
        if (j.value("outcome", "done") != "done") {
            ++skipped;
            return;
        }
        harvest::IndexEntry entry;
        try {
            entry = harvest::entry_from_json(j);
        } catch (const nlohmann::json::exception&) {
            ++skipped;
            return;
        }
        std::string spool_path =
            spool_dir + "/" +
            j.value("spool",
                    harvest::spool_filename(entry.filename, entry.offset));
        std::ifstream spool(spool_path, std::ios::binary);
        if (!spool) throw harvest::StateError("spool file missing: " + spool_path);
        std::string bytes((std::istreambuf_iterator<char>(spool)),
                          std::istreambuf_iterator<char>());
        try {
            harvest::WarcRecord record = harvest::parse_warc(bytes);
            if (record.warc_type() != "response") {
                ++skipped;
                return;
            }
            harvest::HttpPayload payload = harvest::extract_http(record);
            if (payload.status != 200) {
                ++skipped;
                return;
            }
            harvest::DecodedText decoded = harvest::decode_text(payload);
            auto lines = harvest::extract_clean_text(decoded.text, params, stopwords);
            if (lines.empty()) {
                ++empties;
                return;
            }
            harvest::Document doc;
            doc.id = harvest::Document::make_id(entry.digest, entry.timestamp, entry.url);
            doc.url = entry.url;
            doc.timestamp = entry.timestamp;
            doc.lines = std::move(lines);
            *out << harvest::document_to_json(doc).dump() << "\n";
            ++documents;
        } catch (const std::runtime_error&) {
            ++errors;
        }
    });
    std::cerr << "documents " << documents << ", skipped " << skipped << ", empty "
              << empties << ", errors " << errors << "\n";
    return 0;
}

int do_filter(const std::string& input_path, const std::string& model_path,
              const std::string& seed_dir, const std::string& language, double threshold,
              const std::string& out_path) {
    harvest::LangModel model = model_path.empty()
                                   ? harvest::LangModel::train(
                                         harvest::load_seed_dir(seed_dir))
                                   : harvest::LangModel::load(model_path);
    auto in = open_input(input_path);
    auto out = open_output(out_path);
    std::size_t kept = 0, dropped = 0;
    for_each_json_line(*in, [&](nlohmann::json&& j) {
        harvest::Document doc = harvest::document_from_json(j);
        auto decision = harvest::filter_language(doc, model, language, threshold);
        if (!decision.keep) {
            ++dropped;
            return;
        }
        doc.lang_score = decision.verdict.score;
        *out << harvest::document_to_json(doc).dump() << "\n";
        ++kept;
    });
    std::cerr << "kept " << kept << ", dropped " << dropped << "\n";
    return 0;
}

int do_dedup(const std::string& input_path, const std::string& out_path,
             const std::string& state_in, const std::string& state_out) {
    harvest::DedupState state;
    if (!state_in.empty()) state = harvest::DedupState::load(state_in);
    auto in = open_input(input_path);
    auto out = open_output(out_path);
    for_each_json_line(*in, [&](nlohmann::json&& j) {
        auto survived =
            harvest::dedup_apply(harvest::document_from_json(j), state);
        if (survived) *out << harvest::document_to_json(*survived).dump() << "\n";
    });
    if (!state_out.empty()) state.save(state_out);
    const auto& c = state.counters;
    std::cerr << "docs seen " << c.docs_seen << ", kept " << c.docs_kept
              << ", exact dropped " << c.docs_dropped_exact << ", window dropped "
              << c.docs_dropped_window << "; lines kept " << c.lines_kept << " of "
              << c.lines_seen << "\n";
    return 0;
}

int do_stats(const std::string& path_a, const std::string& path_b,
             std::uint64_t min_count, const std::string& format) {
    auto load_lines = [](const std::string& path) {
        auto in = open_input(path);
        std::vector<std::string> lines;
        for_each_json_line(*in, [&](nlohmann::json&& j) {
            for (const auto& line : harvest::document_from_json(j).lines) {
                lines.push_back(line);
            }
        });
        return lines;
    };
    harvest::Vocab a = harvest::vocab_from_lines(load_lines(path_a), min_count);
    harvest::Vocab b = harvest::vocab_from_lines(load_lines(path_b), min_count);
    harvest::VocabReport report = harvest::compare_vocab(a, b);
    report.name_a = path_a;
    report.name_b = path_b;
    std::cout << (format == "json" ? report.to_json() : report.to_text());
    return 0;
}

int do_langid_train(const std::string& seed_dir, const std::string& out_path,
                    const harvest::LangTrainOptions& options) {
    auto samples = harvest::load_seed_dir(seed_dir);
    harvest::LangModel model = harvest::LangModel::train(samples, options);
    model.save(out_path);
    std::cerr << "trained on " << samples.size() << " samples, labels:";
    for (const auto& label : model.labels()) std::cerr << " " << label;
    std::cerr << ", hash bits " << model.hash_bits() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"web corpus construction pipeline"};
    app.require_subcommand(1);

    // --- run -------------------------------------------------------------
    harvest::PipelineConfig cfg;
    std::string run_config_path;
    auto* run_cmd = app.add_subcommand("run", "execute the full pipeline");
    run_cmd->add_option("--config", run_config_path, "key = value config file; flags win");
    run_cmd->add_option("--url-pattern", cfg.url_pattern, "index url pattern, e.g. *.is");
    run_cmd->add_option("--crawl", cfg.crawls, "crawl label (repeatable); wins over range");
    run_cmd->add_option("--crawl-from", cfg.crawl_from, "first crawl label of the range");
    run_cmd->add_option("--crawl-to", cfg.crawl_to, "last crawl label of the range");
    run_cmd->add_option("--index-url", cfg.index_base_url, "index API base URL");
    run_cmd->add_option("--data-url", cfg.data_base_url, "data store base URL");
    run_cmd->add_option("--language", cfg.language, "target language label");
    run_cmd->add_option("--lang-threshold", cfg.lang_threshold,
                        "minimum language score to keep a document");
    run_cmd->add_option("--model", cfg.lang_model_path, "language model file (LIDM)");
    run_cmd->add_option("--seed-dir", cfg.seed_dir,
                        "seed text directory for startup training");
    run_cmd->add_option("--stopwords", cfg.stopwords_path, "stopword list file");
    add_boilerplate_flags(run_cmd, cfg.boilerplate);
    run_cmd->add_option("--output", cfg.output_dir, "output directory");
    run_cmd->add_option("--state", cfg.state_path, "dedup state path");
    run_cmd->add_option("--parallelism", cfg.parallelism, "worker threads");
    run_cmd->add_option("--checkpoint-interval", cfg.checkpoint_interval,
                        "entries between checkpoints");
    run_cmd->add_option("--chunk-size", cfg.chunk_size, "records per parallel batch");
    run_cmd->add_option("--fail-threshold", cfg.fail_threshold,
                        "exit 3 when failed/attempted reaches this share");
    run_cmd->add_option("--retry-max-attempts", cfg.retry_max_attempts,
                        "HTTP attempts per request");
    run_cmd->add_option("--retry-initial-delay-ms", cfg.retry_initial_delay_ms,
                        "first backoff delay");
    run_cmd->add_option("--abort-after-events", cfg.abort_after_events,
                        "test hook: die after N durable writes")
        ->group("");

    // --- resume ----------------------------------------------------------
    std::string resume_manifest;
    harvest::ResumeOptions resume_options;
    auto* resume_cmd = app.add_subcommand("resume", "continue an interrupted run");
    resume_cmd->add_option("--manifest", resume_manifest, "manifest.jsonl of the run")
        ->required();
    resume_cmd
        ->add_option("--abort-after-events", resume_options.abort_after_events,
                     "test hook: die after N durable writes")
        ->group("");

    // --- index -----------------------------------------------------------
    std::string idx_pattern, idx_out = "-";
    std::string idx_url = "https://index.commoncrawl.org";
    std::vector<std::string> idx_crawls;
    auto* index_cmd = app.add_subcommand("index", "enumerate index entries as JSONL");
    index_cmd->add_option("--url-pattern", idx_pattern)->required();
    index_cmd->add_option("--crawl", idx_crawls, "crawl label (repeatable)")->required();
    index_cmd->add_option("--index-url", idx_url);
    index_cmd->add_option("-o,--output", idx_out, "output path or -");

    // --- fetch -----------------------------------------------------------
    std::string fetch_entries = "-", fetch_spool, fetch_out = "-";
    std::string fetch_url = "https://data.commoncrawl.org";
    int fetch_parallelism = 1;
    std::size_t fetch_chunk = 64;
    auto* fetch_cmd =
        app.add_subcommand("fetch", "retrieve entries into a spool directory");
    fetch_cmd->add_option("--entries", fetch_entries, "entry JSONL path or -");
    fetch_cmd->add_option("--spool-dir", fetch_spool)->required();
    fetch_cmd->add_option("--data-url", fetch_url);
    fetch_cmd->add_option("--parallelism", fetch_parallelism);
    fetch_cmd->add_option("--chunk-size", fetch_chunk);
    fetch_cmd->add_option("-o,--output", fetch_out, "fetch-record JSONL path or -");

    // --- extract ---------------------------------------------------------
    std::string ext_records = "-", ext_spool, ext_stopwords, ext_out = "-";
    std::string ext_language = "is";
    harvest::BoilerplateParams ext_params;
    auto* extract_cmd =
        app.add_subcommand("extract", "boilerplate-removed documents from the spool");
    extract_cmd->add_option("--records", ext_records, "fetch-record JSONL path or -");
    extract_cmd->add_option("--spool-dir", ext_spool)->required();
    extract_cmd->add_option("--stopwords", ext_stopwords)->required();
    extract_cmd->add_option("--language", ext_language);
    add_boilerplate_flags(extract_cmd, ext_params);
    extract_cmd->add_option("-o,--output", ext_out, "document JSONL path or -");

    // --- filter ----------------------------------------------------------
    std::string flt_input = "-", flt_model, flt_seed_dir, flt_out = "-";
    std::string flt_language = "is";
    double flt_threshold = 0.8;
    auto* filter_cmd = app.add_subcommand("filter", "keep documents in the target language");
    filter_cmd->add_option("--input", flt_input, "document JSONL path or -");
    auto* flt_model_opt = filter_cmd->add_option("--model", flt_model, "LIDM model file");
    filter_cmd->add_option("--seed-dir", flt_seed_dir, "train at startup instead")
        ->excludes(flt_model_opt);
    filter_cmd->add_option("--language", flt_language);
    filter_cmd->add_option("--threshold", flt_threshold);
    filter_cmd->add_option("-o,--output", flt_out);

    // --- dedup -----------------------------------------------------------
    std::string ddp_input = "-", ddp_out = "-", ddp_state_in, ddp_state_out;
    auto* dedup_cmd =
        app.add_subcommand("dedup", "exact + three-line-window deduplication");
    dedup_cmd->add_option("--input", ddp_input, "document JSONL path or -");
    dedup_cmd->add_option("-o,--output", ddp_out);
    dedup_cmd->add_option("--state-in", ddp_state_in, "continue from a saved state");
    dedup_cmd->add_option("--state-out", ddp_state_out, "write the final state here");

    // --- stats -----------------------------------------------------------
    std::string stats_a, stats_b, stats_format = "text";
    std::uint64_t stats_min_count = 5;
    auto* stats_cmd =
        app.add_subcommand("stats", "vocabulary comparison of two corpus files");
    stats_cmd->add_option("corpus_a", stats_a)->required();
    stats_cmd->add_option("corpus_b", stats_b)->required();
    stats_cmd->add_option("--min-count", stats_min_count,
                          "ignore tokens seen fewer times (per corpus)");
    stats_cmd->add_option("--format", stats_format)
        ->check(CLI::IsMember({"text", "json"}));

    // --- langid-train ------------------------------------------------------
    std::string lt_seed_dir, lt_out;
    harvest::LangTrainOptions lt_options;
    auto* langid_cmd =
        app.add_subcommand("langid-train", "train and save a language model");
    langid_cmd->add_option("--seed-dir", lt_seed_dir)->required();
    langid_cmd->add_option("-o,--output", lt_out)->required();
    langid_cmd->add_option("--hash-bits", lt_options.hash_bits);
    langid_cmd->add_option("--epochs", lt_options.epochs);
    langid_cmd->add_option("--learning-rate", lt_options.learning_rate);
    langid_cmd->add_option("--seed", lt_options.seed);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            if (!run_config_path.empty()) {
                apply_config_file(run_config_path, cfg, run_cmd);
            }
            cfg.apply_env_overrides();
            auto outcome = harvest::run_pipeline(cfg);
            print_outcome(outcome, cfg.output_dir);
            return outcome.exit_code;
        }
        if (resume_cmd->parsed()) {
            auto outcome = harvest::resume_pipeline(resume_manifest, resume_options);
            print_outcome(outcome,
                          std::filesystem::path(resume_manifest).parent_path().string());
            return outcome.exit_code;
        }
        if (index_cmd->parsed()) return do_index(idx_pattern, idx_crawls, idx_url, idx_out);
        if (fetch_cmd->parsed()) {
            return do_fetch(fetch_entries, fetch_spool, fetch_url, fetch_parallelism,
                            fetch_chunk, fetch_out);
        }
        if (extract_cmd->parsed()) {
            return do_extract(ext_records, ext_spool, ext_stopwords, ext_language,
                              ext_params, ext_out);
        }
        if (filter_cmd->parsed()) {
            if (flt_model.empty() && flt_seed_dir.empty()) {
                throw harvest::ConfigError("filter needs --model or --seed-dir");
            }
            return do_filter(flt_input, flt_model, flt_seed_dir, flt_language,
                             flt_threshold, flt_out);
        }
        if (dedup_cmd->parsed()) {
            return do_dedup(ddp_input, ddp_out, ddp_state_in, ddp_state_out);
        }
        if (stats_cmd->parsed()) {
            return do_stats(stats_a, stats_b, stats_min_count, stats_format);
        }
        if (langid_cmd->parsed()) {
            return do_langid_train(lt_seed_dir, lt_out, lt_options);
        }
    } catch (const harvest::ConfigError& err) {
        std::cerr << "config error: " << err.what() << "\n";
        return 1;
    } catch (const harvest::StateError& err) {
        std::cerr << "state error: " << err.what() << "\n";
        return 2;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
    return 0;
}
