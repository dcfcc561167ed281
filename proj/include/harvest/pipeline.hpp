#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "harvest/boilerplate.hpp"
#include "harvest/cdx.hpp"
#include "harvest/dedup.hpp"
#include "harvest/fetch.hpp"
#include "harvest/stats.hpp"

namespace harvest {

// Exit code 1: the configuration (or a config/manifest mismatch) is wrong.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Exit code 2: persisted state (checkpoint, corpus, manifest) is corrupt or
// inconsistent; never silently reset.
struct StateError : std::runtime_error {
    explicit StateError(const std::string& what) : std::runtime_error(what) {}
};

struct PipelineConfig {
    // Result-affecting fields: part of the config identity hash.
    std::string url_pattern;
    std::vector<std::string> crawls;  // explicit labels; wins over from/to
    std::string crawl_from;           // label range against the collection list
    std::string crawl_to;
    std::string index_base_url = "https://index.commoncrawl.org";
    std::string data_base_url = "https://data.commoncrawl.org";
    std::string language = "is";
    double lang_threshold = 0.8;
    std::string lang_model_path;  // LIDM file; wins over seed_dir
    std::string seed_dir;         // train deterministically at startup
    std::string stopwords_path;
    BoilerplateParams boilerplate;
    std::vector<IndexFilter> filters = default_index_filters();

    // Execution knobs: never change results, excluded from the identity hash.
    std::string output_dir;
    std::string state_path;  // default <output_dir>/dedup.state
    int parallelism = 1;
    int checkpoint_interval = 1;  // entries between checkpoints
    std::size_t chunk_size = 64;  // kernel batch size
    double fail_threshold = 1.0;  // exit 3 when failed/attempted reaches this
    int retry_max_attempts = 5;
    int retry_initial_delay_ms = 1000;
    std::uint64_t abort_after_events = 0;  // test hook: _Exit(42) after N writes

    // HARVEST_INDEX_URL / HARVEST_DATA_URL replace the base URLs when set.
    void apply_env_overrides();

    // Throws ConfigError; checks patterns, labels, ranges and that the
    // stopword/model inputs resolve.
    void validate() const;
};

nlohmann::json config_to_json(const PipelineConfig& config);
PipelineConfig config_from_json(const nlohmann::json& snapshot);

// Corpus format: one JSON object per line with fields {id, url, timestamp,
// lang_score, text}, text joining the retained lines with "\n". The stage
// subcommands exchange the same shape.
std::string corpus_line(const Document& doc);
nlohmann::json document_to_json(const Document& doc);
Document document_from_json(const nlohmann::json& j);

// Identity = result-affecting fields plus content digests of the stopword
// list and the model file (or seed directory), so resuming after an input
// file changed is refused rather than silently mixed.
std::string config_identity_hash(const PipelineConfig& config);

struct ProcessCounters {
    std::uint64_t records_processed = 0;
    std::uint64_t not_response = 0;
    std::uint64_t parse_error = 0;
    std::uint64_t non_200 = 0;
    std::uint64_t empty_extract = 0;
    std::uint64_t extracted_docs = 0;
    std::uint64_t extracted_text_bytes = 0;
    std::uint64_t lang_kept_docs = 0;
    std::uint64_t lang_kept_bytes = 0;
    std::uint64_t lang_dropped_docs = 0;
    std::uint64_t lang_dropped_bytes = 0;
    std::uint64_t exact_kept_bytes = 0;
    std::uint64_t exact_dropped_bytes = 0;
    std::uint64_t window_kept_bytes = 0;
    std::uint64_t window_dropped_bytes = 0;

    bool operator==(const ProcessCounters&) const = default;
};

struct RunOutcome {
    int exit_code = 0;
    bool completed = false;       // run_complete reached (now or earlier)
    bool already_complete = false;  // this invocation was a no-op
    FunnelReport funnel;
    std::string funnel_error;     // set when the funnel could not be built
    std::uint64_t stage0_bytes = 0;
    std::uint64_t entries_total = 0;
    FetchTotals fetch;            // derived from manifest events (resume-safe)
    ProcessCounters process;
    DedupCounters dedup;
};

// Output directory layout: manifest.jsonl, spool/, corpus.jsonl,
// checkpoint.bin, dedup.state (unless state_path overrides), report.json,
// report.txt.
RunOutcome run_pipeline(const PipelineConfig& config);

struct ResumeOptions {
    std::uint64_t abort_after_events = 0;  // test hook for chained crashes
};

// Continues from the manifest's own config snapshot. The manifest's parent
// directory is taken as the output directory so moved runs still resume.
RunOutcome resume_pipeline(const std::string& manifest_path, const ResumeOptions& options = {});

}  // namespace harvest
