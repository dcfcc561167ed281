#include "harvest/pipeline.hpp"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>

#include "harvest/bytesio.hpp"
#include "harvest/kernels.hpp"
#include "harvest/langid.hpp"
#include "harvest/manifest.hpp"

namespace fs = std::filesystem;

namespace harvest {
namespace {

// Test-only crash injection: the pipeline dies abruptly (no unwinding, no
// flushes beyond those already issued) after the N-th durable write.
struct AbortHook {
    std::uint64_t limit = 0;
    std::uint64_t count = 0;
    void tick() {
        if (limit != 0 && ++count >= limit) std::_Exit(42);
    }
};

std::string entry_key(const std::string& filename, std::uint64_t offset) {
    return filename + "\x1f" + std::to_string(offset);
}

std::uint64_t joined_text_bytes(const std::vector<std::string>& lines) {
    if (lines.empty()) return 0;
    std::uint64_t total = lines.size() - 1;  // newline joints
    for (const auto& line : lines) total += line.size();
    return total;
}

nlohmann::json counters_to_json(const ProcessCounters& c) {
    return {{"records_processed", c.records_processed},
            {"not_response", c.not_response},
            {"parse_error", c.parse_error},
            {"non_200", c.non_200},
            {"empty_extract", c.empty_extract},
            {"extracted_docs", c.extracted_docs},
            {"extracted_text_bytes", c.extracted_text_bytes},
            {"lang_kept_docs", c.lang_kept_docs},
            {"lang_kept_bytes", c.lang_kept_bytes},
            {"lang_dropped_docs", c.lang_dropped_docs},
            {"lang_dropped_bytes", c.lang_dropped_bytes},
            {"exact_kept_bytes", c.exact_kept_bytes},
            {"exact_dropped_bytes", c.exact_dropped_bytes},
            {"window_kept_bytes", c.window_kept_bytes},
            {"window_dropped_bytes", c.window_dropped_bytes}};
}

nlohmann::json dedup_counters_to_json(const DedupCounters& c) {
    return {{"docs_seen", c.docs_seen},
            {"docs_kept", c.docs_kept},
            {"docs_dropped_exact", c.docs_dropped_exact},
            {"docs_dropped_window", c.docs_dropped_window},
            {"lines_seen", c.lines_seen},
            {"lines_kept", c.lines_kept},
            {"lines_dropped", c.lines_dropped}};
}

// ---------------------------------------------------------------------------
// Checkpoint: the process phase's single self-contained resume point.

constexpr char kCheckpointMagic[4] = {'H', 'C', 'K', 'P'};
constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
    Hash128 config_hash{};
    std::uint64_t done_list_hash = 0;  // guards against a changed input list
    std::uint64_t entries_processed = 0;
    std::uint64_t corpus_bytes = 0;
    ProcessCounters process;
    DedupState dedup;

    std::string serialize() const {
        using bytesio::put_u32;
        using bytesio::put_u64;
        std::string out;
        out.append(kCheckpointMagic, 4);
        put_u32(out, kCheckpointVersion);
        put_u64(out, config_hash.lo);
        put_u64(out, config_hash.hi);
        put_u64(out, done_list_hash);
        put_u64(out, entries_processed);
        put_u64(out, corpus_bytes);
        for (std::uint64_t v :
             {process.records_processed, process.not_response, process.parse_error,
              process.non_200, process.empty_extract, process.extracted_docs,
              process.extracted_text_bytes, process.lang_kept_docs,
              process.lang_kept_bytes, process.lang_dropped_docs,
              process.lang_dropped_bytes, process.exact_kept_bytes,
              process.exact_dropped_bytes, process.window_kept_bytes,
              process.window_dropped_bytes}) {
            put_u64(out, v);
        }
        std::string dedup_bytes = dedup.serialize();
        put_u64(out, dedup_bytes.size());
        out += dedup_bytes;
        put_u64(out, hash128(out.data(), out.size()).lo);
        return out;
    }

    static Checkpoint deserialize(std::string_view bytes) {
        using bytesio::get_u32;
        using bytesio::get_u64;
        auto fail = [](const std::string& why) -> Checkpoint {
            throw StateError("checkpoint corrupt (" + why +
                             "); delete checkpoint.bin and corpus.jsonl to reprocess "
                             "from the spool");
        };
        constexpr std::size_t fixed = 4 + 4 + 16 + 8 + 8 + 8 + 15 * 8 + 8 + 8;
        if (bytes.size() < fixed) return fail("file too short");
        if (std::memcmp(bytes.data(), kCheckpointMagic, 4) != 0) return fail("bad magic");
        if (get_u32(bytes, 4) != kCheckpointVersion) return fail("unsupported version");
        if (hash128(bytes.data(), bytes.size() - 8).lo != get_u64(bytes, bytes.size() - 8)) {
            return fail("checksum mismatch");
        }
        Checkpoint cp;
        std::size_t pos = 8;
        cp.config_hash.lo = get_u64(bytes, pos);
        cp.config_hash.hi = get_u64(bytes, pos + 8);
        cp.done_list_hash = get_u64(bytes, pos + 16);
        cp.entries_processed = get_u64(bytes, pos + 24);
        cp.corpus_bytes = get_u64(bytes, pos + 32);
        pos += 40;
        std::uint64_t* fields[] = {
            &cp.process.records_processed, &cp.process.not_response,
            &cp.process.parse_error,       &cp.process.non_200,
            &cp.process.empty_extract,     &cp.process.extracted_docs,
            &cp.process.extracted_text_bytes, &cp.process.lang_kept_docs,
            &cp.process.lang_kept_bytes,   &cp.process.lang_dropped_docs,
            &cp.process.lang_dropped_bytes, &cp.process.exact_kept_bytes,
            &cp.process.exact_dropped_bytes, &cp.process.window_kept_bytes,
            &cp.process.window_dropped_bytes};
        for (auto* field : fields) {
            *field = get_u64(bytes, pos);
            pos += 8;
        }
        std::uint64_t dedup_len = get_u64(bytes, pos);
        pos += 8;
        if (dedup_len != bytes.size() - pos - 8) return fail("embedded state length");
        try {
            cp.dedup = DedupState::deserialize(bytes.substr(pos, dedup_len));
        } catch (const std::runtime_error& err) {
            return fail(err.what());
        }
        return cp;
    }

    void save(const std::string& path) const {
        std::string bytes = serialize();
        std::string tmp = path + ".tmp";
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out) throw StateError("cannot write checkpoint: " + tmp);
            out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
            if (!out) throw StateError("short write to checkpoint: " + tmp);
        }
        fs::rename(tmp, path);
    }

    static std::optional<Checkpoint> load_if_exists(const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) return std::nullopt;
        std::string bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
        return deserialize(bytes);
    }
};

// ---------------------------------------------------------------------------
// Manifest replay.

struct ManifestState {
    bool has_run_start = false;
    nlohmann::json config_snapshot;
    std::string config_hash;
    std::vector<IndexEntry> entries;
    bool enumerate_complete = false;
    bool saw_entry_events = false;
    std::map<std::string, nlohmann::json> last_fetch;  // entry key → event
    bool run_complete = false;
    nlohmann::json enumerate_info;  // last enumerate_done payload
};

ManifestState scan_manifest(const std::vector<nlohmann::json>& events) {
    ManifestState ms;
    for (const auto& event : events) {
        const std::string type = event.value("event", "");
        if (type == "run_start" && !ms.has_run_start) {
            ms.has_run_start = true;
            ms.config_snapshot = event.value("config", nlohmann::json::object());
            ms.config_hash = event.value("config_hash", "");
        } else if (type == "enumerate_restart") {
            ms.entries.clear();
            ms.enumerate_complete = false;
        } else if (type == "entry") {
            ms.saw_entry_events = true;
            try {
                ms.entries.push_back(entry_from_json(event));
            } catch (const nlohmann::json::exception&) {
                // tampered line: count mismatch below forces re-enumeration
            }
        } else if (type == "enumerate_done") {
            ms.enumerate_complete =
                event.value("count", std::uint64_t{0}) == ms.entries.size();
            ms.enumerate_info = event;
        } else if (type == "fetch") {
            std::string key = entry_key(event.value("filename", ""),
                                        event.value("offset", std::uint64_t{0}));
            ms.last_fetch[key] = event;
        } else if (type == "run_complete") {
            ms.run_complete = true;
        }
    }
    return ms;
}

// ---------------------------------------------------------------------------
// Config plumbing.

Hash128 config_identity_raw(const PipelineConfig& config);

std::string digest_hex_of_dir(const std::string& dir) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file()) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    std::string acc;
    for (const auto& file : files) {
        acc += file.filename().string();
        acc.push_back('\0');
        acc += hash_hex(file_digest(file.string()));
        acc.push_back('\0');
    }
    return hash_hex(hash128(acc));
}

std::vector<CrawlId> resolve_crawls(const PipelineConfig& config,
                                    const RetryPolicy& retry) {
    std::vector<CrawlId> crawls;
    if (!config.crawls.empty()) {
        for (const auto& label : config.crawls) crawls.push_back({label});
        return crawls;
    }
    if (config.crawl_from.empty() && config.crawl_to.empty()) return crawls;

    HttpClient client(config.index_base_url);
    auto response = client.get_with_retry("/collinfo.json", {}, retry);
    if (!response.ok()) {
        throw ConfigError("cannot list crawl collections from " + config.index_base_url +
                          " (HTTP " + std::to_string(response.status) + " " +
                          response.error + ")");
    }
    nlohmann::json list = nlohmann::json::parse(response.body, nullptr, false);
    if (list.is_discarded() || !list.is_array()) {
        throw ConfigError("collection list from " + config.index_base_url +
                          " is not a JSON array");
    }
    std::vector<std::string> labels;
    for (const auto& item : list) {
        std::string id = item.value("id", "");
        if (!CrawlId::valid(id)) continue;
        if (!config.crawl_from.empty() && id < config.crawl_from) continue;
        if (!config.crawl_to.empty() && id > config.crawl_to) continue;
        labels.push_back(id);
    }
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    for (auto& label : labels) crawls.push_back({std::move(label)});
    return crawls;
}

RetryPolicy retry_from_config(const PipelineConfig& config) {
    RetryPolicy policy;
    policy.max_attempts = config.retry_max_attempts;
    policy.initial_delay = std::chrono::milliseconds(config.retry_initial_delay_ms);
    return policy;
}

// The machinery shared by run and resume. Expects a validated config whose
// identity hash has already been checked against any existing manifest.
RunOutcome run_common(const PipelineConfig& config);

}  // namespace

void PipelineConfig::apply_env_overrides() {
    if (const char* v = std::getenv("HARVEST_INDEX_URL"); v && *v) index_base_url = v;
    if (const char* v = std::getenv("HARVEST_DATA_URL"); v && *v) data_base_url = v;
}

void PipelineConfig::validate() const {
    auto fail = [](const std::string& why) { throw ConfigError(why); };
    if (url_pattern.empty()) fail("url_pattern is required");
    for (const auto& label : crawls) {
        if (!CrawlId::valid(label)) fail("invalid crawl label: " + label);
    }
    if (!crawl_from.empty() && !CrawlId::valid(crawl_from)) {
        fail("invalid crawl_from label: " + crawl_from);
    }
    if (!crawl_to.empty() && !CrawlId::valid(crawl_to)) {
        fail("invalid crawl_to label: " + crawl_to);
    }
    if (index_base_url.empty() || data_base_url.empty()) {
        fail("index and data base URLs are required");
    }
    if (language.empty()) fail("language label is required");
    if (lang_threshold < 0.0 || lang_threshold > 1.0) {
        fail("lang_threshold must be within [0, 1]");
    }
    if (!boilerplate.valid()) {
        fail("boilerplate params violate stopwords_low <= stopwords_high or "
             "length_low <= length_high");
    }
    if (stopwords_path.empty()) fail("stopwords_path is required");
    if (!fs::exists(stopwords_path)) fail("stopword list not found: " + stopwords_path);
    if (lang_model_path.empty() && seed_dir.empty()) {
        fail("either lang_model_path or seed_dir is required");
    }
    if (!lang_model_path.empty() && !fs::exists(lang_model_path)) {
        fail("language model not found: " + lang_model_path);
    }
    if (lang_model_path.empty() && !fs::is_directory(seed_dir)) {
        fail("seed_dir is not a directory: " + seed_dir);
    }
    if (output_dir.empty()) fail("output_dir is required");
    if (parallelism < 1) fail("parallelism must be >= 1");
    if (checkpoint_interval < 1) fail("checkpoint_interval must be >= 1");
    if (chunk_size < 1) fail("chunk_size must be >= 1");
    if (fail_threshold <= 0.0 || fail_threshold > 1.0) {
        fail("fail_threshold must be in (0, 1]");
    }
    if (retry_max_attempts < 1) fail("retry_max_attempts must be >= 1");
    if (retry_initial_delay_ms < 0) fail("retry_initial_delay_ms must be >= 0");
}

nlohmann::json config_to_json(const PipelineConfig& c) {
    return {{"url_pattern", c.url_pattern},
            {"crawls", c.crawls},
            {"crawl_from", c.crawl_from},
            {"crawl_to", c.crawl_to},
            {"index_base_url", c.index_base_url},
            {"data_base_url", c.data_base_url},
            {"language", c.language},
            {"lang_threshold", c.lang_threshold},
            {"lang_model_path", c.lang_model_path},
            {"seed_dir", c.seed_dir},
            {"stopwords_path", c.stopwords_path},
            {"boilerplate",
             {{"max_link_density", c.boilerplate.max_link_density},
              {"length_low", c.boilerplate.length_low},
              {"length_high", c.boilerplate.length_high},
              {"stopwords_low", c.boilerplate.stopwords_low},
              {"stopwords_high", c.boilerplate.stopwords_high},
              {"max_heading_distance", c.boilerplate.max_heading_distance}}},
            {"filters", c.filters},
            {"output_dir", c.output_dir},
            {"state_path", c.state_path},
            {"parallelism", c.parallelism},
            {"checkpoint_interval", c.checkpoint_interval},
            {"chunk_size", c.chunk_size},
            {"fail_threshold", c.fail_threshold},
            {"retry_max_attempts", c.retry_max_attempts},
            {"retry_initial_delay_ms", c.retry_initial_delay_ms},
            {"abort_after_events", c.abort_after_events}};
}

PipelineConfig config_from_json(const nlohmann::json& j) {
    PipelineConfig c;
    c.url_pattern = j.value("url_pattern", "");
    c.crawls = j.value("crawls", std::vector<std::string>{});
    c.crawl_from = j.value("crawl_from", "");
    c.crawl_to = j.value("crawl_to", "");
    c.index_base_url = j.value("index_base_url", c.index_base_url);
    c.data_base_url = j.value("data_base_url", c.data_base_url);
    c.language = j.value("language", c.language);
    c.lang_threshold = j.value("lang_threshold", c.lang_threshold);
    c.lang_model_path = j.value("lang_model_path", "");
    c.seed_dir = j.value("seed_dir", "");
    c.stopwords_path = j.value("stopwords_path", "");
    if (j.contains("boilerplate")) {
        const auto& b = j["boilerplate"];
        c.boilerplate.max_link_density =
            b.value("max_link_density", c.boilerplate.max_link_density);
        c.boilerplate.length_low = b.value("length_low", c.boilerplate.length_low);
        c.boilerplate.length_high = b.value("length_high", c.boilerplate.length_high);
        c.boilerplate.stopwords_low =
            b.value("stopwords_low", c.boilerplate.stopwords_low);
        c.boilerplate.stopwords_high =
            b.value("stopwords_high", c.boilerplate.stopwords_high);
        c.boilerplate.max_heading_distance =
            b.value("max_heading_distance", c.boilerplate.max_heading_distance);
    }
    if (j.contains("filters")) {
        c.filters.clear();
        for (const auto& f : j["filters"]) {
            c.filters.emplace_back(f.at(0).get<std::string>(), f.at(1).get<std::string>());
        }
    }
    c.output_dir = j.value("output_dir", "");
    c.state_path = j.value("state_path", "");
    c.parallelism = j.value("parallelism", 1);
    c.checkpoint_interval = j.value("checkpoint_interval", 1);
    c.chunk_size = j.value("chunk_size", std::size_t{64});
    c.fail_threshold = j.value("fail_threshold", 1.0);
    c.retry_max_attempts = j.value("retry_max_attempts", 5);
    c.retry_initial_delay_ms = j.value("retry_initial_delay_ms", 1000);
    c.abort_after_events = j.value("abort_after_events", std::uint64_t{0});
    return c;
}

nlohmann::json document_to_json(const Document& doc) {
    std::string text;
    for (const auto& line : doc.lines) {
        if (!text.empty()) text.push_back('\n');
        text += line;
    }
    return {{"id", doc.id},
            {"url", doc.url},
            {"timestamp", doc.timestamp},
            {"lang_score", doc.lang_score},
            {"text", text}};
}

std::string corpus_line(const Document& doc) { return document_to_json(doc).dump() + "\n"; }

Document document_from_json(const nlohmann::json& j) {
    Document doc;
    doc.id = j.value("id", "");
    doc.url = j.value("url", "");
    doc.timestamp = j.value("timestamp", "");
    doc.lang_score = j.value("lang_score", 0.0);
    const std::string text = j.value("text", "");
    if (!text.empty()) {
        std::size_t start = 0;
        while (true) {
            std::size_t nl = text.find('\n', start);
            if (nl == std::string::npos) {
                doc.lines.push_back(text.substr(start));
                break;
            }
            doc.lines.push_back(text.substr(start, nl - start));
            start = nl + 1;
        }
    }
    return doc;
}

namespace {

Hash128 config_identity_raw(const PipelineConfig& c) {
    nlohmann::json identity{
        {"url_pattern", c.url_pattern},
        {"crawls", c.crawls},
        {"crawl_from", c.crawl_from},
        {"crawl_to", c.crawl_to},
        {"index_base_url", c.index_base_url},
        {"data_base_url", c.data_base_url},
        {"language", c.language},
        {"lang_threshold", c.lang_threshold},
        {"lang_model_path", c.lang_model_path},
        {"seed_dir", c.seed_dir},
        {"stopwords_path", c.stopwords_path},
        {"boilerplate",
         {{"max_link_density", c.boilerplate.max_link_density},
          {"length_low", c.boilerplate.length_low},
          {"length_high", c.boilerplate.length_high},
          {"stopwords_low", c.boilerplate.stopwords_low},
          {"stopwords_high", c.boilerplate.stopwords_high},
          {"max_heading_distance", c.boilerplate.max_heading_distance}}},
        {"filters", c.filters},
    };
    try {
        identity["stopwords_digest"] = hash_hex(file_digest(c.stopwords_path));
        if (!c.lang_model_path.empty()) {
            identity["model_digest"] = hash_hex(file_digest(c.lang_model_path));
        } else {
            identity["seed_digest"] = digest_hex_of_dir(c.seed_dir);
        }
    } catch (const std::runtime_error& err) {
        throw ConfigError(err.what());
    }
    return hash128(identity.dump());
}

RunOutcome run_common(const PipelineConfig& config) {
    AbortHook hook{config.abort_after_events};
    const std::string state_path =
        config.state_path.empty() ? config.output_dir + "/dedup.state" : config.state_path;
    const std::string spool_dir = config.output_dir + "/spool";
    const std::string manifest_path = config.output_dir + "/manifest.jsonl";
    const std::string corpus_path = config.output_dir + "/corpus.jsonl";
    const std::string checkpoint_path = config.output_dir + "/checkpoint.bin";
    fs::create_directories(spool_dir);

    const Hash128 identity_raw = config_identity_raw(config);
    const std::string identity = hash_hex(identity_raw);

    ManifestState ms = scan_manifest(read_manifest(manifest_path).events);
    ManifestWriter writer(manifest_path);
    if (ms.has_run_start) {
        if (ms.config_hash != identity) {
            throw ConfigError(
                "output directory holds a run with a different configuration (hash " +
                ms.config_hash + ", this config hashes to " + identity +
                "); use a fresh output directory or the original inputs");
        }
    } else {
        writer.append("run_start",
                      {{"config", config_to_json(config)}, {"config_hash", identity}});
        hook.tick();
    }

    RunOutcome outcome;
    if (ms.run_complete) {
        outcome.completed = true;
        outcome.already_complete = true;
        outcome.entries_total = ms.entries.size();
        for (const auto& e : ms.entries) outcome.stage0_bytes += e.length;
        return outcome;
    }

    StopwordList stopwords = StopwordList::load(config.stopwords_path, config.language);
    LangModel model = config.lang_model_path.empty()
                          ? LangModel::train(load_seed_dir(config.seed_dir))
                          : LangModel::load(config.lang_model_path);
    const RetryPolicy retry = retry_from_config(config);

    // --- Enumeration (index API) ---------------------------------------
    if (!ms.enumerate_complete) {
        if (ms.saw_entry_events) {
            writer.append("enumerate_restart");
            hook.tick();
        }
        std::vector<CrawlId> crawls = resolve_crawls(config, retry);
        EnumerateResult result;
        if (!crawls.empty()) {
            CdxClient cdx(HttpClient(config.index_base_url), retry);
            result = cdx.enumerate_tld(config.url_pattern, crawls, config.filters);
        }
        for (const auto& entry : result.entries) {
            writer.append("entry", entry_to_json(entry));
            hook.tick();
        }
        std::uint64_t stage0 = 0;
        for (const auto& entry : result.entries) stage0 += entry.length;
        nlohmann::json failed = nlohmann::json::array();
        for (const auto& page : result.failed_pages) {
            failed.push_back(
                {{"crawl", page.crawl.label}, {"page", page.page}, {"reason", page.reason}});
        }
        ms.enumerate_info = {{"count", result.entries.size()},
                             {"stage0_bytes", stage0},
                             {"pages_fetched", result.stats.pages_fetched},
                             {"pages_failed", result.stats.pages_failed},
                             {"lines_parsed", result.stats.lines_parsed},
                             {"lines_skipped", result.stats.lines_skipped},
                             {"duplicates_dropped", result.stats.duplicates_dropped},
                             {"failed_pages", failed}};
        writer.append("enumerate_done", ms.enumerate_info);
        hook.tick();
        ms.entries = std::move(result.entries);
        ms.enumerate_complete = true;
    }
    outcome.entries_total = ms.entries.size();
    for (const auto& e : ms.entries) outcome.stage0_bytes += e.length;

    // --- Fetch phase (ranged requests into the spool) -------------------
    std::vector<IndexEntry> pending;
    for (const auto& entry : ms.entries) {
        auto it = ms.last_fetch.find(entry_key(entry.filename, entry.offset));
        if (it == ms.last_fetch.end()) {
            pending.push_back(entry);
        } else if (it->second.value("outcome", "") == "done" &&
                   !fs::exists(spool_dir + "/" + it->second.value("spool", ""))) {
            pending.push_back(entry);  // spool vanished: retrieve again
        }
    }
    if (!pending.empty()) {
        HttpClient data_client(config.data_base_url);
        fetch_all(data_client, retry, pending, config.parallelism,
                  [&](FetchResult&& result) {
                      nlohmann::json event{{"filename", result.source.filename},
                                           {"offset", result.source.offset},
                                           {"outcome", std::string(to_string(result.outcome))},
                                           {"compressed", result.compressed_length},
                                           {"decompressed", result.bytes.size()}};
                      if (result.outcome == FetchOutcome::done) {
                          std::string name = spool_filename(result.source.filename,
                                                            result.source.offset);
                          std::string tmp = spool_dir + "/" + name + ".tmp";
                          {
                              std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
                              out.write(result.bytes.data(),
                                        static_cast<std::streamsize>(result.bytes.size()));
                              if (!out) throw StateError("cannot write spool file: " + tmp);
                          }
                          fs::rename(tmp, spool_dir + "/" + name);
                          event["spool"] = name;
                      } else {
                          event["error"] = result.error;
                      }
                      ms.last_fetch[entry_key(result.source.filename,
                                              result.source.offset)] = event;
                      writer.append("fetch", event);
                      hook.tick();
                  },
                  config.chunk_size);
        writer.append("fetch_done");
        hook.tick();
    }

    for (const auto& entry : ms.entries) {
        auto it = ms.last_fetch.find(entry_key(entry.filename, entry.offset));
        if (it == ms.last_fetch.end()) continue;
        const auto& event = it->second;
        ++outcome.fetch.attempted;
        outcome.fetch.compressed_bytes += event.value("compressed", std::uint64_t{0});
        const std::string fetch_outcome = event.value("outcome", "");
        if (fetch_outcome == "done") {
            ++outcome.fetch.done;
            outcome.fetch.decompressed_bytes += event.value("decompressed", std::uint64_t{0});
        } else if (fetch_outcome == "corrupt") {
            ++outcome.fetch.corrupt;
        } else {
            ++outcome.fetch.failed;
        }
    }

    // --- Process phase (deterministic, local) ---------------------------
    std::vector<IndexEntry> done_entries;
    std::vector<std::string> spool_paths;
    std::string done_keys;
    for (const auto& entry : ms.entries) {
        auto it = ms.last_fetch.find(entry_key(entry.filename, entry.offset));
        if (it == ms.last_fetch.end() || it->second.value("outcome", "") != "done") continue;
        done_entries.push_back(entry);
        spool_paths.push_back(spool_dir + "/" + it->second.value("spool", ""));
        done_keys += entry_key(entry.filename, entry.offset);
        done_keys.push_back('\n');
    }
    const std::uint64_t done_list_hash = hash128(done_keys).lo;

    Checkpoint cp;
    if (auto loaded = Checkpoint::load_if_exists(checkpoint_path)) {
        cp = std::move(*loaded);
        if (cp.config_hash != identity_raw) {
            throw StateError(
                "checkpoint belongs to a different configuration; delete "
                "checkpoint.bin and corpus.jsonl to reprocess from the spool");
        }
        if (cp.done_list_hash != done_list_hash) {
            throw StateError(
                "fetched entry set changed since the checkpoint was written; delete "
                "checkpoint.bin and corpus.jsonl to reprocess from the spool");
        }
        if (cp.entries_processed > done_entries.size()) {
            throw StateError(
                "checkpoint is ahead of the fetched entry list; delete checkpoint.bin "
                "and corpus.jsonl to reprocess from the spool");
        }
    } else {
        cp.config_hash = identity_raw;
        cp.done_list_hash = done_list_hash;
    }

    if (fs::exists(corpus_path)) {
        std::uint64_t size = fs::file_size(corpus_path);
        if (size < cp.corpus_bytes) {
            throw StateError(
                "corpus.jsonl is shorter than the checkpoint records; delete "
                "checkpoint.bin and corpus.jsonl to reprocess from the spool");
        }
        if (size > cp.corpus_bytes) fs::resize_file(corpus_path, cp.corpus_bytes);
    } else {
        if (cp.corpus_bytes != 0) {
            throw StateError(
                "corpus.jsonl is missing but the checkpoint says it had bytes; delete "
                "checkpoint.bin to reprocess from the spool");
        }
        std::ofstream(corpus_path, std::ios::binary | std::ios::trunc);
    }

    ExtractContext ctx;
    ctx.model = &model;
    ctx.target_label = config.language;
    ctx.lang_threshold = config.lang_threshold;
    ctx.params = config.boilerplate;
    ctx.stopwords = &stopwords;

    std::ofstream corpus(corpus_path, std::ios::binary | std::ios::app);
    if (!corpus) throw StateError("cannot open corpus for append: " + corpus_path);

    for (std::size_t base = cp.entries_processed; base < done_entries.size();
         base += config.chunk_size) {
        std::size_t count = std::min(config.chunk_size, done_entries.size() - base);
        std::vector<std::string> bytes(count);
        std::vector<IndexEntry> chunk(done_entries.begin() + static_cast<std::ptrdiff_t>(base),
                                      done_entries.begin() +
                                          static_cast<std::ptrdiff_t>(base + count));
        for (std::size_t i = 0; i < count; ++i) {
            std::ifstream in(spool_paths[base + i], std::ios::binary);
            if (!in) {
                throw StateError("spool file missing: " + spool_paths[base + i] +
                                 "; delete the matching fetch record or the manifest");
            }
            bytes[i].assign((std::istreambuf_iterator<char>(in)),
                            std::istreambuf_iterator<char>());
        }
        std::vector<ExtractOutcome> outcomes =
            process_records_parallel(bytes, chunk, ctx, config.parallelism);

        for (auto& record : outcomes) {
            auto& pc = cp.process;
            switch (record.fate) {
                case RecordFate::not_response: ++pc.not_response; break;
                case RecordFate::parse_error: ++pc.parse_error; break;
                case RecordFate::non_200: ++pc.non_200; break;
                case RecordFate::empty_extract: ++pc.empty_extract; break;
                case RecordFate::lang_dropped:
                    ++pc.extracted_docs;
                    pc.extracted_text_bytes += record.text_bytes;
                    ++pc.lang_dropped_docs;
                    pc.lang_dropped_bytes += record.text_bytes;
                    break;
                case RecordFate::document: {
                    ++pc.extracted_docs;
                    pc.extracted_text_bytes += record.text_bytes;
                    ++pc.lang_kept_docs;
                    pc.lang_kept_bytes += record.text_bytes;
                    if (!dedup_document_exact(record.doc, cp.dedup)) {
                        pc.exact_dropped_bytes += record.text_bytes;
                        break;
                    }
                    pc.exact_kept_bytes += record.text_bytes;
                    auto survived = dedup_windows(std::move(record.doc), cp.dedup);
                    if (!survived) {
                        pc.window_dropped_bytes += record.text_bytes;
                        break;
                    }
                    std::uint64_t post = joined_text_bytes(survived->lines);
                    pc.window_kept_bytes += post;
                    pc.window_dropped_bytes += record.text_bytes - post;
                    std::string line = corpus_line(*survived);
                    corpus.write(line.data(), static_cast<std::streamsize>(line.size()));
                    corpus.flush();
                    if (!corpus) throw StateError("short write to corpus: " + corpus_path);
                    cp.corpus_bytes += line.size();
                    hook.tick();
                    break;
                }
            }
            ++cp.process.records_processed;
            ++cp.entries_processed;
            if (cp.entries_processed % static_cast<std::uint64_t>(
                                            config.checkpoint_interval) == 0) {
                cp.save(checkpoint_path);
                hook.tick();
            }
        }
    }
    cp.save(checkpoint_path);
    hook.tick();

    // --- Completion ------------------------------------------------------
    cp.dedup.save(state_path);

    std::vector<std::pair<std::string, std::uint64_t>> stage_bytes{
        {"raw tld content", outcome.stage0_bytes},
        {"language filtered", cp.process.lang_kept_bytes},
        {"document dedup", cp.process.exact_kept_bytes},
        {"window dedup", cp.process.window_kept_bytes}};
    try {
        outcome.funnel = funnel(stage_bytes);
    } catch (const std::invalid_argument& err) {
        outcome.funnel_error = err.what();
    }

    outcome.process = cp.process;
    outcome.dedup = cp.dedup.counters;
    outcome.completed = true;

    const std::vector<std::string> caveats{
        "language threshold " + std::to_string(config.lang_threshold).substr(0, 4) +
            " and document-level filtering granularity are pipeline defaults, not "
            "sourced values",
        "boilerplate parameters and the stopword list are configurable; bundled "
        "defaults may differ from any original corpus run",
        "token counts use the bundled tokenizer rule; figures from other tokenizers "
        "are not comparable"};

    nlohmann::json report{{"config_hash", identity},
                          {"entries", outcome.entries_total},
                          {"stage0_bytes", outcome.stage0_bytes},
                          {"enumerate", ms.enumerate_info},
                          {"fetch",
                           {{"attempted", outcome.fetch.attempted},
                            {"done", outcome.fetch.done},
                            {"failed", outcome.fetch.failed},
                            {"corrupt", outcome.fetch.corrupt},
                            {"compressed_bytes", outcome.fetch.compressed_bytes},
                            {"decompressed_bytes", outcome.fetch.decompressed_bytes}}},
                          {"process", counters_to_json(cp.process)},
                          {"dedup", dedup_counters_to_json(cp.dedup.counters)},
                          {"caveats", caveats}};
    if (outcome.funnel_error.empty()) {
        report["funnel"] = nlohmann::json::parse(outcome.funnel.to_json());
    } else {
        report["funnel_error"] = outcome.funnel_error;
    }
    {
        std::ofstream out(config.output_dir + "/report.json",
                          std::ios::binary | std::ios::trunc);
        out << report.dump(2) << "\n";
    }
    {
        std::ofstream out(config.output_dir + "/report.txt",
                          std::ios::binary | std::ios::trunc);
        if (outcome.funnel_error.empty()) {
            out << outcome.funnel.to_text();
        } else {
            out << "funnel unavailable: " << outcome.funnel_error << "\n";
        }
        out << "entries " << outcome.entries_total << ", fetched " << outcome.fetch.done
            << ", failed " << outcome.fetch.failed << ", corrupt " << outcome.fetch.corrupt
            << "\n";
        out << "documents kept " << cp.dedup.counters.docs_kept << " of "
            << cp.dedup.counters.docs_seen << " (exact dropped "
            << cp.dedup.counters.docs_dropped_exact << ", window dropped "
            << cp.dedup.counters.docs_dropped_window << ")\n";
        for (const auto& caveat : caveats) out << "note: " << caveat << "\n";
    }

    writer.append("process_done",
                  {{"process", counters_to_json(cp.process)},
                   {"dedup", dedup_counters_to_json(cp.dedup.counters)},
                   {"corpus_bytes", cp.corpus_bytes}});
    hook.tick();

    std::uint64_t failures = outcome.fetch.failed + outcome.fetch.corrupt;
    if (!outcome.funnel_error.empty()) {
        outcome.exit_code = 1;
    } else if (failures > 0 && outcome.fetch.attempted > 0 &&
               static_cast<double>(failures) >=
                   config.fail_threshold * static_cast<double>(outcome.fetch.attempted)) {
        outcome.exit_code = 3;
        writer.append("run_complete");
        hook.tick();
    } else {
        writer.append("run_complete");
        hook.tick();
    }
    return outcome;
}

}  // namespace

std::string config_identity_hash(const PipelineConfig& config) {
    return hash_hex(config_identity_raw(config));
}

RunOutcome run_pipeline(const PipelineConfig& config) {
    PipelineConfig effective = config;
    if (effective.state_path.empty() && !effective.output_dir.empty()) {
        effective.state_path = effective.output_dir + "/dedup.state";
    }
    effective.validate();
    return run_common(effective);
}

RunOutcome resume_pipeline(const std::string& manifest_path, const ResumeOptions& options) {
    auto read = read_manifest(manifest_path);
    if (read.events.empty()) {
        throw StateError("manifest missing or empty: " + manifest_path);
    }
    ManifestState ms = scan_manifest(read.events);
    if (!ms.has_run_start || ms.config_snapshot.empty()) {
        throw StateError("manifest has no run_start snapshot: " + manifest_path);
    }
    PipelineConfig config = config_from_json(ms.config_snapshot);

    // The manifest's directory wins so a moved output tree still resumes.
    std::string new_output = fs::path(manifest_path).parent_path().string();
    if (new_output.empty()) new_output = ".";
    if (!config.state_path.empty() && !config.output_dir.empty() &&
        config.state_path.rfind(config.output_dir + "/", 0) == 0) {
        config.state_path =
            new_output + config.state_path.substr(config.output_dir.size());
    }
    config.output_dir = new_output;
    config.apply_env_overrides();
    config.abort_after_events = options.abort_after_events;
    if (config.state_path.empty()) config.state_path = config.output_dir + "/dedup.state";

    config.validate();
    const std::string identity = config_identity_hash(config);
    if (identity != ms.config_hash) {
        throw ConfigError(
            "manifest snapshot no longer matches its inputs (hash " + ms.config_hash +
            " vs " + identity +
            "); the config, stopword list, or model changed since the run started");
    }
    return run_common(config);
}

}  // namespace harvest
