#include "harvest/cdx.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

#include "json.hpp"

namespace harvest {
namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    return std::all_of(s.begin(), s.end(),
                       [](unsigned char c) { return std::isdigit(c) != 0; });
}

bool valid_timestamp(std::string_view ts) {
    if (ts.size() != 14 || !all_digits(ts)) return false;
    auto field = [&](std::size_t pos, std::size_t len) {
        int v = 0;
        std::from_chars(ts.data() + pos, ts.data() + pos + len, v);
        return v;
    };
    int month = field(4, 2), day = field(6, 2);
    int hour = field(8, 2), minute = field(10, 2), second = field(12, 2);
    return month >= 1 && month <= 12 && day >= 1 && day <= 31 && hour < 24 &&
           minute < 60 && second < 61;
}

// Offset/length arrive as JSON strings from the live API but fixtures may
// use numbers; accept both.
bool read_u64(const nlohmann::json& value, std::uint64_t& out) {
    if (value.is_number_unsigned()) {
        out = value.get<std::uint64_t>();
        return true;
    }
    if (value.is_string()) {
        const auto& s = value.get_ref<const std::string&>();
        if (!all_digits(s)) return false;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
        return ec == std::errc() && ptr == s.data() + s.size();
    }
    return false;
}

std::string get_string(const nlohmann::json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_string()) return {};
    return it->get<std::string>();
}

}  // namespace

bool CrawlId::valid(std::string_view label) {
    // CC-MAIN-<4 digits>-<2 digits>
    constexpr std::string_view prefix = "CC-MAIN-";
    if (label.size() != prefix.size() + 7) return false;
    if (label.substr(0, prefix.size()) != prefix) return false;
    std::string_view rest = label.substr(prefix.size());
    return all_digits(rest.substr(0, 4)) && rest[4] == '-' && all_digits(rest.substr(5, 2));
}

std::vector<IndexFilter> default_index_filters() {
    return {{"status", "200"}, {"~mime", ".*html.*"}};
}

std::string url_encode_component(std::string_view raw) {
    static constexpr char hex[] = "0123456789ABCDEF";
    std::string out;
    out.reserve(raw.size());
    for (unsigned char c : raw) {
        bool safe = std::isalnum(c) || c == '-' || c == '.' || c == '_' || c == '~' ||
                    c == '*';
        if (safe) {
            out.push_back(static_cast<char>(c));
        } else {
            out.push_back('%');
            out.push_back(hex[c >> 4]);
            out.push_back(hex[c & 0xF]);
        }
    }
    return out;
}

std::string build_index_path(const IndexQuery& query, bool show_num_pages) {
    std::string path = "/" + query.crawl.label + "-index?url=" +
                       url_encode_component(query.url_pattern) + "&output=json";
    for (const auto& [field, value] : query.filters) {
        path += "&filter=" + url_encode_component(field + ":" + value);
    }
    if (show_num_pages) {
        path += "&showNumPages=true";
    } else {
        path += "&page=" + std::to_string(query.page);
    }
    return path;
}

std::optional<IndexEntry> parse_index_line(std::string_view line) {
    nlohmann::json obj = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (obj.is_discarded() || !obj.is_object()) return std::nullopt;

    IndexEntry entry;
    entry.urlkey = get_string(obj, "urlkey");
    entry.timestamp = get_string(obj, "timestamp");
    entry.url = get_string(obj, "url");
    entry.mime = get_string(obj, "mime");
    entry.digest = get_string(obj, "digest");
    entry.filename = get_string(obj, "filename");

    auto status_it = obj.find("status");
    if (status_it != obj.end()) {
        if (status_it->is_number_unsigned()) {
            entry.status = std::to_string(status_it->get<std::uint64_t>());
        } else if (status_it->is_string()) {
            entry.status = status_it->get<std::string>();
        }
        if (entry.status.size() != 3 || !all_digits(entry.status)) return std::nullopt;
    }

    if (entry.url.empty() || entry.filename.empty()) return std::nullopt;
    if (!valid_timestamp(entry.timestamp)) return std::nullopt;

    auto offset_it = obj.find("offset");
    auto length_it = obj.find("length");
    if (offset_it == obj.end() || length_it == obj.end()) return std::nullopt;
    if (!read_u64(*offset_it, entry.offset) || !read_u64(*length_it, entry.length)) {
        return std::nullopt;
    }
    if (entry.length == 0) return std::nullopt;
    if (entry.offset > UINT64_MAX - entry.length) return std::nullopt;
    return entry;
}

IndexPage parse_index_page(std::string_view body) {
    IndexPage page;
    std::size_t pos = 0;
    while (pos < body.size()) {
        std::size_t eol = body.find('\n', pos);
        std::string_view line = body.substr(pos, eol == std::string_view::npos
                                                     ? std::string_view::npos
                                                     : eol - pos);
        pos = eol == std::string_view::npos ? body.size() : eol + 1;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;
        if (auto entry = parse_index_line(line)) {
            page.entries.push_back(std::move(*entry));
        } else {
            ++page.lines_skipped;
        }
    }
    return page;
}

CdxClient::CdxClient(HttpClient client, RetryPolicy retry)
    : client_(std::move(client)), retry_(std::move(retry)) {}

std::uint64_t CdxClient::page_count(const IndexQuery& query) const {
    auto response = client_.get_with_retry(build_index_path(query, true), {}, retry_);
    if (response.status == 0) {
        throw CdxError("page_count: transport failure: " + response.error);
    }
    if (!response.ok()) {
        throw CdxError("page_count: HTTP " + std::to_string(response.status) + " for " +
                       query.crawl.label);
    }
    // The handshake answers a single JSON object, e.g. {"pages": 3, ...}.
    nlohmann::json obj =
        nlohmann::json::parse(response.body, nullptr, /*allow_exceptions=*/false);
    if (obj.is_discarded() || !obj.is_object() || !obj.contains("pages") ||
        !obj["pages"].is_number_unsigned()) {
        throw CdxError("page_count: unparseable handshake body for " + query.crawl.label);
    }
    return obj["pages"].get<std::uint64_t>();
}

IndexPage CdxClient::fetch_index_page(const IndexQuery& query) const {
    auto response = client_.get_with_retry(build_index_path(query, false), {}, retry_);
    if (response.status == 0) {
        throw CdxError("fetch_index_page: transport failure: " + response.error);
    }
    if (!response.ok()) {
        throw CdxError("fetch_index_page: HTTP " + std::to_string(response.status) +
                       " for " + query.crawl.label + " page " + std::to_string(query.page));
    }
    return parse_index_page(response.body);
}

EnumerateResult CdxClient::enumerate_tld(const std::string& pattern,
                                         const std::vector<CrawlId>& crawls,
                                         const std::vector<IndexFilter>& filters) const {
    EnumerateResult result;
    for (const auto& crawl : crawls) {
        IndexQuery query{pattern, crawl, 0, filters};
        std::uint64_t pages = 0;
        try {
            pages = page_count(query);
        } catch (const CdxError& err) {
            result.failed_pages.push_back({crawl, -1, err.what()});
            ++result.stats.pages_failed;
            continue;
        }
        for (std::uint64_t page = 0; page < pages; ++page) {
            query.page = static_cast<int>(page);
            try {
                IndexPage index_page = fetch_index_page(query);
                ++result.stats.pages_fetched;
                result.stats.lines_parsed += index_page.entries.size();
                result.stats.lines_skipped += index_page.lines_skipped;
                for (auto& entry : index_page.entries) {
                    result.entries.push_back(std::move(entry));
                }
            } catch (const CdxError& err) {
                result.failed_pages.push_back({crawl, static_cast<int>(page), err.what()});
                ++result.stats.pages_failed;
            }
        }
    }
    // Canonical order, then (filename, offset)-unique: a record indexed in
    // several crawls is fetched once.
    std::stable_sort(result.entries.begin(), result.entries.end(), entry_key_less);
    auto same_key = [](const IndexEntry& a, const IndexEntry& b) {
        return a.filename == b.filename && a.offset == b.offset;
    };
    auto last = std::unique(result.entries.begin(), result.entries.end(), same_key);
    result.stats.duplicates_dropped =
        static_cast<std::uint64_t>(std::distance(last, result.entries.end()));
    result.entries.erase(last, result.entries.end());
    return result;
}

nlohmann::json entry_to_json(const IndexEntry& e) {
    return {{"urlkey", e.urlkey}, {"timestamp", e.timestamp}, {"url", e.url},
            {"mime", e.mime},     {"status", e.status},       {"digest", e.digest},
            {"filename", e.filename}, {"offset", e.offset},   {"length", e.length}};
}

IndexEntry entry_from_json(const nlohmann::json& j) {
    IndexEntry e;
    e.urlkey = j.value("urlkey", "");
    e.timestamp = j.at("timestamp").get<std::string>();
    e.url = j.at("url").get<std::string>();
    e.mime = j.value("mime", "");
    e.status = j.value("status", "");
    e.digest = j.value("digest", "");
    e.filename = j.at("filename").get<std::string>();
    e.offset = j.at("offset").get<std::uint64_t>();
    e.length = j.at("length").get<std::uint64_t>();
    return e;
}

}  // namespace harvest
