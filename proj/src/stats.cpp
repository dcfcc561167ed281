#include "harvest/stats.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "harvest/unicode.hpp"

namespace harvest {

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    std::size_t i = 0;
    while (i < text.size()) {
        std::size_t start = i;
        char32_t cp = uni::decode(text, i);
        if (uni::is_space(cp)) {
            if (!current.empty()) tokens.push_back(std::move(current)), current.clear();
            continue;
        }
        if (uni::is_word_char(cp)) {
            current.append(text.substr(start, i - start));
            continue;
        }
        if (!current.empty()) tokens.push_back(std::move(current)), current.clear();
        tokens.emplace_back(text.substr(start, i - start));
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

Vocab vocab_from_lines(const std::vector<std::string>& lines, std::uint64_t min_count) {
    if (min_count < 1) throw std::invalid_argument("min_count must be >= 1");
    Vocab v;
    v.min_count = min_count;
    for (const auto& line : lines) {
        for (auto& token : tokenize(line)) ++v.counts[std::move(token)];
    }
    if (min_count > 1) {
        for (auto it = v.counts.begin(); it != v.counts.end();) {
            it = it->second < min_count ? v.counts.erase(it) : std::next(it);
        }
    }
    return v;
}

Vocab vocab(const std::vector<Document>& docs, std::uint64_t min_count) {
    if (min_count < 1) throw std::invalid_argument("min_count must be >= 1");
    Vocab v;
    v.min_count = min_count;
    for (const auto& doc : docs) {
        for (const auto& line : doc.lines) {
            for (auto& token : tokenize(line)) ++v.counts[std::move(token)];
        }
    }
    if (min_count > 1) {
        for (auto it = v.counts.begin(); it != v.counts.end();) {
            it = it->second < min_count ? v.counts.erase(it) : std::next(it);
        }
    }
    return v;
}

VocabReport compare_vocab(const Vocab& a, const Vocab& b) {
    if (a.min_count != b.min_count) {
        throw std::invalid_argument(
            "vocab min_count mismatch: " + std::to_string(a.min_count) + " vs " +
            std::to_string(b.min_count) + "; rebuild with matching thresholds");
    }
    VocabReport report;
    report.min_count = a.min_count;
    report.unique_a = a.counts.size();
    report.unique_b = b.counts.size();
    for (const auto& [token, count] : a.counts) {
        if (b.counts.count(token) > 0) ++report.shared;
    }
    report.only_a = report.unique_a - report.shared;
    report.only_b = report.unique_b - report.shared;
    return report;
}

std::string VocabReport::to_text() const {
    std::ostringstream out;
    out << "vocabulary comparison (min_count " << min_count << ")\n";
    out << "  " << name_a << ": " << unique_a << " unique tokens\n";
    out << "  " << name_b << ": " << unique_b << " unique tokens\n";
    out << "  shared: " << shared << "\n";
    out << "  only in " << name_a << ": " << only_a << "\n";
    out << "  only in " << name_b << ": " << only_b << "\n";
    out << "note: counts use the bundled tokenizer rule; figures from other "
           "tokenizers are not comparable\n";
    return out.str();
}

std::string VocabReport::to_json() const {
    nlohmann::json j{{"min_count", min_count}, {"name_a", name_a}, {"name_b", name_b},
                     {"unique_a", unique_a},   {"unique_b", unique_b},
                     {"shared", shared},       {"only_a", only_a},
                     {"only_b", only_b},
                     {"note",
                      "counts use the bundled tokenizer rule; figures from other "
                      "tokenizers are not comparable"}};
    return j.dump(2);
}

std::string format_percent(std::uint64_t bytes, std::uint64_t base) {
    if (base == 0) throw std::invalid_argument("funnel base is zero");
    if (bytes == base) return "100%";
    double percent = 100.0 * static_cast<double>(bytes) / static_cast<double>(base);
    char buf[64];
    for (int decimals = 0; decimals <= 6; ++decimals) {
        std::snprintf(buf, sizeof(buf), "%.*f", decimals, percent);
        int significant = 0;
        bool leading = true;
        for (const char* p = buf; *p; ++p) {
            if (*p == '.' || *p == '-') continue;
            if (leading && *p == '0') continue;
            leading = false;
            ++significant;
        }
        if (significant >= 2 || decimals == 6) break;
    }
    return std::string(buf) + "%";
}

FunnelReport funnel(const std::vector<std::pair<std::string, std::uint64_t>>& stages) {
    if (stages.empty()) throw std::invalid_argument("funnel needs at least one stage");
    if (stages.front().second == 0) {
        throw std::invalid_argument("funnel stage 0 has zero bytes");
    }
    FunnelReport report;
    std::uint64_t base = stages.front().second;
    std::uint64_t previous = base;
    for (const auto& [name, bytes] : stages) {
        if (bytes > previous) report.non_monotone = true;
        previous = bytes;
        report.stages.push_back({name, bytes, format_percent(bytes, base)});
    }
    return report;
}

std::string FunnelReport::to_text() const {
    std::size_t name_width = 5;
    std::size_t bytes_width = 5;
    for (const auto& stage : stages) {
        name_width = std::max(name_width, stage.name.size());
        bytes_width = std::max(bytes_width, std::to_string(stage.bytes).size());
    }
    std::ostringstream out;
    out << "filtering funnel\n";
    for (const auto& stage : stages) {
        out << "  " << stage.name;
        out << std::string(name_width - stage.name.size() + 2, ' ');
        std::string bytes = std::to_string(stage.bytes);
        out << std::string(bytes_width - bytes.size(), ' ') << bytes << " B  "
            << stage.percent << "\n";
    }
    if (non_monotone) {
        out << "warning: retained bytes grew at some stage; counters may mix "
               "units or a stage was skipped\n";
    }
    return out.str();
}

std::string FunnelReport::to_json() const {
    nlohmann::json j;
    j["stages"] = nlohmann::json::array();
    for (const auto& stage : stages) {
        j["stages"].push_back(
            {{"name", stage.name}, {"bytes", stage.bytes}, {"percent", stage.percent}});
    }
    j["non_monotone"] = non_monotone;
    return j.dump(2);
}

}  // namespace harvest
