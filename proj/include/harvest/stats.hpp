#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "harvest/document.hpp"

namespace harvest {

// Maximal runs of word characters (letters, digits, combining marks) are
// tokens; every other non-space character is a single-character token.
std::vector<std::string> tokenize(std::string_view text);

struct Vocab {
    std::uint64_t min_count = 1;
    std::unordered_map<std::string, std::uint64_t> counts;

    bool operator==(const Vocab&) const = default;
};

// Exact counts over all document lines; tokens below min_count removed only
// after the full count (so the threshold applies to corpus-wide totals).
Vocab vocab(const std::vector<Document>& docs, std::uint64_t min_count);
Vocab vocab_from_lines(const std::vector<std::string>& lines, std::uint64_t min_count);

struct VocabReport {
    std::string name_a = "A";
    std::string name_b = "B";
    std::uint64_t min_count = 0;
    std::uint64_t unique_a = 0;
    std::uint64_t unique_b = 0;
    std::uint64_t shared = 0;
    std::uint64_t only_a = 0;
    std::uint64_t only_b = 0;

    std::string to_text() const;
    std::string to_json() const;
};

// Exact key-set arithmetic. Throws std::invalid_argument when the two maps
// were built with different min_count settings.
VocabReport compare_vocab(const Vocab& a, const Vocab& b);

struct FunnelStage {
    std::string name;
    std::uint64_t bytes = 0;
    std::string percent;  // of stage 0, two significant figures, e.g. "4.2%"
};

struct FunnelReport {
    std::vector<FunnelStage> stages;
    bool non_monotone = false;  // some stage grew; reported, never silent

    std::string to_text() const;
    std::string to_json() const;
};

// Smallest number of decimals (0..6) that shows at least two significant
// figures; the 100% base stage prints as "100%".
std::string format_percent(std::uint64_t bytes, std::uint64_t base);

// Throws std::invalid_argument when stages are empty or stage 0 is zero.
FunnelReport funnel(const std::vector<std::pair<std::string, std::uint64_t>>& stages);

}  // namespace harvest
