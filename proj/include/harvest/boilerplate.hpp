#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace harvest {

enum class BlockClass { good, bad, short_, near_good };

std::string_view to_string(BlockClass c);

// One jusText classification unit: the text between block-level boundaries.
struct Block {
    std::string text;      // whitespace runs collapsed to " " (or "\n" when
                           // the run crossed a line break), then stripped
    std::string dom_path;  // dot-joined lowercase open-tag path at creation
    std::size_t char_count = 0;   // code points of text
    std::size_t word_count = 0;   // whitespace-separated tokens
    std::size_t link_chars = 0;   // code points contributed inside <a>
    double stopword_density = 0.0;
    double link_density = 0.0;    // link_chars / max(char_count, 1), capped at 1
    bool is_heading = false;      // some dom_path component starts h<digit>
    BlockClass cf_class = BlockClass::bad;
    BlockClass final_class = BlockClass::bad;  // good or bad only
};

struct StopwordList {
    std::string language;
    std::unordered_set<std::string> words;  // lowercase

    // One token per line, UTF-8; entries are lowercased on load.
    // Throws std::runtime_error on unreadable or empty files.
    static StopwordList load(const std::string& path, std::string language);
    static StopwordList from_words(std::vector<std::string> words, std::string language);

    bool contains_lowered(std::string_view word) const;
};

struct BoilerplateParams {
    double max_link_density = 0.2;
    std::size_t length_low = 70;
    std::size_t length_high = 200;
    double stopwords_low = 0.30;
    double stopwords_high = 0.32;
    std::size_t max_heading_distance = 200;

    // stopwords_low <= stopwords_high and length_low <= length_high.
    bool valid() const;
};

// Splits decoded HTML into blocks: boundaries at block-level tags and
// <br><br> runs; head/script/style/comments removed; char and anchor-char
// counts computed. Never throws on malformed markup.
std::vector<Block> segment(std::string_view html);

// Context-free rule cascade; fills stopword_density and cf_class.
BlockClass classify_context_free(Block& block, const BoilerplateParams& params,
                                 const StopwordList& stopwords);

// Context-sensitive revision; assigns final_class (good/bad) to every block.
// Idempotent: re-running on its own output changes nothing.
void classify_context_sensitive(std::vector<Block>& blocks,
                                const BoilerplateParams& params);

// segment + both passes.
std::vector<Block> analyze(std::string_view html, const BoilerplateParams& params,
                           const StopwordList& stopwords);

// Final-good blocks only, one line per block, inner whitespace collapsed to
// single spaces, empty lines dropped.
std::vector<std::string> extract_clean_text(std::string_view html,
                                            const BoilerplateParams& params,
                                            const StopwordList& stopwords);

}  // namespace harvest
