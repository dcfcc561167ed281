#include "harvest/boilerplate.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <stdexcept>
#include <unordered_map>

#include "harvest/unicode.hpp"

namespace harvest {
namespace {

// Block-splitting tags. Everything else only contributes to the open path.
bool is_paragraph_tag(std::string_view name) {
    static const std::unordered_set<std::string_view> tags = {
        "body", "blockquote", "caption", "center", "col",  "colgroup", "dd",
        "div",  "dl",         "dt",      "fieldset", "form", "legend", "optgroup",
        "option", "p",        "pre",     "table",  "td",   "textarea", "tfoot",
        "th",   "thead",      "tr",      "ul",     "li",   "h1",       "h2",
        "h3",   "h4",         "h5",      "h6"};
    return tags.count(name) > 0;
}

// Elements with no content model: the scanner fires start and end together.
bool is_void_tag(std::string_view name) {
    static const std::unordered_set<std::string_view> tags = {
        "area", "base",  "br",    "col",   "embed", "hr",  "img",
        "input", "link", "meta",  "param", "source", "track", "wbr"};
    return tags.count(name) > 0;
}

// Whitespace runs become "\n" when they cross a line break, else " ".
std::string normalize_ws(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        std::size_t start = i;
        char32_t cp = uni::decode(s, i);
        if (!uni::is_space(cp)) {
            out.append(s.substr(start, i - start));
            continue;
        }
        bool newline = (cp == U'\n' || cp == U'\r');
        while (i < s.size()) {
            std::size_t peek = i;
            char32_t next = uni::decode(s, peek);
            if (!uni::is_space(next)) break;
            newline = newline || next == U'\n' || next == U'\r';
            i = peek;
        }
        out.push_back(newline ? '\n' : ' ');
    }
    return out;
}

const std::unordered_map<std::string_view, std::string_view>& named_entities() {
    static const std::unordered_map<std::string_view, std::string_view> table = {
        {"amp", "&"},       {"lt", "<"},        {"gt", ">"},      {"quot", "\""},
        {"apos", "'"},      {"nbsp", " "}, {"shy", "­"},
        {"copy", "©"}, {"reg", "®"},  {"trade", "™"},
        {"deg", "°"},  {"middot", "·"}, {"sect", "§"},
        {"para", "¶"}, {"laquo", "«"}, {"raquo", "»"},
        {"ldquo", "“"}, {"rdquo", "”"}, {"lsquo", "‘"},
        {"rsquo", "’"}, {"bdquo", "„"}, {"ndash", "–"},
        {"mdash", "—"}, {"hellip", "…"}, {"times", "×"},
        {"divide", "÷"}, {"szlig", "ß"},
        {"agrave", "à"}, {"aacute", "á"}, {"acirc", "â"},
        {"atilde", "ã"}, {"auml", "ä"},  {"aring", "å"},
        {"aelig", "æ"},  {"ccedil", "ç"}, {"egrave", "è"},
        {"eacute", "é"}, {"ecirc", "ê"}, {"euml", "ë"},
        {"igrave", "ì"}, {"iacute", "í"}, {"icirc", "î"},
        {"iuml", "ï"},   {"eth", "ð"},   {"ntilde", "ñ"},
        {"ograve", "ò"}, {"oacute", "ó"}, {"ocirc", "ô"},
        {"otilde", "õ"}, {"ouml", "ö"},  {"oslash", "ø"},
        {"ugrave", "ù"}, {"uacute", "ú"}, {"ucirc", "û"},
        {"uuml", "ü"},   {"yacute", "ý"}, {"thorn", "þ"},
        {"yuml", "ÿ"},
        {"Agrave", "À"}, {"Aacute", "Á"}, {"Acirc", "Â"},
        {"Atilde", "Ã"}, {"Auml", "Ä"},  {"Aring", "Å"},
        {"AElig", "Æ"},  {"Ccedil", "Ç"}, {"Egrave", "È"},
        {"Eacute", "É"}, {"Ecirc", "Ê"}, {"Euml", "Ë"},
        {"Igrave", "Ì"}, {"Iacute", "Í"}, {"Icirc", "Î"},
        {"Iuml", "Ï"},   {"ETH", "Ð"},   {"Ntilde", "Ñ"},
        {"Ograve", "Ò"}, {"Oacute", "Ó"}, {"Ocirc", "Ô"},
        {"Otilde", "Õ"}, {"Ouml", "Ö"},  {"Oslash", "Ø"},
        {"Ugrave", "Ù"}, {"Uacute", "Ú"}, {"Ucirc", "Û"},
        {"Uuml", "Ü"},   {"Yacute", "Ý"}, {"THORN", "Þ"},
    };
    return table;
}

// HTML5 numeric-reference remapping of the 0x80..0x9F range.
char32_t remap_c1(char32_t cp) {
    static constexpr std::array<char32_t, 32> table = {
        0x20AC, 0x81,   0x201A, 0x0192, 0x201E, 0x2026, 0x2020, 0x2021,
        0x02C6, 0x2030, 0x0160, 0x2039, 0x0152, 0x8D,   0x017D, 0x8F,
        0x90,   0x2018, 0x2019, 0x201C, 0x201D, 0x2022, 0x2013, 0x2014,
        0x02DC, 0x2122, 0x0161, 0x203A, 0x0153, 0x9D,   0x017E, 0x0178};
    return table[cp - 0x80];
}

// Appends the decoded form of the reference starting at html[i] ('&') to out
// and advances i. Unknown named references stay literal.
void decode_entity(std::string_view html, std::size_t& i, std::string& out) {
    std::size_t n = html.size();
    if (i + 1 < n && html[i + 1] == '#') {
        std::size_t j = i + 2;
        bool hex = j < n && (html[j] == 'x' || html[j] == 'X');
        if (hex) ++j;
        std::uint64_t value = 0;
        std::size_t digits_start = j;
        while (j < n) {
            char c = html[j];
            int digit;
            if (c >= '0' && c <= '9') digit = c - '0';
            else if (hex && c >= 'a' && c <= 'f') digit = c - 'a' + 10;
            else if (hex && c >= 'A' && c <= 'F') digit = c - 'A' + 10;
            else break;
            if (value <= 0x110000) value = value * (hex ? 16 : 10) + digit;
            ++j;
        }
        if (j == digits_start) {
            out.push_back('&');
            ++i;
            return;
        }
        char32_t cp = static_cast<char32_t>(value);
        if (cp == 0 || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
            cp = uni::kReplacement;
        } else if (cp >= 0x80 && cp <= 0x9F) {
            cp = remap_c1(cp);
        }
        uni::append_utf8(out, cp);
        i = (j < n && html[j] == ';') ? j + 1 : j;
        return;
    }
    std::size_t j = i + 1;
    while (j < n && (std::isalnum(static_cast<unsigned char>(html[j])) != 0)) ++j;
    if (j < n && html[j] == ';' && j > i + 1) {
        auto it = named_entities().find(html.substr(i + 1, j - i - 1));
        if (it != named_entities().end()) {
            out.append(it->second);
            i = j + 1;
            return;
        }
    }
    out.push_back('&');
    ++i;
}

// Event consumer with jusText paragraph semantics: blocks split at paragraph
// tags and <br><br>; the br and link flags deliberately survive splits.
class paragraph_maker {
  public:
    paragraph_maker() { start_new_paragraph(); }

    void on_start(std::string_view name) {
        if (name == "head") {
            ++head_depth_;
            return;
        }
        if (head_depth_ > 0) return;
        path_.emplace_back(name);
        if (is_paragraph_tag(name) || (name == "br" && br_)) {
            start_new_paragraph();
        } else {
            br_ = (name == "br");
            if (br_) {
                // Separator node so a line break never glues words together.
                text_nodes_.emplace_back(" ");
            } else if (name == "a") {
                link_ = true;
            }
        }
    }

    void on_end(std::string_view name) {
        if (name == "head") {
            if (head_depth_ > 0) --head_depth_;
            return;
        }
        if (head_depth_ > 0) return;
        if (!path_.empty()) path_.pop_back();
        if (is_paragraph_tag(name)) start_new_paragraph();
        if (name == "a") link_ = false;
    }

    void on_text(std::string_view run) {
        if (head_depth_ > 0) return;
        if (uni::is_space_only(run)) return;
        std::string normalized = normalize_ws(run);
        if (link_) link_chars_ += uni::codepoint_count(normalized);
        text_nodes_.push_back(std::move(normalized));
        br_ = false;
    }

    std::vector<Block> finish() {
        start_new_paragraph();
        return std::move(blocks_);
    }

  private:
    void start_new_paragraph() {
        if (!text_nodes_.empty()) {
            Block block;
            block.dom_path = dom_path_;
            std::string joined;
            for (const auto& node : text_nodes_) joined += node;
            block.text = normalize_ws(uni::strip(joined));
            block.char_count = uni::codepoint_count(block.text);
            block.link_chars = link_chars_;
            block.link_density = static_cast<double>(link_chars_) /
                                 static_cast<double>(std::max<std::size_t>(block.char_count, 1));
            block.link_density = std::min(block.link_density, 1.0);
            block.is_heading = path_is_heading(block.dom_path);
            std::size_t words = 0;
            for_each_word(block.text, [&](std::string_view) { ++words; });
            block.word_count = words;
            blocks_.push_back(std::move(block));
        }
        text_nodes_.clear();
        link_chars_ = 0;
        dom_path_ = join_path();
    }

    std::string join_path() const {
        std::string joined;
        for (const auto& tag : path_) {
            if (!joined.empty()) joined.push_back('.');
            joined += tag;
        }
        return joined;
    }

    static bool path_is_heading(std::string_view dom_path) {
        return path_component_prefix(dom_path, [](std::string_view comp) {
            return comp.size() >= 2 && comp[0] == 'h' &&
                   comp[1] >= '0' && comp[1] <= '9';
        });
    }

  public:
    template <typename Pred>
    static bool path_component_prefix(std::string_view dom_path, Pred pred) {
        std::size_t pos = 0;
        while (pos <= dom_path.size()) {
            std::size_t dot = dom_path.find('.', pos);
            std::size_t end = dot == std::string_view::npos ? dom_path.size() : dot;
            if (pred(dom_path.substr(pos, end - pos))) return true;
            if (dot == std::string_view::npos) break;
            pos = dot + 1;
        }
        return false;
    }

    template <typename Fn>
    static void for_each_word(std::string_view text, Fn fn) {
        std::size_t i = 0;
        std::size_t word_start = std::string_view::npos;
        std::size_t n = text.size();
        while (i < n) {
            std::size_t start = i;
            char32_t cp = uni::decode(text, i);
            if (uni::is_space(cp)) {
                if (word_start != std::string_view::npos) {
                    fn(text.substr(word_start, start - word_start));
                    word_start = std::string_view::npos;
                }
            } else if (word_start == std::string_view::npos) {
                word_start = start;
            }
        }
        if (word_start != std::string_view::npos) {
            fn(text.substr(word_start));
        }
    }

  private:
    std::vector<std::string> path_;
    std::vector<Block> blocks_;
    std::vector<std::string> text_nodes_;
    std::string dom_path_;
    std::size_t link_chars_ = 0;
    bool link_ = false;
    bool br_ = false;
    int head_depth_ = 0;
};

bool iequals_ascii(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::tolower(static_cast<unsigned char>(a[i])) !=
            std::tolower(static_cast<unsigned char>(b[i]))) {
            return false;
        }
    }
    return true;
}

// Error-tolerant tag scanner. Comments/doctype/PI vanish; script and style
// elements are consumed whole and emit nothing, mirroring a cleaner that
// strips them before paragraph making.
void scan_html(std::string_view html, paragraph_maker& maker) {
    std::size_t n = html.size();
    std::size_t i = 0;
    std::string run;

    auto flush = [&] {
        if (!run.empty()) {
            maker.on_text(run);
            run.clear();
        }
    };

    auto skip_rawtext = [&](std::string_view tag) {
        // Content until the matching close tag is discarded.
        while (i < n) {
            std::size_t lt = html.find('<', i);
            if (lt == std::string_view::npos) {
                i = n;
                return;
            }
            i = lt;
            if (lt + 1 + tag.size() <= n && html[lt + 1] == '/' &&
                iequals_ascii(html.substr(lt + 2, tag.size()), tag)) {
                std::size_t after = lt + 2 + tag.size();
                if (after >= n || html[after] == '>' || html[after] == '/' ||
                    uni::is_space(static_cast<unsigned char>(html[after]))) {
                    std::size_t gt = html.find('>', after);
                    i = gt == std::string_view::npos ? n : gt + 1;
                    return;
                }
            }
            ++i;
        }
    };

    while (i < n) {
        char c = html[i];
        if (c == '&') {
            decode_entity(html, i, run);
            continue;
        }
        if (c != '<') {
            std::size_t stop = html.find_first_of("<&", i);
            if (stop == std::string_view::npos) stop = n;
            run.append(html.substr(i, stop - i));
            i = stop;
            continue;
        }
        // '<': comment, declaration, end tag, start tag, or literal text.
        if (html.compare(i, 4, "<!--") == 0) {
            flush();
            std::size_t close = html.find("-->", i + 4);
            i = close == std::string_view::npos ? n : close + 3;
            continue;
        }
        if (i + 1 < n && (html[i + 1] == '!' || html[i + 1] == '?')) {
            flush();
            std::size_t close = html.find('>', i + 2);
            i = close == std::string_view::npos ? n : close + 1;
            continue;
        }
        if (i + 2 < n && html[i + 1] == '/' &&
            std::isalpha(static_cast<unsigned char>(html[i + 2])) != 0) {
            flush();
            std::size_t j = i + 2;
            std::string name;
            while (j < n && html[j] != '>' && html[j] != '/' &&
                   !uni::is_space(static_cast<unsigned char>(html[j]))) {
                name.push_back(static_cast<char>(
                    std::tolower(static_cast<unsigned char>(html[j]))));
                ++j;
            }
            std::size_t gt = html.find('>', j);
            i = gt == std::string_view::npos ? n : gt + 1;
            maker.on_end(name);
            continue;
        }
        if (i + 1 < n && std::isalpha(static_cast<unsigned char>(html[i + 1])) != 0) {
            flush();
            std::size_t j = i + 1;
            std::string name;
            while (j < n && html[j] != '>' && html[j] != '/' &&
                   !uni::is_space(static_cast<unsigned char>(html[j]))) {
                name.push_back(static_cast<char>(
                    std::tolower(static_cast<unsigned char>(html[j]))));
                ++j;
            }
            bool self_closing = false;
            // Attribute scan: quoted values may contain '>' or '/'.
            while (j < n) {
                char a = html[j];
                if (a == '>') {
                    ++j;
                    break;
                }
                if (a == '/') {
                    if (j + 1 < n && html[j + 1] == '>') {
                        self_closing = true;
                        j += 2;
                        break;
                    }
                    ++j;
                    continue;
                }
                if (a == '"' || a == '\'') {
                    std::size_t close = html.find(a, j + 1);
                    j = close == std::string_view::npos ? n : close + 1;
                    continue;
                }
                ++j;
            }
            i = j;
            bool rawtext = (name == "script" || name == "style");
            if (rawtext && !self_closing) {
                skip_rawtext(name);
                continue;
            }
            if (rawtext) continue;  // <script/> has no content to skip
            maker.on_start(name);
            if (self_closing || is_void_tag(name)) maker.on_end(name);
            continue;
        }
        // Stray '<' is literal text.
        run.push_back('<');
        ++i;
    }
    flush();
}

// Nearest good/bad neighbor; short blocks always skipped, near-good skipped
// unless ignore_neargood is false. Out of range counts as bad.
BlockClass neighbour(const std::vector<Block>& blocks, std::size_t i, int step,
                     bool ignore_neargood) {
    std::int64_t j = static_cast<std::int64_t>(i) + step;
    while (j >= 0 && j < static_cast<std::int64_t>(blocks.size())) {
        BlockClass c = blocks[static_cast<std::size_t>(j)].final_class;
        if (c == BlockClass::good || c == BlockClass::bad) return c;
        if (c == BlockClass::near_good && !ignore_neargood) return c;
        j += step;
    }
    return BlockClass::bad;
}

}  // namespace

std::string_view to_string(BlockClass c) {
    switch (c) {
        case BlockClass::good: return "good";
        case BlockClass::bad: return "bad";
        case BlockClass::short_: return "short";
        case BlockClass::near_good: return "neargood";
    }
    return "unknown";
}

StopwordList StopwordList::load(const std::string& path, std::string language) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open stopword list: " + path);
    StopwordList list;
    list.language = std::move(language);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string word{uni::strip(line)};
        if (word.empty()) continue;
        list.words.insert(uni::to_lower_utf8(word));
    }
    if (list.words.empty()) throw std::runtime_error("empty stopword list: " + path);
    return list;
}

StopwordList StopwordList::from_words(std::vector<std::string> words, std::string language) {
    StopwordList list;
    list.language = std::move(language);
    for (auto& word : words) list.words.insert(uni::to_lower_utf8(word));
    return list;
}

bool StopwordList::contains_lowered(std::string_view word) const {
    return words.count(uni::to_lower_utf8(word)) > 0;
}

bool BoilerplateParams::valid() const {
    return stopwords_low <= stopwords_high && length_low <= length_high;
}

std::vector<Block> segment(std::string_view html) {
    paragraph_maker maker;
    scan_html(html, maker);
    return maker.finish();
}

BlockClass classify_context_free(Block& block, const BoilerplateParams& params,
                                 const StopwordList& stopwords) {
    std::size_t stop_count = 0;
    paragraph_maker::for_each_word(block.text, [&](std::string_view word) {
        if (stopwords.contains_lowered(word)) ++stop_count;
    });
    block.stopword_density =
        block.word_count == 0
            ? 0.0
            : static_cast<double>(stop_count) / static_cast<double>(block.word_count);

    bool copyright_mark = block.text.find("©") != std::string::npos ||
                          block.text.find("&copy") != std::string::npos;
    bool in_select = paragraph_maker::path_component_prefix(
        block.dom_path, [](std::string_view comp) {
            return comp.substr(0, 6) == "select";
        });

    if (block.link_density > params.max_link_density) {
        block.cf_class = BlockClass::bad;
    } else if (copyright_mark) {
        block.cf_class = BlockClass::bad;
    } else if (in_select) {
        block.cf_class = BlockClass::bad;
    } else if (block.char_count < params.length_low) {
        block.cf_class = block.link_chars > 0 ? BlockClass::bad : BlockClass::short_;
    } else if (block.stopword_density >= params.stopwords_high) {
        block.cf_class = block.char_count > params.length_high ? BlockClass::good
                                                               : BlockClass::near_good;
    } else if (block.stopword_density >= params.stopwords_low) {
        block.cf_class = BlockClass::near_good;
    } else {
        block.cf_class = BlockClass::bad;
    }
    return block.cf_class;
}

void classify_context_sensitive(std::vector<Block>& blocks,
                                const BoilerplateParams& params) {
    const std::size_t n = blocks.size();
    for (auto& block : blocks) block.final_class = block.cf_class;

    // Headings classified short get a chance to attach to upcoming content.
    for (std::size_t i = 0; i < n; ++i) {
        if (!(blocks[i].is_heading && blocks[i].final_class == BlockClass::short_)) {
            continue;
        }
        std::size_t distance = 0;
        for (std::size_t j = i + 1; j < n && distance <= params.max_heading_distance; ++j) {
            if (blocks[j].final_class == BlockClass::good) {
                blocks[i].final_class = BlockClass::near_good;
                break;
            }
            distance += blocks[j].char_count;
        }
    }

    // Short blocks adopt their surroundings; batch apply so shorts never
    // cascade into each other within the pass.
    std::vector<std::pair<std::size_t, BlockClass>> short_updates;
    for (std::size_t i = 0; i < n; ++i) {
        if (blocks[i].final_class != BlockClass::short_) continue;
        BlockClass prev = neighbour(blocks, i, -1, true);
        BlockClass next = neighbour(blocks, i, +1, true);
        BlockClass assigned;
        if (prev == BlockClass::good && next == BlockClass::good) {
            assigned = BlockClass::good;
        } else if (prev == BlockClass::bad && next == BlockClass::bad) {
            assigned = BlockClass::bad;
        } else if ((prev == BlockClass::bad &&
                    neighbour(blocks, i, -1, false) == BlockClass::near_good) ||
                   (next == BlockClass::bad &&
                    neighbour(blocks, i, +1, false) == BlockClass::near_good)) {
            assigned = BlockClass::good;
        } else {
            assigned = BlockClass::bad;
        }
        short_updates.emplace_back(i, assigned);
    }
    for (auto [i, assigned] : short_updates) blocks[i].final_class = assigned;

    // Near-good blocks resolve sequentially; earlier decisions feed later ones.
    for (std::size_t i = 0; i < n; ++i) {
        if (blocks[i].final_class != BlockClass::near_good) continue;
        BlockClass prev = neighbour(blocks, i, -1, true);
        BlockClass next = neighbour(blocks, i, +1, true);
        blocks[i].final_class = (prev == BlockClass::bad && next == BlockClass::bad)
                                    ? BlockClass::bad
                                    : BlockClass::good;
    }

    // Headings demoted by context (not by the cascade) recover when good
    // content follows within reach.
    for (std::size_t i = 0; i < n; ++i) {
        if (!(blocks[i].is_heading && blocks[i].final_class == BlockClass::bad &&
              blocks[i].cf_class != BlockClass::bad)) {
            continue;
        }
        std::size_t distance = 0;
        for (std::size_t j = i + 1; j < n && distance <= params.max_heading_distance; ++j) {
            if (blocks[j].final_class == BlockClass::good) {
                blocks[i].final_class = BlockClass::good;
                break;
            }
            distance += blocks[j].char_count;
        }
    }
}

std::vector<Block> analyze(std::string_view html, const BoilerplateParams& params,
                           const StopwordList& stopwords) {
    std::vector<Block> blocks = segment(html);
    for (auto& block : blocks) classify_context_free(block, params, stopwords);
    classify_context_sensitive(blocks, params);
    return blocks;
}

std::vector<std::string> extract_clean_text(std::string_view html,
                                            const BoilerplateParams& params,
                                            const StopwordList& stopwords) {
    std::vector<std::string> lines;
    for (const auto& block : analyze(html, params, stopwords)) {
        if (block.final_class != BlockClass::good) continue;
        std::string line = uni::collapse_to_single_spaces(block.text);
        if (!line.empty()) lines.push_back(std::move(line));
    }
    return lines;
}

}  // namespace harvest
