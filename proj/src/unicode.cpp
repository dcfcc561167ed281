#include "harvest/unicode.hpp"

namespace harvest::uni {

char32_t decode(std::string_view s, std::size_t& i) {
    const auto* b = reinterpret_cast<const unsigned char*>(s.data());
    const std::size_t n = s.size();
    unsigned char c = b[i];

    if (c < 0x80) {
        ++i;
        return c;
    }

    int extra;
    char32_t cp;
    char32_t min;
    if ((c & 0xE0) == 0xC0) {
        extra = 1; cp = c & 0x1F; min = 0x80;
    } else if ((c & 0xF0) == 0xE0) {
        extra = 2; cp = c & 0x0F; min = 0x800;
    } else if ((c & 0xF8) == 0xF0) {
        extra = 3; cp = c & 0x07; min = 0x10000;
    } else {
        ++i;
        return kReplacement;
    }

    if (i + extra >= n) {
        // truncated sequence
        ++i;
        return kReplacement;
    }
    for (int k = 1; k <= extra; ++k) {
        unsigned char cc = b[i + k];
        if ((cc & 0xC0) != 0x80) {
            ++i;
            return kReplacement;
        }
        cp = (cp << 6) | (cc & 0x3F);
    }
    if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
        ++i;
        return kReplacement;
    }
    i += 1 + extra;
    return cp;
}

void append_utf8(std::string& out, char32_t cp) {
    if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) cp = kReplacement;
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

std::size_t codepoint_count(std::string_view s) {
    std::size_t n = 0;
    for (std::size_t i = 0; i < s.size();) {
        decode(s, i);
        ++n;
    }
    return n;
}

std::string sanitize_utf8(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size();) {
        append_utf8(out, decode(s, i));
    }
    return out;
}

bool valid_utf8(std::string_view s) {
    for (std::size_t i = 0; i < s.size();) {
        std::size_t before = i;
        char32_t cp = decode(s, i);
        if (cp == kReplacement && !(i - before == 3 && s.substr(before, 3) == "\xEF\xBF\xBD")) {
            return false;
        }
    }
    return true;
}

bool is_space(char32_t cp) {
    switch (cp) {
        case U' ': case U'\t': case U'\n': case U'\r':
        case 0x0B: case 0x0C:
        case 0x1C: case 0x1D: case 0x1E: case 0x1F:  // FS/GS/RS/US
        case 0x85:    // NEL
        case 0xA0:    // NBSP
        case 0x1680:
        case 0x2028: case 0x2029:
        case 0x202F: case 0x205F: case 0x3000:
            return true;
        default:
            return cp >= 0x2000 && cp <= 0x200A;
    }
}

bool is_space_only(std::string_view s) {
    for (std::size_t i = 0; i < s.size();) {
        if (!is_space(decode(s, i))) return false;
    }
    return true;
}

bool is_word_char(char32_t cp) {
    if (cp < 0x80) {
        return (cp >= U'0' && cp <= U'9') || (cp >= U'a' && cp <= U'z') ||
               (cp >= U'A' && cp <= U'Z');
    }
    if (cp == 0xD7 || cp == 0xF7) return false;  // multiplication/division signs
    if (cp >= 0xC0 && cp <= 0x24F) return true;  // Latin-1 letters + Extended A/B
    if (cp >= 0x300 && cp <= 0x36F) return true;  // combining marks
    if (cp >= 0x386 && cp <= 0x3FF && cp != 0x387) return true;  // Greek
    if (cp >= 0x400 && cp <= 0x4FF) return true;  // Cyrillic
    if (cp >= 0x1E00 && cp <= 0x1FFF) return true;  // Latin/Greek extended additional
    return false;
}

char32_t to_lower(char32_t cp) {
    if (cp >= U'A' && cp <= U'Z') return cp + 0x20;
    if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;  // À-Þ (incl. Ð, Æ, Ø, Å)
    if (cp == 0x178) return 0xFF;                                  // Ÿ
    // Latin Extended-A pairs
    if ((cp >= 0x100 && cp <= 0x137) || (cp >= 0x14A && cp <= 0x177)) {
        return (cp % 2 == 0) ? cp + 1 : cp;
    }
    if ((cp >= 0x139 && cp <= 0x148) || (cp >= 0x179 && cp <= 0x17E)) {
        return (cp % 2 == 1) ? cp + 1 : cp;
    }
    if (cp >= 0x391 && cp <= 0x3A9 && cp != 0x3A2) return cp + 0x20;  // Greek
    if (cp >= 0x410 && cp <= 0x42F) return cp + 0x20;                 // Cyrillic
    if (cp >= 0x400 && cp <= 0x40F) return cp + 0x50;
    return cp;
}

std::string to_lower_utf8(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size();) {
        append_utf8(out, to_lower(decode(s, i)));
    }
    return out;
}

std::string_view strip(std::string_view s) {
    std::size_t begin = 0;
    while (begin < s.size()) {
        std::size_t i = begin;
        if (!is_space(decode(s, i))) break;
        begin = i;
    }
    // scan forward remembering the end of the last non-space code point
    std::size_t end = begin;
    for (std::size_t i = begin; i < s.size();) {
        std::size_t start = i;
        char32_t cp = decode(s, i);
        if (!is_space(cp)) end = i;
        (void)start;
    }
    return s.substr(begin, end - begin);
}

std::string collapse_to_single_spaces(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    bool in_space = false;
    for (std::size_t i = 0; i < s.size();) {
        char32_t cp = decode(s, i);
        if (is_space(cp)) {
            in_space = true;
            continue;
        }
        if (in_space && !out.empty()) out.push_back(' ');
        in_space = false;
        append_utf8(out, cp);
    }
    return out;
}

}  // namespace harvest::uni
