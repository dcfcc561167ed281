#include "harvest/warc.hpp"

#include <algorithm>
#include <cctype>

#include "harvest/gzip.hpp"
#include "harvest/unicode.hpp"

namespace harvest {

namespace {

bool iequals(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::tolower(static_cast<unsigned char>(a[i])) !=
            std::tolower(static_cast<unsigned char>(b[i]))) {
            return false;
        }
    }
    return true;
}

std::string_view trim_ascii(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

std::string kind_name(WarcParseError::Kind kind) {
    switch (kind) {
        case WarcParseError::Kind::bad_version: return "bad version line";
        case WarcParseError::Kind::header_without_colon: return "header without colon";
        case WarcParseError::Kind::missing_blank_line: return "missing blank line";
        case WarcParseError::Kind::missing_content_length: return "missing Content-Length";
        case WarcParseError::Kind::bad_content_length: return "bad Content-Length";
        case WarcParseError::Kind::truncated_payload: return "truncated payload";
        case WarcParseError::Kind::trailing_garbage: return "trailing garbage";
    }
    return "parse error";
}

}  // namespace

WarcParseError::WarcParseError(Kind k, std::size_t off, const std::string& what)
    : std::runtime_error("WARC " + kind_name(k) + " at offset " + std::to_string(off) +
                         (what.empty() ? "" : ": " + what)),
      kind(k),
      offset(off) {}

const std::string* WarcRecord::find_header(std::string_view name) const {
    for (const auto& [key, value] : headers) {
        if (iequals(key, name)) return &value;
    }
    return nullptr;
}

std::string_view WarcRecord::warc_type() const {
    const std::string* type = find_header("WARC-Type");
    return type ? std::string_view(*type) : std::string_view();
}

const std::string* HttpPayload::find_header(std::string_view name) const {
    for (const auto& [key, value] : headers) {
        if (iequals(key, name)) return &value;
    }
    return nullptr;
}

WarcRecord parse_warc(std::string_view bytes) {
    using Kind = WarcParseError::Kind;

    WarcRecord record;
    std::size_t pos = 0;

    std::size_t eol = bytes.find("\r\n");
    if (eol == std::string_view::npos) {
        throw WarcParseError(Kind::bad_version, 0, "no CRLF-terminated version line");
    }
    std::string_view version = bytes.substr(0, eol);
    if (version != "WARC/1.0" && version != "WARC/1.1") {
        throw WarcParseError(Kind::bad_version, 0, std::string(version.substr(0, 32)));
    }
    record.version = std::string(version);
    pos = eol + 2;

    // header block, terminated by an empty line
    bool saw_blank = false;
    while (pos < bytes.size()) {
        eol = bytes.find("\r\n", pos);
        if (eol == std::string_view::npos) break;
        std::string_view line = bytes.substr(pos, eol - pos);
        if (line.empty()) {
            saw_blank = true;
            pos = eol + 2;
            break;
        }
        std::size_t colon = line.find(':');
        if (colon == std::string_view::npos || colon == 0) {
            throw WarcParseError(Kind::header_without_colon, pos, std::string(line.substr(0, 64)));
        }
        std::string_view name = trim_ascii(line.substr(0, colon));
        std::string_view value = trim_ascii(line.substr(colon + 1));
        record.headers.emplace_back(std::string(name), std::string(value));
        pos = eol + 2;
    }
    if (!saw_blank) {
        throw WarcParseError(Kind::missing_blank_line, pos, "");
    }

    const std::string* cl = record.find_header("Content-Length");
    if (cl == nullptr) {
        throw WarcParseError(Kind::missing_content_length, pos, "");
    }
    std::uint64_t length = 0;
    if (cl->empty() || cl->find_first_not_of("0123456789") != std::string::npos) {
        throw WarcParseError(Kind::bad_content_length, pos, *cl);
    }
    for (char c : *cl) {
        if (length > (UINT64_MAX - 9) / 10) {
            throw WarcParseError(Kind::bad_content_length, pos, *cl);
        }
        length = length * 10 + static_cast<std::uint64_t>(c - '0');
    }

    if (bytes.size() - pos < length) {
        throw WarcParseError(Kind::truncated_payload, pos,
                             "need " + std::to_string(length) + " bytes, have " +
                                 std::to_string(bytes.size() - pos));
    }
    record.payload = std::string(bytes.substr(pos, length));
    pos += length;

    // tolerate the record delimiter: zero, one or two trailing CRLFs
    std::string_view rest = bytes.substr(pos);
    if (!(rest.empty() || rest == "\r\n" || rest == "\r\n\r\n")) {
        throw WarcParseError(Kind::trailing_garbage, pos,
                             std::to_string(rest.size()) + " bytes past record end");
    }
    return record;
}

std::string serialize_warc(const WarcRecord& record) {
    if (record.version != "WARC/1.0" && record.version != "WARC/1.1") {
        throw std::invalid_argument("serialize_warc: bad version '" + record.version + "'");
    }
    const std::string* cl = record.find_header("Content-Length");
    if (cl == nullptr) {
        throw std::invalid_argument("serialize_warc: Content-Length header missing");
    }
    if (*cl != std::to_string(record.payload.size())) {
        throw std::invalid_argument("serialize_warc: Content-Length " + *cl +
                                    " does not match payload size " +
                                    std::to_string(record.payload.size()));
    }
    if (record.find_header("WARC-Type") == nullptr) {
        throw std::invalid_argument("serialize_warc: WARC-Type header missing");
    }

    std::string out = record.version;
    out += "\r\n";
    for (const auto& [name, value] : record.headers) {
        if (name.empty() || name.find_first_of(":\r\n \t") != std::string::npos) {
            throw std::invalid_argument("serialize_warc: invalid header name '" + name + "'");
        }
        if (value.find_first_of("\r\n") != std::string::npos) {
            throw std::invalid_argument("serialize_warc: CR/LF in value of '" + name + "'");
        }
        out += name;
        out += ": ";
        out += value;
        out += "\r\n";
    }
    out += "\r\n";
    out += record.payload;
    out += "\r\n\r\n";
    return out;
}

WarcRecord make_warc_record(std::string_view warc_type,
                            std::vector<std::pair<std::string, std::string>> headers,
                            std::string payload,
                            std::string_view version) {
    WarcRecord record;
    record.version = std::string(version);
    record.headers = std::move(headers);
    record.headers.emplace_back("WARC-Type", std::string(warc_type));
    record.headers.emplace_back("Content-Length", std::to_string(payload.size()));
    record.payload = std::move(payload);
    return record;
}

namespace {

// Splits one line ending at CRLF (or bare LF, which crawled servers do emit).
std::string_view next_line(std::string_view text, std::size_t& pos) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) {
        std::string_view line = text.substr(pos);
        pos = text.size();
        return line;
    }
    std::size_t end = nl;
    if (end > pos && text[end - 1] == '\r') --end;
    std::string_view line = text.substr(pos, end - pos);
    pos = nl + 1;
    return line;
}

std::string parse_charset_param(std::string_view content_type) {
    // look for ;charset=..., tolerating spaces and quotes
    std::string lowered;
    lowered.reserve(content_type.size());
    for (char c : content_type) lowered.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    std::size_t at = lowered.find("charset");
    if (at == std::string::npos) return {};
    at += 7;
    while (at < lowered.size() && (lowered[at] == ' ' || lowered[at] == '\t')) ++at;
    if (at >= lowered.size() || lowered[at] != '=') return {};
    ++at;
    while (at < lowered.size() && (lowered[at] == ' ' || lowered[at] == '\t' || lowered[at] == '"' || lowered[at] == '\'')) ++at;
    std::size_t end = at;
    while (end < lowered.size() && lowered[end] != ';' && lowered[end] != ' ' &&
           lowered[end] != '\t' && lowered[end] != '"' && lowered[end] != '\'') {
        ++end;
    }
    return lowered.substr(at, end - at);
}

std::string dechunk(std::string_view body) {
    std::string out;
    std::size_t pos = 0;
    while (true) {
        std::string_view size_line = next_line(body, pos);
        if (size_line.empty() && pos >= body.size()) {
            throw HttpParseError("chunked body: missing chunk size");
        }
        std::size_t semi = size_line.find(';');
        std::string_view hex = trim_ascii(size_line.substr(0, semi));
        if (hex.empty() || hex.find_first_not_of("0123456789abcdefABCDEF") != std::string_view::npos) {
            throw HttpParseError("chunked body: bad chunk size '" + std::string(hex.substr(0, 16)) + "'");
        }
        std::size_t size = 0;
        for (char c : hex) {
            size = size * 16 + static_cast<std::size_t>(
                c <= '9' ? c - '0' : (std::tolower(static_cast<unsigned char>(c)) - 'a' + 10));
        }
        if (size == 0) break;  // trailers, if any, are ignored
        if (pos + size > body.size()) {
            throw HttpParseError("chunked body: truncated chunk");
        }
        out.append(body.substr(pos, size));
        pos += size;
        next_line(body, pos);  // consume the CRLF after chunk data
    }
    return out;
}

}  // namespace

HttpPayload extract_http(const WarcRecord& record) {
    if (!iequals(record.warc_type(), "response")) {
        throw NotAResponseError("record WARC-Type is '" + std::string(record.warc_type()) +
                                "', not response");
    }
    std::string_view payload = record.payload;
    std::size_t pos = 0;

    std::string_view status_line = next_line(payload, pos);
    // HTTP/<major>.<minor> SP status [SP reason]
    if (status_line.substr(0, 5) != "HTTP/") {
        throw HttpParseError("bad status line '" + std::string(status_line.substr(0, 32)) + "'");
    }
    std::size_t sp = status_line.find(' ');
    if (sp == std::string_view::npos || sp + 3 > status_line.size()) {
        throw HttpParseError("bad status line '" + std::string(status_line.substr(0, 32)) + "'");
    }
    std::string_view code = status_line.substr(sp + 1, 3);
    if (code.size() != 3 || code.find_first_not_of("0123456789") != std::string_view::npos) {
        throw HttpParseError("bad status code in '" + std::string(status_line.substr(0, 32)) + "'");
    }
    HttpPayload http;
    http.status = (code[0] - '0') * 100 + (code[1] - '0') * 10 + (code[2] - '0');
    if (http.status < 100 || http.status > 599) {
        throw HttpParseError("status out of range: " + std::string(code));
    }

    while (pos < payload.size()) {
        std::string_view line = next_line(payload, pos);
        if (line.empty()) break;
        std::size_t colon = line.find(':');
        if (colon == std::string_view::npos || colon == 0) continue;  // tolerate junk headers
        http.headers.emplace_back(std::string(trim_ascii(line.substr(0, colon))),
                                  std::string(trim_ascii(line.substr(colon + 1))));
    }

    std::string_view rest = payload.substr(pos);
    const std::string* te = http.find_header("Transfer-Encoding");
    if (te != nullptr && !iequals(trim_ascii(*te), "identity")) {
        if (iequals(trim_ascii(*te), "chunked")) {
            http.body = dechunk(rest);
        } else {
            throw UnsupportedCodingError("transfer coding '" + *te + "'");
        }
    } else {
        const std::string* cl = http.find_header("Content-Length");
        if (cl != nullptr && cl->find_first_not_of("0123456789") == std::string::npos && !cl->empty()) {
            std::uint64_t want = 0;
            for (char c : *cl) {
                want = want * 10 + static_cast<std::uint64_t>(c - '0');
                if (want > rest.size()) break;
            }
            http.body = std::string(rest.substr(0, std::min<std::uint64_t>(want, rest.size())));
        } else {
            http.body = std::string(rest);
        }
    }

    const std::string* ce = http.find_header("Content-Encoding");
    if (ce != nullptr) {
        std::string_view coding = trim_ascii(*ce);
        if (iequals(coding, "gzip") || iequals(coding, "x-gzip")) {
            try {
                http.body = gzip_decompress_member(http.body);
            } catch (const GzipError& e) {
                throw UnsupportedCodingError(std::string("content coding gzip: ") + e.what());
            }
        } else if (!iequals(coding, "identity") && !coding.empty()) {
            throw UnsupportedCodingError("content coding '" + *ce + "'");
        }
    }

    const std::string* ct = http.find_header("Content-Type");
    if (ct != nullptr) http.declared_charset = parse_charset_param(*ct);
    return http;
}

namespace {

// Windows-1252 mappings for 0x80..0x9F (the rest coincides with Latin-1).
constexpr char32_t kCp1252High[32] = {
    0x20AC, 0xFFFD, 0x201A, 0x0192, 0x201E, 0x2026, 0x2020, 0x2021,
    0x02C6, 0x2030, 0x0160, 0x2039, 0x0152, 0xFFFD, 0x017D, 0xFFFD,
    0xFFFD, 0x2018, 0x2019, 0x201C, 0x201D, 0x2022, 0x2013, 0x2014,
    0x02DC, 0x2122, 0x0161, 0x203A, 0x0153, 0xFFFD, 0x017E, 0x0178,
};

std::string decode_single_byte(std::string_view body, bool cp1252) {
    std::string out;
    out.reserve(body.size() * 2);
    for (unsigned char c : body) {
        if (c < 0x80) {
            out.push_back(static_cast<char>(c));
        } else if (cp1252 && c < 0xA0) {
            uni::append_utf8(out, kCp1252High[c - 0x80]);
        } else {
            uni::append_utf8(out, c);
        }
    }
    return out;
}

std::string find_meta_charset(std::string_view body) {
    // scan the prologue for <meta charset=...> or http-equiv content-type
    std::string head;
    std::size_t n = std::min<std::size_t>(body.size(), 2048);
    head.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        head.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(body[i]))));
    }
    std::size_t at = 0;
    while ((at = head.find("<meta", at)) != std::string::npos) {
        std::size_t end = head.find('>', at);
        if (end == std::string::npos) end = head.size();
        std::string_view tag = std::string_view(head).substr(at, end - at);
        std::size_t c = tag.find("charset");
        if (c != std::string_view::npos) {
            std::size_t eq = tag.find('=', c);
            if (eq != std::string_view::npos) {
                ++eq;
                while (eq < tag.size() && (tag[eq] == ' ' || tag[eq] == '"' || tag[eq] == '\'')) ++eq;
                std::size_t stop = eq;
                while (stop < tag.size() && tag[stop] != '"' && tag[stop] != '\'' &&
                       tag[stop] != ' ' && tag[stop] != ';' && tag[stop] != '/') {
                    ++stop;
                }
                if (stop > eq) return std::string(tag.substr(eq, stop - eq));
            }
        }
        at = end;
    }
    return {};
}

bool known_charset(const std::string& cs) {
    return cs == "utf-8" || cs == "utf8" || cs == "us-ascii" || cs == "ascii" ||
           cs == "iso-8859-1" || cs == "latin-1" || cs == "latin1" ||
           cs == "windows-1252" || cs == "cp1252";
}

}  // namespace

DecodedText decode_text(const HttpPayload& payload) {
    DecodedText result;
    std::string charset = payload.declared_charset;
    result.source = DecodedText::Source::header;

    if (charset.empty() || !known_charset(charset)) {
        std::string meta = find_meta_charset(payload.body);
        if (!meta.empty() && known_charset(meta)) {
            charset = meta;
            result.source = DecodedText::Source::meta;
        }
    }
    if (charset.empty() || !known_charset(charset)) {
        charset = "utf-8";
        result.source = DecodedText::Source::fallback;
    }

    result.charset = charset;
    if (charset == "iso-8859-1" || charset == "latin-1" || charset == "latin1") {
        result.text = decode_single_byte(payload.body, /*cp1252=*/false);
    } else if (charset == "windows-1252" || charset == "cp1252") {
        result.text = decode_single_byte(payload.body, /*cp1252=*/true);
    } else {
        // utf-8 and ascii, with replacement characters for invalid bytes
        result.text = uni::sanitize_utf8(payload.body);
    }
    return result;
}

}  // namespace harvest
