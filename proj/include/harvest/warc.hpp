#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace harvest {

// One WARC record: version line, header block, Content-Length framed payload.
struct WarcRecord {
    std::string version;  // "WARC/1.0" or "WARC/1.1"
    std::vector<std::pair<std::string, std::string>> headers;
    std::string payload;

    // Case-insensitive lookup; original casing is preserved in `headers`.
    const std::string* find_header(std::string_view name) const;
    std::string_view warc_type() const;

    friend bool operator==(const WarcRecord&, const WarcRecord&) = default;
};

struct WarcParseError : std::runtime_error {
    enum class Kind {
        bad_version,
        header_without_colon,
        missing_blank_line,
        missing_content_length,
        bad_content_length,
        truncated_payload,
        trailing_garbage,
    };

    WarcParseError(Kind kind, std::size_t offset, const std::string& what);

    Kind kind;
    std::size_t offset;  // byte offset of the offending element
};

// Splits headers and payload exactly at the double-CRLF boundary; the payload
// length comes from Content-Length. A trailing CRLF CRLF record delimiter is
// tolerated and excluded.
WarcRecord parse_warc(std::string_view bytes);

// Bit-exact framing: version line, "Name: value" CRLF header lines, blank
// line, payload, CRLF CRLF. Refuses records that violate the invariants
// (bad version, Content-Length mismatch, CR/LF inside headers).
std::string serialize_warc(const WarcRecord& record);

// Convenience constructor that fills in Content-Length.
WarcRecord make_warc_record(std::string_view warc_type,
                            std::vector<std::pair<std::string, std::string>> headers,
                            std::string payload,
                            std::string_view version = "WARC/1.0");

// The HTTP response message embedded in a response-type record.
struct HttpPayload {
    int status = 0;
    std::vector<std::pair<std::string, std::string>> headers;
    std::string body;
    std::string declared_charset;  // from Content-Type, lowercased; may be empty

    const std::string* find_header(std::string_view name) const;
};

struct HttpParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised for records whose WARC-Type is not "response".
struct NotAResponseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised for transfer/content codings we cannot decode; callers skip and count.
struct UnsupportedCodingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

HttpPayload extract_http(const WarcRecord& record);

struct DecodedText {
    std::string text;
    std::string charset;  // the charset actually applied
    enum class Source { header, meta, fallback } source = Source::fallback;
};

// Total decoding: declared charset, then HTML meta charset, then UTF-8 with
// replacement characters.
DecodedText decode_text(const HttpPayload& payload);

}  // namespace harvest
