#include "harvest/gzip.hpp"

#include <zlib.h>

#include <cstring>

namespace harvest {

std::string gzip_compress(std::string_view data) {
    z_stream strm;
    std::memset(&strm, 0, sizeof(strm));
    // 15+16 selects the gzip wrapper
    if (deflateInit2(&strm, 6, Z_DEFLATED, 15 + 16, 8, Z_DEFAULT_STRATEGY) != Z_OK) {
        throw GzipError("deflateInit2 failed");
    }
    gz_header header;
    std::memset(&header, 0, sizeof(header));
    header.os = 255;  // unknown OS, keeps output platform-independent
    deflateSetHeader(&strm, &header);

    std::string out;
    out.resize(deflateBound(&strm, static_cast<uLong>(data.size())));
    strm.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
    strm.avail_in = static_cast<uInt>(data.size());
    strm.next_out = reinterpret_cast<Bytef*>(out.data());
    strm.avail_out = static_cast<uInt>(out.size());

    int rc = deflate(&strm, Z_FINISH);
    if (rc != Z_STREAM_END) {
        deflateEnd(&strm);
        throw GzipError("deflate failed: " + std::to_string(rc));
    }
    out.resize(strm.total_out);
    deflateEnd(&strm);
    return out;
}

std::string gzip_decompress_member(std::string_view data) {
    z_stream strm;
    std::memset(&strm, 0, sizeof(strm));
    if (inflateInit2(&strm, 15 + 16) != Z_OK) {
        throw GzipError("inflateInit2 failed");
    }

    std::string out;
    char buf[1 << 15];
    strm.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
    strm.avail_in = static_cast<uInt>(data.size());

    int rc = Z_OK;
    while (rc != Z_STREAM_END) {
        strm.next_out = reinterpret_cast<Bytef*>(buf);
        strm.avail_out = sizeof(buf);
        rc = inflate(&strm, Z_NO_FLUSH);
        if (rc != Z_OK && rc != Z_STREAM_END && rc != Z_BUF_ERROR) {
            inflateEnd(&strm);
            throw GzipError(std::string("corrupt gzip data: ") +
                            (strm.msg ? strm.msg : "inflate error"));
        }
        out.append(buf, sizeof(buf) - strm.avail_out);
        if (rc == Z_BUF_ERROR || (rc == Z_OK && strm.avail_in == 0 && strm.avail_out != 0)) {
            inflateEnd(&strm);
            throw GzipError("truncated gzip member");
        }
    }
    bool trailing = strm.avail_in != 0;
    inflateEnd(&strm);
    if (trailing) {
        throw GzipError("trailing bytes after gzip member");
    }
    return out;
}

}  // namespace harvest
