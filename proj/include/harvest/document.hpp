#pragma once

#include <string>
#include <vector>

namespace harvest {

// The unit flowing from extraction through dedup to the corpus writer.
struct Document {
    std::string id;  // digest + "/" + timestamp + "/" + url
    std::string url;
    std::string timestamp;  // 14-digit UTC
    std::vector<std::string> lines;  // non-empty, whitespace-normalized
    double lang_score = 0.0;

    bool operator==(const Document&) const = default;

    static std::string make_id(const std::string& digest, const std::string& timestamp,
                               const std::string& url) {
        return digest + "/" + timestamp + "/" + url;
    }
};

}  // namespace harvest
