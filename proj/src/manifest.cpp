#include "harvest/manifest.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace harvest {

ManifestWriter::ManifestWriter(std::string path) : path_(std::move(path)) {
    namespace fs = std::filesystem;
    std::error_code ec;
    auto size = fs::file_size(path_, ec);
    if (!ec && size > 0) {
        std::ifstream in(path_, std::ios::binary);
        in.seekg(-1, std::ios::end);
        char last = '\0';
        in.read(&last, 1);
        if (last != '\n') {
            std::ofstream out(path_, std::ios::binary | std::ios::app);
            out.put('\n');
        }
    }
}

void ManifestWriter::append(const std::string& type, nlohmann::json data) {
    data["event"] = type;
    std::ofstream out(path_, std::ios::binary | std::ios::app);
    if (!out) throw std::runtime_error("cannot append to manifest: " + path_);
    out << data.dump() << '\n';
    out.flush();
    if (!out) throw std::runtime_error("short write to manifest: " + path_);
}

ManifestReadResult read_manifest(const std::string& path) {
    ManifestReadResult result;
    std::ifstream in(path, std::ios::binary);
    if (!in) return result;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        nlohmann::json event = nlohmann::json::parse(line, nullptr, false);
        if (event.is_discarded() || !event.is_object() || !event.contains("event")) {
            ++result.skipped_lines;
            continue;
        }
        result.events.push_back(std::move(event));
    }
    return result;
}

std::string hash_hex(const Hash128& h) {
    char buf[33];
    std::snprintf(buf, sizeof(buf), "%016llx%016llx",
                  static_cast<unsigned long long>(h.lo),
                  static_cast<unsigned long long>(h.hi));
    return buf;
}

Hash128 file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read file for digest: " + path);
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return hash128(bytes);
}

}  // namespace harvest
