#include "harvest/dedup.hpp"

#include <algorithm>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "harvest/bytesio.hpp"

namespace harvest {
namespace {

using bytesio::get_u64;
using bytesio::put_u32;
using bytesio::put_u64;

constexpr char kMagic[4] = {'D', 'D', 'U', 'P'};
constexpr std::uint32_t kVersion = 1;
constexpr char kWindowSeparator = '\x1e';

std::vector<Hash128> sorted_hashes(const std::unordered_set<Hash128, Hash128Hasher>& set) {
    std::vector<Hash128> hashes(set.begin(), set.end());
    std::sort(hashes.begin(), hashes.end());
    return hashes;
}

}  // namespace

std::string DedupState::serialize() const {
    std::string out;
    out.reserve(4 + 4 + 16 + 16 * (doc_hashes.size() + window_hashes.size()) + 7 * 8 + 8);
    out.append(kMagic, 4);
    put_u32(out, kVersion);
    for (const auto* set : {&doc_hashes, &window_hashes}) {
        put_u64(out, set->size());
        for (const Hash128& h : sorted_hashes(*set)) {
            put_u64(out, h.lo);
            put_u64(out, h.hi);
        }
    }
    put_u64(out, counters.docs_seen);
    put_u64(out, counters.docs_kept);
    put_u64(out, counters.docs_dropped_exact);
    put_u64(out, counters.docs_dropped_window);
    put_u64(out, counters.lines_seen);
    put_u64(out, counters.lines_kept);
    put_u64(out, counters.lines_dropped);
    put_u64(out, hash128(out.data(), out.size()).lo);
    return out;
}

DedupState DedupState::deserialize(std::string_view bytes) {
    auto fail = [](const std::string& why) -> DedupState {
        throw std::runtime_error("dedup state corrupt: " + why);
    };
    if (bytes.size() < 4 + 4 + 8 + 8 + 7 * 8 + 8) return fail("file too short");
    if (std::memcmp(bytes.data(), kMagic, 4) != 0) return fail("bad magic");
    std::uint32_t version = 0;
    std::memcpy(&version, bytes.data() + 4, 4);
    if (version != kVersion) return fail("unsupported version " + std::to_string(version));

    std::uint64_t checksum = get_u64(bytes, bytes.size() - 8);
    if (hash128(bytes.data(), bytes.size() - 8).lo != checksum) {
        return fail("checksum mismatch");
    }

    DedupState state;
    std::size_t pos = 8;
    for (auto* set : {&state.doc_hashes, &state.window_hashes}) {
        if (pos + 8 > bytes.size()) return fail("truncated hash count");
        std::uint64_t count = get_u64(bytes, pos);
        pos += 8;
        if (count > (bytes.size() - pos) / 16) return fail("hash count exceeds file size");
        set->reserve(static_cast<std::size_t>(count));
        for (std::uint64_t i = 0; i < count; ++i) {
            Hash128 h{get_u64(bytes, pos), get_u64(bytes, pos + 8)};
            pos += 16;
            set->insert(h);
        }
        if (set->size() != count) return fail("duplicate hashes in array");
    }
    if (pos + 7 * 8 + 8 != bytes.size()) return fail("unexpected trailing bytes");
    state.counters.docs_seen = get_u64(bytes, pos);
    state.counters.docs_kept = get_u64(bytes, pos + 8);
    state.counters.docs_dropped_exact = get_u64(bytes, pos + 16);
    state.counters.docs_dropped_window = get_u64(bytes, pos + 24);
    state.counters.lines_seen = get_u64(bytes, pos + 32);
    state.counters.lines_kept = get_u64(bytes, pos + 40);
    state.counters.lines_dropped = get_u64(bytes, pos + 48);
    return state;
}

void DedupState::save(const std::string& path) const {
    std::string bytes = serialize();
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write dedup state: " + tmp);
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw std::runtime_error("short write to dedup state: " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

DedupState DedupState::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open dedup state: " + path);
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return deserialize(bytes);
}

Hash128 doc_hash(const Document& doc) {
    std::string joined;
    for (const auto& line : doc.lines) {
        if (!joined.empty()) joined.push_back('\n');
        joined += line;
    }
    return hash128(joined);
}

std::vector<std::pair<std::size_t, Hash128>> window_hashes(
    const std::vector<std::string>& lines) {
    std::vector<std::pair<std::size_t, Hash128>> hashes;
    if (lines.size() < 3) return hashes;
    hashes.reserve(lines.size() - 2);
    for (std::size_t i = 0; i + 3 <= lines.size(); ++i) {
        std::string window;
        window.reserve(lines[i].size() + lines[i + 1].size() + lines[i + 2].size() + 2);
        window += lines[i];
        window.push_back(kWindowSeparator);
        window += lines[i + 1];
        window.push_back(kWindowSeparator);
        window += lines[i + 2];
        hashes.emplace_back(i, hash128(window));
    }
    return hashes;
}

bool dedup_document_exact(const Document& doc, DedupState& state) {
    ++state.counters.docs_seen;
    state.counters.lines_seen += doc.lines.size();
    if (!state.doc_hashes.insert(doc_hash(doc)).second) {
        ++state.counters.docs_dropped_exact;
        state.counters.lines_dropped += doc.lines.size();
        return false;
    }
    return true;
}

std::optional<Document> dedup_windows(Document doc, DedupState& state) {
    std::vector<bool> discard(doc.lines.size(), false);
    for (const auto& [index, hash] : window_hashes(doc.lines)) {
        if (state.window_hashes.count(hash) > 0) {
            discard[index] = discard[index + 1] = discard[index + 2] = true;
        } else {
            state.window_hashes.insert(hash);
        }
    }
    std::vector<std::string> kept;
    kept.reserve(doc.lines.size());
    for (std::size_t i = 0; i < doc.lines.size(); ++i) {
        if (!discard[i]) kept.push_back(std::move(doc.lines[i]));
    }
    state.counters.lines_kept += kept.size();
    state.counters.lines_dropped += doc.lines.size() - kept.size();
    if (kept.empty()) {
        ++state.counters.docs_dropped_window;
        return std::nullopt;
    }
    ++state.counters.docs_kept;
    doc.lines = std::move(kept);
    return doc;
}

std::optional<Document> dedup_apply(Document doc, DedupState& state) {
    if (!dedup_document_exact(doc, state)) return std::nullopt;
    return dedup_windows(std::move(doc), state);
}

std::vector<Document> dedup_documents(std::vector<Document> docs, DedupState& state) {
    std::vector<Document> kept;
    kept.reserve(docs.size());
    for (auto& doc : docs) {
        if (dedup_document_exact(doc, state)) kept.push_back(std::move(doc));
    }
    return kept;
}

}  // namespace harvest
