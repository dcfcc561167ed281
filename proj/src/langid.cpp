#include "harvest/langid.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>

#include "harvest/hash128.hpp"
#include "harvest/unicode.hpp"

namespace harvest {
namespace {

constexpr char kMagic[4] = {'L', 'I', 'D', 'M'};
constexpr std::uint32_t kVersion = 1;

// Sparse L1-normalized counts of hashed byte n-grams, n = 1..3. The n-gram
// order is the hash seed so "ab" as a bigram never collides with "ab" as two
// unigrams by construction.
std::vector<std::pair<std::uint32_t, float>> featurize(std::string_view text,
                                                       std::uint32_t hash_bits) {
    const std::uint32_t mask = (1u << hash_bits) - 1;
    std::map<std::uint32_t, std::uint32_t> counts;
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        for (std::size_t n = 1; n <= 3 && i + n <= text.size(); ++n) {
            Hash128 h = hash128(text.data() + i, n, static_cast<std::uint64_t>(n));
            ++counts[static_cast<std::uint32_t>(h.lo) & mask];
            ++total;
        }
    }
    std::vector<std::pair<std::uint32_t, float>> features;
    features.reserve(counts.size());
    for (auto [key, count] : counts) {
        features.emplace_back(key, static_cast<float>(
                                       static_cast<double>(count) / static_cast<double>(total)));
    }
    return features;
}

std::string normalize_for_classify(std::string_view text) {
    return uni::collapse_to_single_spaces(text);
}

void write_u32(std::ofstream& out, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16),
                          static_cast<unsigned char>(v >> 24)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t read_u32(std::ifstream& in) {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    if (!in) throw std::runtime_error("language model file truncated");
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

}  // namespace

LangModel LangModel::train(const std::vector<std::pair<std::string, std::string>>& samples,
                           const LangTrainOptions& options) {
    if (options.hash_bits < 8 || options.hash_bits > 24) {
        throw std::invalid_argument("hash_bits out of range");
    }
    std::map<std::string, std::size_t> per_label;
    for (const auto& [text, label] : samples) ++per_label[label];
    if (per_label.size() < 2) {
        throw std::invalid_argument("training needs at least 2 labels, got " +
                                    std::to_string(per_label.size()));
    }
    for (const auto& [label, count] : per_label) {
        if (count < options.min_samples_per_label) {
            throw std::invalid_argument("label \"" + label + "\" has " +
                                        std::to_string(count) + " samples, need " +
                                        std::to_string(options.min_samples_per_label));
        }
    }

    LangModel model;
    model.hash_bits_ = options.hash_bits;
    for (const auto& [label, count] : per_label) model.labels_.push_back(label);

    const std::size_t n_labels = model.labels_.size();
    const std::size_t stride = (std::size_t{1} << model.hash_bits_) + 1;
    const std::size_t bias = stride - 1;
    model.weights_.assign(n_labels * stride, 0.0f);

    std::vector<std::vector<std::pair<std::uint32_t, float>>> features;
    std::vector<std::size_t> targets;
    features.reserve(samples.size());
    targets.reserve(samples.size());
    for (const auto& [text, label] : samples) {
        features.push_back(featurize(normalize_for_classify(text), model.hash_bits_));
        auto it = std::find(model.labels_.begin(), model.labels_.end(), label);
        targets.push_back(static_cast<std::size_t>(it - model.labels_.begin()));
    }

    std::vector<std::size_t> order(samples.size());
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(options.seed);

    std::vector<double> logits(n_labels);
    const std::uint64_t total_steps =
        static_cast<std::uint64_t>(options.epochs) * samples.size();
    std::uint64_t step = 0;
    for (int epoch = 0; epoch < options.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t idx : order) {
            const auto& fv = features[idx];
            for (std::size_t l = 0; l < n_labels; ++l) {
                double z = model.weights_[l * stride + bias];
                for (auto [f, v] : fv) z += static_cast<double>(model.weights_[l * stride + f]) * v;
                logits[l] = z;
            }
            double max_z = *std::max_element(logits.begin(), logits.end());
            double denom = 0;
            for (std::size_t l = 0; l < n_labels; ++l) {
                logits[l] = std::exp(logits[l] - max_z);
                denom += logits[l];
            }
            double lr = options.learning_rate *
                        (1.0 - static_cast<double>(step) / static_cast<double>(total_steps));
            ++step;
            for (std::size_t l = 0; l < n_labels; ++l) {
                double p = logits[l] / denom;
                double grad = p - (l == targets[idx] ? 1.0 : 0.0);
                if (grad == 0.0) continue;
                float* row = model.weights_.data() + l * stride;
                for (auto [f, v] : fv) {
                    row[f] = static_cast<float>(row[f] - lr * grad * v);
                }
                row[bias] = static_cast<float>(row[bias] - lr * grad);
            }
        }
    }
    return model;
}

LangVerdict LangModel::classify(std::string_view text) const {
    std::string normalized = normalize_for_classify(text);
    if (normalized.empty()) return {"und", 0.0};

    const std::size_t n_labels = labels_.size();
    const std::size_t stride = (std::size_t{1} << hash_bits_) + 1;
    const std::size_t bias = stride - 1;
    auto fv = featurize(normalized, hash_bits_);

    std::vector<double> logits(n_labels);
    for (std::size_t l = 0; l < n_labels; ++l) {
        double z = weights_[l * stride + bias];
        for (auto [f, v] : fv) z += static_cast<double>(weights_[l * stride + f]) * v;
        logits[l] = z;
    }
    std::size_t top = 0;
    for (std::size_t l = 1; l < n_labels; ++l) {
        if (logits[l] > logits[top]) top = l;
    }
    double denom = 0;
    for (std::size_t l = 0; l < n_labels; ++l) denom += std::exp(logits[l] - logits[top]);
    return {labels_[top], 1.0 / denom};
}

void LangModel::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write language model: " + path);
    out.write(kMagic, 4);
    write_u32(out, kVersion);
    write_u32(out, static_cast<std::uint32_t>(labels_.size()));
    for (const auto& label : labels_) {
        write_u32(out, static_cast<std::uint32_t>(label.size()));
        out.write(label.data(), static_cast<std::streamsize>(label.size()));
    }
    write_u32(out, hash_bits_);
    static_assert(sizeof(float) == 4);
    out.write(reinterpret_cast<const char*>(weights_.data()),
              static_cast<std::streamsize>(weights_.size() * sizeof(float)));
    if (!out) throw std::runtime_error("short write to language model: " + path);
}

LangModel LangModel::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open language model: " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0) {
        throw std::runtime_error("bad language model magic in " + path);
    }
    std::uint32_t version = read_u32(in);
    if (version != kVersion) {
        throw std::runtime_error("unsupported language model version " +
                                 std::to_string(version));
    }
    LangModel model;
    std::uint32_t n_labels = read_u32(in);
    if (n_labels < 2 || n_labels > 1000) {
        throw std::runtime_error("implausible label count in " + path);
    }
    for (std::uint32_t i = 0; i < n_labels; ++i) {
        std::uint32_t len = read_u32(in);
        if (len == 0 || len > 64) throw std::runtime_error("implausible label in " + path);
        std::string label(len, '\0');
        in.read(label.data(), len);
        if (!in) throw std::runtime_error("language model file truncated");
        model.labels_.push_back(std::move(label));
    }
    model.hash_bits_ = read_u32(in);
    if (model.hash_bits_ < 8 || model.hash_bits_ > 24) {
        throw std::runtime_error("implausible hash space in " + path);
    }
    std::size_t stride = (std::size_t{1} << model.hash_bits_) + 1;
    model.weights_.resize(static_cast<std::size_t>(n_labels) * stride);
    in.read(reinterpret_cast<char*>(model.weights_.data()),
            static_cast<std::streamsize>(model.weights_.size() * sizeof(float)));
    if (!in) throw std::runtime_error("language model file truncated");
    char extra;
    if (in.read(&extra, 1)) {
        throw std::runtime_error("trailing bytes after language model in " + path);
    }
    return model;
}

LangDecision filter_language(const Document& doc, const LangModel& model,
                             std::string_view target_label, double threshold) {
    std::string joined;
    for (const auto& line : doc.lines) {
        if (!joined.empty()) joined.push_back('\n');
        joined += line;
    }
    LangDecision decision;
    decision.verdict = model.classify(joined);
    decision.keep =
        decision.verdict.label == target_label && decision.verdict.score >= threshold;
    return decision;
}

std::vector<std::pair<std::string, std::string>> load_seed_dir(const std::string& dir) {
    namespace fs = std::filesystem;
    std::vector<std::pair<std::string, std::string>> samples;
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".txt") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    for (const auto& file : files) {
        std::string label = file.stem().string();
        std::ifstream in(file, std::ios::binary);
        if (!in) throw std::runtime_error("cannot open seed file: " + file.string());
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            std::string trimmed{uni::strip(line)};
            if (trimmed.empty()) continue;
            samples.emplace_back(std::move(trimmed), label);
        }
    }
    if (samples.empty()) throw std::runtime_error("no seed samples under " + dir);
    return samples;
}

}  // namespace harvest
