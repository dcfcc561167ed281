#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "harvest/document.hpp"

namespace harvest {

struct LangVerdict {
    std::string label;
    double score = 0.0;  // softmax probability of the top label
};

struct LangTrainOptions {
    std::uint32_t hash_bits = 16;  // feature space 2^hash_bits per the model
    // Long schedule on purpose: document-level filtering needs well-separated
    // softmax scores, not just the right argmax.
    int epochs = 100;
    double learning_rate = 2.0;  // linearly decayed to 0
    std::uint64_t seed = 1;
    std::size_t min_samples_per_label = 100;
};

// Multinomial logistic regression over hashed byte n-grams (n = 1..3).
// Training is single-threaded on purpose: byte-identical model files for a
// fixed seed are part of the contract.
class LangModel {
  public:
    static LangModel train(const std::vector<std::pair<std::string, std::string>>& samples,
                           const LangTrainOptions& options = {});

    // Pure and total: empty (after whitespace trimming) text yields
    // ("und", 0) without touching the weights.
    LangVerdict classify(std::string_view text) const;

    void save(const std::string& path) const;
    static LangModel load(const std::string& path);

    const std::vector<std::string>& labels() const { return labels_; }
    std::uint32_t hash_bits() const { return hash_bits_; }

    bool operator==(const LangModel&) const = default;

  private:
    std::vector<std::string> labels_;
    std::uint32_t hash_bits_ = 16;
    std::vector<float> weights_;  // labels × (2^hash_bits + 1), bias last
};

struct LangDecision {
    bool keep = false;
    LangVerdict verdict;
};

// Document-level decision on the newline-joined lines. Monotone in
// threshold: raising it never turns a drop into a keep.
LangDecision filter_language(const Document& doc, const LangModel& model,
                             std::string_view target_label, double threshold);

// Seed-data layout: <dir>/<label>.txt, UTF-8, one sample per non-empty line.
std::vector<std::pair<std::string, std::string>> load_seed_dir(const std::string& dir);

}  // namespace harvest
