#include <random>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "doctest.h"

#include "harvest/langid.hpp"
#include "test_support.hpp"

using namespace harvest;

namespace {

using Samples = std::vector<std::pair<std::string, std::string>>;

const Samples& seed_samples() {
    static Samples samples = load_seed_dir(TEST_SOURCE_ROOT "/data/seed");
    return samples;
}

// Every 5th sample per label held out; the rest trains.
void split_samples(Samples& train, Samples& heldout) {
    std::unordered_map<std::string, int> counters;
    for (const auto& sample : seed_samples()) {
        if (counters[sample.second]++ % 5 == 4) {
            heldout.push_back(sample);
        } else {
            train.push_back(sample);
        }
    }
}

const LangModel& trained_model() {
    static LangModel model = [] {
        Samples train, heldout;
        split_samples(train, heldout);
        return LangModel::train(train);
    }();
    return model;
}

Document doc_with_lines(std::vector<std::string> lines) {
    Document doc;
    doc.id = "x/20200101000000/http://x.is/";
    doc.url = "http://x.is/";
    doc.timestamp = "20200101000000";
    doc.lines = std::move(lines);
    return doc;
}

}  // namespace

TEST_CASE("held-out accuracy of the bundled seed model is at least 95%") {
    Samples train, heldout;
    split_samples(train, heldout);
    REQUIRE(heldout.size() >= 100);

    const LangModel& model = trained_model();
    CHECK(model.labels() == std::vector<std::string>{"da", "en", "is"});

    std::size_t correct = 0;
    for (const auto& [text, label] : heldout) {
        if (model.classify(text).label == label) ++correct;
    }
    double accuracy = static_cast<double>(correct) / static_cast<double>(heldout.size());
    MESSAGE("held-out accuracy: ", accuracy, " on ", heldout.size(), " samples");
    CHECK(accuracy >= 0.95);
}

TEST_CASE("representative sentences classify as expected") {
    const LangModel& model = trained_model();
    CHECK(model.classify("Þetta er íslenskur texti um veðrið.").label == "is");
    CHECK(model.classify("The quick brown fox jumps over the lazy dog.").label == "en");

    LangVerdict is = model.classify("Þetta er íslenskur texti um veðrið.");
    CHECK(is.score > 0.0);
    CHECK(is.score <= 1.0);
}

TEST_CASE("empty and whitespace-only text yields the sentinel") {
    const LangModel& model = trained_model();
    CHECK(model.classify("").label == "und");
    CHECK(model.classify("").score == 0.0);
    CHECK(model.classify("  \t \n ").label == "und");
}

TEST_CASE("classification is deterministic") {
    const LangModel& model = trained_model();
    const std::string text = "Bóndinn keypti bókina í gær og las hana um kvöldið.";
    LangVerdict first = model.classify(text);
    for (int i = 0; i < 10; ++i) {
        LangVerdict again = model.classify(text);
        CHECK(again.label == first.label);
        CHECK(again.score == first.score);
    }
}

TEST_CASE("training is deterministic: byte-identical model files") {
    Samples train, heldout;
    split_samples(train, heldout);

    testsup::TempDir dir;
    LangTrainOptions options;
    options.epochs = 4;  // enough for the determinism claim, fast
    LangModel a = LangModel::train(train, options);
    LangModel b = LangModel::train(train, options);
    CHECK(a == b);
    a.save(dir.sub("a.lidm"));
    b.save(dir.sub("b.lidm"));
    CHECK(testsup::read_file(dir.sub("a.lidm")) == testsup::read_file(dir.sub("b.lidm")));

    // a different seed must not produce the identical byte stream
    options.seed = 2;
    LangModel c = LangModel::train(train, options);
    c.save(dir.sub("c.lidm"));
    CHECK(testsup::read_file(dir.sub("a.lidm")) != testsup::read_file(dir.sub("c.lidm")));
}

TEST_CASE("model files round-trip") {
    testsup::TempDir dir;
    const LangModel& model = trained_model();
    model.save(dir.sub("m.lidm"));
    LangModel back = LangModel::load(dir.sub("m.lidm"));
    CHECK(back == model);
    CHECK(back.classify("Þetta er íslenskur texti.").label ==
          model.classify("Þetta er íslenskur texti.").label);
}

TEST_CASE("model loading refuses corrupt files") {
    testsup::TempDir dir;
    const LangModel& model = trained_model();
    model.save(dir.sub("m.lidm"));
    std::string bytes = testsup::read_file(dir.sub("m.lidm"));

    testsup::write_file(dir.sub("magic.lidm"), "XXXX" + bytes.substr(4));
    CHECK_THROWS_WITH_AS(LangModel::load(dir.sub("magic.lidm")),
                         doctest::Contains("magic"), std::runtime_error);

    testsup::write_file(dir.sub("trunc.lidm"), bytes.substr(0, bytes.size() / 2));
    CHECK_THROWS_AS(LangModel::load(dir.sub("trunc.lidm")), std::runtime_error);

    testsup::write_file(dir.sub("trail.lidm"), bytes + "x");
    CHECK_THROWS_WITH_AS(LangModel::load(dir.sub("trail.lidm")),
                         doctest::Contains("trailing"), std::runtime_error);

    CHECK_THROWS_AS(LangModel::load(dir.sub("absent.lidm")), std::runtime_error);
}

TEST_CASE("training preconditions") {
    Samples single;
    for (int i = 0; i < 150; ++i) single.emplace_back("texti numer " + std::to_string(i), "is");
    CHECK_THROWS_AS(LangModel::train(single), std::invalid_argument);

    Samples sparse = single;
    for (int i = 0; i < 3; ++i) sparse.emplace_back("some english", "en");
    CHECK_THROWS_AS(LangModel::train(sparse), std::invalid_argument);

    LangTrainOptions options;
    options.hash_bits = 40;
    Samples train, heldout;
    split_samples(train, heldout);
    CHECK_THROWS_AS(LangModel::train(train, options), std::invalid_argument);
}

TEST_CASE("document filtering: keep Icelandic, drop English") {
    const LangModel& model = trained_model();
    Document is_doc = doc_with_lines({"Bóndinn keypti bókina í gær.",
                                      "Kennarinn las blaðið um kvöldið og söng."});
    Document en_doc = doc_with_lines({"The farmer bought the book yesterday.",
                                      "The teacher read the newspaper in the evening."});

    LangDecision keep = filter_language(is_doc, model, "is", 0.8);
    CHECK(keep.keep);
    CHECK(keep.verdict.label == "is");
    CHECK(keep.verdict.score >= 0.8);

    LangDecision drop = filter_language(en_doc, model, "is", 0.8);
    CHECK_FALSE(drop.keep);

    // threshold 0 keeps anything whose top label matches
    CHECK(filter_language(is_doc, model, "is", 0.0).keep);
    CHECK_FALSE(filter_language(en_doc, model, "is", 0.0).keep);
}

TEST_CASE("threshold monotonicity on 1000 random probes") {
    const LangModel& model = trained_model();
    std::mt19937_64 rng(909);
    const Samples& samples = seed_samples();
    std::uniform_int_distribution<std::size_t> pick(0, samples.size() - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    for (int probe = 0; probe < 1000; ++probe) {
        // random 1-3 sentence document, possibly mixed-language
        std::vector<std::string> lines;
        std::uniform_int_distribution<int> nlines(1, 3);
        int n = nlines(rng);
        for (int i = 0; i < n; ++i) lines.push_back(samples[pick(rng)].first);
        Document doc = doc_with_lines(std::move(lines));

        double t1 = unit(rng), t2 = unit(rng);
        if (t1 > t2) std::swap(t1, t2);
        bool keep_low = filter_language(doc, model, "is", t1).keep;
        bool keep_high = filter_language(doc, model, "is", t2).keep;
        // raising the threshold never turns a drop into a keep
        if (keep_high) CHECK(keep_low);
    }
}

TEST_CASE("seed directory loading") {
    const Samples& samples = seed_samples();
    CHECK(samples.size() == 3 * 260);
    std::unordered_map<std::string, int> by_label;
    for (const auto& s : samples) {
        ++by_label[s.second];
        CHECK_FALSE(s.first.empty());
    }
    CHECK(by_label.size() == 3);
    CHECK(by_label["is"] == 260);
    CHECK(by_label["en"] == 260);
    CHECK(by_label["da"] == 260);

    CHECK_THROWS_AS(load_seed_dir(TEST_SOURCE_ROOT "/data/no-such-dir"),
                    std::runtime_error);
}
