#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

#include "harvest/boilerplate.hpp"

using namespace harvest;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE_MESSAGE(in.good(), "cannot open " << path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

}  // namespace

// Frozen 50-page corpus with per-block verdicts from an independent reference
// implementation of the same published classification algorithm (generated by
// scripts/gen_boilerplate_oracle.py). The corpus gate is >= 99% block-level
// agreement at default parameters; the per-block checks are stricter and pin
// segmentation and entity decoding as well.
TEST_CASE("block classification agrees with the frozen oracle corpus") {
    const std::string root =
        std::string(TEST_SOURCE_ROOT) + "/tests/data/boilerplate_oracle";
    const nlohmann::json oracle = nlohmann::json::parse(slurp(root + "/verdicts.json"));
    const StopwordList stopwords = StopwordList::load(root + "/stopwords.txt", "is");

    // The corpus is frozen at the default parameters.
    const BoilerplateParams params;
    const auto& frozen = oracle.at("params");
    REQUIRE_EQ(params.max_link_density, frozen.at("max_link_density").get<double>());
    REQUIRE_EQ(params.length_low, frozen.at("length_low").get<std::size_t>());
    REQUIRE_EQ(params.length_high, frozen.at("length_high").get<std::size_t>());
    REQUIRE_EQ(params.stopwords_low, frozen.at("stopwords_low").get<double>());
    REQUIRE_EQ(params.stopwords_high, frozen.at("stopwords_high").get<double>());
    REQUIRE_EQ(params.max_heading_distance,
               frozen.at("max_heading_distance").get<std::size_t>());

    std::size_t total = 0;
    std::size_t cf_agree = 0;
    std::size_t final_agree = 0;
    for (const auto& page : oracle.at("pages")) {
        const std::string file = page.at("file").get<std::string>();
        CAPTURE(file);
        const std::vector<Block> blocks = analyze(slurp(root + "/" + file), params, stopwords);
        const auto& expected = page.at("blocks");

        CHECK_EQ(blocks.size(), expected.size());
        const std::size_t n = std::min(blocks.size(), expected.size());
        total += std::max(blocks.size(), expected.size());
        for (std::size_t i = 0; i < n; ++i) {
            CAPTURE(i);
            const auto& want = expected[i];
            CHECK_EQ(blocks[i].text, want.at("text").get<std::string>());
            CHECK_EQ(blocks[i].char_count, want.at("chars").get<std::size_t>());
            CHECK_EQ(blocks[i].word_count, want.at("words").get<std::size_t>());
            CHECK_EQ(blocks[i].link_chars, want.at("link_chars").get<std::size_t>());
            if (to_string(blocks[i].cf_class) == want.at("cf").get<std::string>()) ++cf_agree;
            if (to_string(blocks[i].final_class) == want.at("final").get<std::string>()) {
                ++final_agree;
            }
        }
    }

    REQUIRE_GE(total, 300);  // the gate is meaningless on a thin corpus
    const double cf_ratio = static_cast<double>(cf_agree) / static_cast<double>(total);
    const double final_ratio = static_cast<double>(final_agree) / static_cast<double>(total);
    MESSAGE("blocks " << total << ", context-free agreement " << cf_ratio
                      << ", final agreement " << final_ratio);
    CHECK_GE(cf_ratio, 0.99);
    CHECK_GE(final_ratio, 0.99);
}
