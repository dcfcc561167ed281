#include <chrono>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "doctest.h"

#include "harvest/http_client.hpp"
#include "test_support.hpp"

using namespace harvest;
using std::chrono::milliseconds;

namespace {

// Policy that records would-be sleeps instead of sleeping.
RetryPolicy instant_policy(std::vector<milliseconds>* delays, int max_attempts = 5) {
    RetryPolicy policy;
    policy.max_attempts = max_attempts;
    policy.sleeper = [delays](milliseconds d) {
        if (delays) delays->push_back(d);
    };
    return policy;
}

}  // namespace

TEST_CASE("backoff delay: full jitter over a doubling cap") {
    RetryPolicy policy;  // 1000 ms, factor 2
    const std::uint64_t max_bits = ~std::uint64_t{0};

    // jitter_bits = 0 -> no delay; all-ones -> one below the cap (53-bit unit).
    CHECK(policy.delay_for_attempt(0, 0) == milliseconds(0));
    CHECK(policy.delay_for_attempt(0, max_bits) == milliseconds(999));
    CHECK(policy.delay_for_attempt(1, max_bits) == milliseconds(1999));
    CHECK(policy.delay_for_attempt(4, max_bits) == milliseconds(15999));
    // a half-scale mantissa picks the middle of the window
    CHECK(policy.delay_for_attempt(2, std::uint64_t{1} << 63) == milliseconds(2000));

    std::mt19937_64 rng(7);
    for (int attempt = 0; attempt < 5; ++attempt) {
        double cap = 1000.0 * std::pow(2.0, attempt);
        for (int trial = 0; trial < 200; ++trial) {
            auto d = policy.delay_for_attempt(attempt, rng());
            CHECK(d.count() >= 0);
            CHECK(static_cast<double>(d.count()) <= cap);
        }
    }
}

TEST_CASE("retryable covers transport, 5xx and 429 only") {
    auto with_status = [](int s) {
        HttpResponse r;
        r.status = s;
        return r;
    };
    CHECK(HttpClient::retryable(with_status(0)));
    CHECK(HttpClient::retryable(with_status(500)));
    CHECK(HttpClient::retryable(with_status(503)));
    CHECK(HttpClient::retryable(with_status(429)));
    CHECK_FALSE(HttpClient::retryable(with_status(200)));
    CHECK_FALSE(HttpClient::retryable(with_status(206)));
    CHECK_FALSE(HttpClient::retryable(with_status(301)));
    CHECK_FALSE(HttpClient::retryable(with_status(404)));
}

TEST_CASE("plain get returns body and status") {
    testsup::MockServer server;
    server.add_file("d/x.bin", "payload-bytes");
    HttpClient client(server.base_url());

    HttpResponse ok = client.get("/d/x.bin");
    CHECK(ok.status == 200);
    CHECK(ok.body == "payload-bytes");

    HttpResponse missing = client.get("/d/other.bin");
    CHECK(missing.status == 404);

    HttpResponse range = client.get("/d/x.bin", {{"Range", "bytes=0-6"}});
    CHECK(range.status == 206);
    CHECK(range.body == "payload");
}

TEST_CASE("retry recovers after transient 5xx") {
    testsup::MockServer server;
    server.add_file("d/x.bin", "payload");
    server.fail_next("d/x.bin", 2, 500);

    std::vector<milliseconds> delays;
    HttpClient client(server.base_url());
    int attempts = 0;
    HttpResponse r = client.get_with_retry("/d/x.bin", {}, instant_policy(&delays), &attempts);
    CHECK(r.status == 200);
    CHECK(r.body == "payload");
    CHECK(attempts == 3);
    REQUIRE(delays.size() == 2);  // one sleep between each pair of attempts
    CHECK(delays[0].count() <= 1000);
    CHECK(delays[1].count() <= 2000);
    CHECK(server.request_count() == 3);
}

TEST_CASE("persistent failure stops at max_attempts and keeps the last answer") {
    testsup::MockServer server;
    server.add_file("d/x.bin", "payload");
    server.fail_next("d/x.bin", 99, 503);

    std::vector<milliseconds> delays;
    HttpClient client(server.base_url());
    int attempts = 0;
    HttpResponse r = client.get_with_retry("/d/x.bin", {}, instant_policy(&delays), &attempts);
    CHECK(r.status == 503);
    CHECK(attempts == 5);
    CHECK(delays.size() == 4);
    CHECK(server.request_count() == 5);
}

TEST_CASE("4xx answers are not retried") {
    testsup::MockServer server;
    HttpClient client(server.base_url());
    int attempts = 0;
    HttpResponse r = client.get_with_retry("/absent", {}, instant_policy(nullptr), &attempts);
    CHECK(r.status == 404);
    CHECK(attempts == 1);
}

TEST_CASE("429 is retried like a 5xx") {
    testsup::MockServer server;
    server.add_file("d/x.bin", "ok");
    server.fail_next("d/x.bin", 1, 429);
    HttpClient client(server.base_url());
    int attempts = 0;
    HttpResponse r = client.get_with_retry("/d/x.bin", {}, instant_policy(nullptr), &attempts);
    CHECK(r.status == 200);
    CHECK(attempts == 2);
}

TEST_CASE("transport failures are retried and reported") {
    // A raw server that closes the connection without answering produces a
    // transport-level failure (status 0) rather than an HTTP status.
    HttpClient client("http://127.0.0.1:9");  // discard port: connection refused
    int attempts = 0;
    HttpResponse r =
        client.get_with_retry("/x", {}, instant_policy(nullptr, /*max_attempts=*/3), &attempts);
    CHECK(r.status == 0);
    CHECK_FALSE(r.error.empty());
    CHECK(attempts == 3);
}
