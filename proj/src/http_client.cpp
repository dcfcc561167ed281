#include "harvest/http_client.hpp"

#include <random>
#include <thread>

#include "httplib.h"

namespace harvest {

std::chrono::milliseconds RetryPolicy::delay_for_attempt(int attempt,
                                                         std::uint64_t jitter_bits) const {
    double cap = static_cast<double>(initial_delay.count());
    for (int i = 0; i < attempt; ++i) cap *= factor;
    // Full jitter: uniform in [0, cap].
    double unit = static_cast<double>(jitter_bits >> 11) * 0x1.0p-53;
    return std::chrono::milliseconds(static_cast<std::int64_t>(cap * unit));
}

HttpClient::HttpClient(std::string base_url) : base_url_(std::move(base_url)) {}

HttpResponse HttpClient::get(const std::string& path, const std::vector<Header>& headers) const {
    httplib::Client client(base_url_);
    client.set_connection_timeout(30, 0);
    client.set_read_timeout(60, 0);
    client.set_follow_location(true);

    httplib::Headers hl;
    for (const auto& [name, value] : headers) hl.emplace(name, value);

    auto result = client.Get(path, hl);
    HttpResponse response;
    if (!result) {
        response.status = 0;
        response.error = httplib::to_string(result.error());
        return response;
    }
    response.status = result->status;
    response.body = std::move(result->body);
    return response;
}

bool HttpClient::retryable(const HttpResponse& response) {
    if (response.status == 0) return true;
    if (response.status >= 500) return true;
    if (response.status == 429) return true;
    return false;
}

HttpResponse HttpClient::get_with_retry(const std::string& path,
                                        const std::vector<Header>& headers,
                                        const RetryPolicy& policy, int* attempts_out) const {
    std::mt19937_64 rng(std::random_device{}());
    HttpResponse response;
    int attempt = 0;
    for (;;) {
        response = get(path, headers);
        ++attempt;
        if (!retryable(response) || attempt >= policy.max_attempts) break;
        auto delay = policy.delay_for_attempt(attempt - 1, rng());
        if (policy.sleeper) {
            policy.sleeper(delay);
        } else {
            std::this_thread::sleep_for(delay);
        }
    }
    if (attempts_out) *attempts_out = attempt;
    return response;
}

}  // namespace harvest
