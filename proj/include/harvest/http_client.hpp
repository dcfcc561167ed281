#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace harvest {

struct HttpResponse {
    int status = 0;        // 0 means transport failure
    std::string body;
    std::string error;     // transport error description when status == 0

    bool ok() const { return status == 200 || status == 206; }
};

// Exponential backoff starting at initial_delay, doubling per attempt, with
// full jitter. The sleeper is injectable so tests run at full speed.
struct RetryPolicy {
    int max_attempts = 5;
    std::chrono::milliseconds initial_delay{1000};
    double factor = 2.0;
    std::function<void(std::chrono::milliseconds)> sleeper;  // default: real sleep

    std::chrono::milliseconds delay_for_attempt(int attempt, std::uint64_t jitter_bits) const;
};

using Header = std::pair<std::string, std::string>;

// Thin HTTP(S) client around a base URL. Each request opens its own
// connection, so one instance may be shared across threads.
class HttpClient {
  public:
    explicit HttpClient(std::string base_url);

    const std::string& base_url() const { return base_url_; }

    HttpResponse get(const std::string& path, const std::vector<Header>& headers = {}) const;

    // Retries transport failures and 5xx/429 responses per the policy;
    // returns the last response. attempts_out, when given, receives the
    // number of requests made.
    HttpResponse get_with_retry(const std::string& path, const std::vector<Header>& headers,
                                const RetryPolicy& policy, int* attempts_out = nullptr) const;

    static bool retryable(const HttpResponse& response);

  private:
    std::string base_url_;
};

}  // namespace harvest
