#include "test_support.hpp"

#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <memory>

#include "httplib.h"
#include "json.hpp"

namespace testsup {

TempDir::TempDir() {
    static std::atomic<int> counter{0};
    std::random_device rd;
    path = std::filesystem::temp_directory_path() /
           ("harvest_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter++) + "_" + std::to_string(rd()));
    std::filesystem::create_directories(path);
}

TempDir::~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    return std::string((std::istreambuf_iterator<char>(in)),
                       std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, std::string_view bytes) {
    std::filesystem::create_directories(std::filesystem::path(path).parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("cannot write " + path);
}

MockServer::MockServer() : server_(std::make_unique<httplib::Server>()) {
    auto maybe_fail = [this](const httplib::Request& req, httplib::Response& res) {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = failures_.find(req.path);
        if (it == failures_.end() || it->second.first <= 0) return false;
        --it->second.first;
        res.status = it->second.second;
        return true;
    };

    server_->Get("/collinfo.json", [this, maybe_fail](const httplib::Request& req,
                                                      httplib::Response& res) {
        ++request_count_;
        if (maybe_fail(req, res)) return;
        std::lock_guard<std::mutex> lock(mutex_);
        res.set_content(collinfo_, "application/json");
    });

    server_->Get(R"(/(CC-MAIN-\d{4}-\d{2})-index)", [this, maybe_fail](
                                                        const httplib::Request& req,
                                                        httplib::Response& res) {
        ++request_count_;
        if (maybe_fail(req, res)) return;
        std::string crawl = req.matches[1];
        std::lock_guard<std::mutex> lock(mutex_);
        last_index_query_ = req.target;
        if (req.has_param("showNumPages")) {
            std::uint64_t pages = 0;
            if (auto it = page_counts_.find(crawl); it != page_counts_.end()) {
                pages = it->second;
            } else {
                for (const auto& [key, body] : index_pages_) {
                    if (key.first == crawl) {
                        pages = std::max(pages, static_cast<std::uint64_t>(key.second) + 1);
                    }
                }
            }
            res.set_content(nlohmann::json{{"pages", pages}}.dump(), "application/json");
            return;
        }
        int page = 0;
        if (req.has_param("page")) page = std::stoi(req.get_param_value("page"));
        auto it = index_pages_.find({crawl, page});
        if (it == index_pages_.end()) {
            res.status = 404;
            return;
        }
        res.set_content(it->second, "text/plain");
    });

    // Everything else is the data store.
    server_->Get(R"(/.*)", [this, maybe_fail](const httplib::Request& req,
                                              httplib::Response& res) {
        ++request_count_;
        if (maybe_fail(req, res)) return;
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = files_.find(req.path);
        if (it == files_.end()) {
            res.status = 404;
            return;
        }
        // httplib turns Range requests on this content into 206 slices.
        res.set_content(it->second, "application/octet-stream");
    });

    port_ = server_->bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_->listen_after_bind(); });
    while (!server_->is_running()) {
        std::this_thread::sleep_for(std::chrono::milliseconds(1));
    }
}

MockServer::~MockServer() {
    server_->stop();
    if (thread_.joinable()) thread_.join();
}

std::string MockServer::base_url() const {
    return "http://127.0.0.1:" + std::to_string(port_);
}

void MockServer::set_collinfo(const std::vector<std::string>& crawl_ids) {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& id : crawl_ids) {
        list.push_back({{"id", id},
                        {"name", id},
                        {"cdx-api", base_url() + "/" + id + "-index"}});
    }
    std::lock_guard<std::mutex> lock(mutex_);
    collinfo_ = list.dump();
}

void MockServer::set_index_page(const std::string& crawl, int page, std::string body) {
    std::lock_guard<std::mutex> lock(mutex_);
    index_pages_[{crawl, page}] = std::move(body);
}

void MockServer::set_page_count(const std::string& crawl, std::uint64_t pages) {
    std::lock_guard<std::mutex> lock(mutex_);
    page_counts_[crawl] = pages;
}

void MockServer::add_file(const std::string& path, std::string bytes) {
    std::lock_guard<std::mutex> lock(mutex_);
    files_[path.front() == '/' ? path : "/" + path] = std::move(bytes);
}

void MockServer::fail_next(const std::string& path, int times, int status) {
    std::lock_guard<std::mutex> lock(mutex_);
    failures_[path.front() == '/' ? path : "/" + path] = {times, status};
}

std::string MockServer::last_index_query() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return last_index_query_;
}

RawServer::RawServer(std::string response) {
    listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    int opt = 1;
    ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &opt, sizeof(opt));
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    addr.sin_port = 0;
    ::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr));
    socklen_t len = sizeof(addr);
    ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
    port_ = ntohs(addr.sin_port);
    ::listen(listen_fd_, 8);
    thread_ = std::thread([this, canned = std::move(response)] {
        while (!stop_) {
            int fd = ::accept(listen_fd_, nullptr, nullptr);
            if (fd < 0) break;
            std::string request;
            char buf[4096];
            while (request.find("\r\n\r\n") == std::string::npos &&
                   request.size() < (1u << 20)) {
                ssize_t n = ::recv(fd, buf, sizeof(buf), 0);
                if (n <= 0) break;
                request.append(buf, static_cast<std::size_t>(n));
            }
            ::send(fd, canned.data(), canned.size(), MSG_NOSIGNAL);
            ::shutdown(fd, SHUT_RDWR);
            ::close(fd);
        }
    });
}

RawServer::~RawServer() {
    stop_ = true;
    ::shutdown(listen_fd_, SHUT_RDWR);
    ::close(listen_fd_);
    if (thread_.joinable()) thread_.join();
}

std::string RawServer::base_url() const {
    return "http://127.0.0.1:" + std::to_string(port_);
}

std::string random_line(std::mt19937_64& rng, int max_words) {
    std::uniform_int_distribution<int> word_count(1, max_words);
    std::uniform_int_distribution<int> word_len(1, 8);
    std::uniform_int_distribution<int> letter(0, 35);
    std::string line;
    int words = word_count(rng);
    for (int w = 0; w < words; ++w) {
        if (!line.empty()) line += " ";
        int len = word_len(rng);
        for (int i = 0; i < len; ++i) {
            int v = letter(rng);
            line += static_cast<char>(v < 26 ? 'a' + v : '0' + (v - 26));
        }
    }
    return line;
}

harvest::WarcRecord random_warc_record(std::mt19937_64& rng) {
    static const std::vector<std::string> kTypes = {"response", "request", "metadata",
                                                    "resource", "warcinfo"};
    std::uniform_int_distribution<std::size_t> type_pick(0, kTypes.size() - 1);
    std::uniform_int_distribution<int> header_count(0, 6);
    std::uniform_int_distribution<int> payload_len(0, 2000);
    std::uniform_int_distribution<int> byte(0, 255);
    std::uniform_int_distribution<int> version_pick(0, 1);

    std::vector<std::pair<std::string, std::string>> headers;
    headers.emplace_back("WARC-Record-ID",
                         "<urn:test:" + std::to_string(rng()) + ">");
    int extra = header_count(rng);
    for (int i = 0; i < extra; ++i) {
        headers.emplace_back("X-Test-" + std::to_string(i), random_line(rng, 4));
    }
    std::string payload;
    int len = payload_len(rng);
    payload.reserve(static_cast<std::size_t>(len));
    for (int i = 0; i < len; ++i) payload += static_cast<char>(byte(rng));
    return harvest::make_warc_record(kTypes[type_pick(rng)], std::move(headers),
                                     std::move(payload),
                                     version_pick(rng) == 0 ? "WARC/1.0" : "WARC/1.1");
}

void install_fixture(MockServer& server, const FixtureStore& store) {
    server.set_collinfo({store.crawl});
    std::string page_body;
    for (const auto& line : store.cdx_lines) {
        page_body += line;
        page_body += "\n";
    }
    server.set_index_page(store.crawl, 0, page_body);
    server.add_file(store.dump_filename, store.dump_bytes);
}

}  // namespace testsup
