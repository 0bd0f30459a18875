#include "remote.hpp"

#include <chrono>
#include <thread>

#include "httplib.h"

#include "newsgraph/error.hpp"

namespace newsgraph::detail {
namespace {

// "http://host:port/prefix" -> ("http://host:port", "/prefix").
std::pair<std::string, std::string> split_endpoint(const std::string& endpoint) {
    const auto scheme_end = endpoint.find("://");
    const std::size_t host_start = scheme_end == std::string::npos ? 0 : scheme_end + 3;
    const auto path_start = endpoint.find('/', host_start);
    if (path_start == std::string::npos) return {endpoint, ""};
    std::string prefix = endpoint.substr(path_start);
    while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
    return {endpoint.substr(0, path_start), prefix};
}

}  // namespace

void post_json_with_retry(const std::string& endpoint, const std::string& route,
                          const std::string& body, int timeout_ms, int max_retries,
                          const std::function<void(const std::string&)>& consume) {
    const auto [base, prefix] = split_endpoint(endpoint);
    httplib::Client client(base);
    client.set_connection_timeout(timeout_ms / 1000, (timeout_ms % 1000) * 1000);
    client.set_read_timeout(timeout_ms / 1000, (timeout_ms % 1000) * 1000);
    client.set_write_timeout(timeout_ms / 1000, (timeout_ms % 1000) * 1000);

    std::string last_error;
    for (int attempt = 0; attempt <= max_retries; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(std::chrono::milliseconds(100LL << (attempt - 1)));
        }
        auto res = client.Post(prefix + route, body, "application/json");
        if (!res) {
            last_error = "connection failed (" + httplib::to_string(res.error()) + ")";
            continue;
        }
        if (res->status != 200) {
            last_error = "HTTP " + std::to_string(res->status);
            continue;
        }
        try {
            consume(res->body);
            return;
        } catch (const std::exception& e) {
            last_error = std::string("malformed response: ") + e.what();
        }
    }
    throw RemoteError("request to " + endpoint + route + " failed after " +
                      std::to_string(max_retries + 1) + " attempts: " + last_error);
}

}  // namespace newsgraph::detail
