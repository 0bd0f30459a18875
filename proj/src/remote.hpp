#ifndef NEWSGRAPH_SRC_REMOTE_HPP_
#define NEWSGRAPH_SRC_REMOTE_HPP_

#include <functional>
#include <string>

namespace newsgraph::detail {

/// POSTs body as JSON to {endpoint}{route} and hands the response body to
/// consume. A failed connection, a non-200 status, or a throw from consume
/// counts as a failed attempt; attempts are retried with exponential
/// backoff starting at 100 ms. Throws RemoteError once max_retries + 1
/// attempts have failed.
void post_json_with_retry(const std::string& endpoint, const std::string& route,
                          const std::string& body, int timeout_ms, int max_retries,
                          const std::function<void(const std::string&)>& consume);

}  // namespace newsgraph::detail

#endif  // NEWSGRAPH_SRC_REMOTE_HPP_
