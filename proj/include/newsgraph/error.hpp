#ifndef NEWSGRAPH_ERROR_HPP_
#define NEWSGRAPH_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace newsgraph {

/// Base error for all pipeline failures.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// The inputs parsed but cannot support the requested computation, e.g.
/// an empty corpus after filtering or missing reference summaries.
class DataError : public Error {
public:
    explicit DataError(const std::string& msg) : Error(msg) {}
};

/// A remote service (embedding or summarization) could not be reached or
/// returned an unusable response after all retries.
class RemoteError : public Error {
public:
    explicit RemoteError(const std::string& msg) : Error(msg) {}
};

}  // namespace newsgraph

#endif  // NEWSGRAPH_ERROR_HPP_
