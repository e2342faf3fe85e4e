#pragma once

#include <stdexcept>
#include <string>

namespace nsm {

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Bad user input: malformed files, violated preconditions, invalid config.
/// Maps to CLI exit code 1.
class ValidationError : public Error {
  public:
    explicit ValidationError(const std::string& msg) : Error(msg) {}
};

/// A data file could not be parsed. Carries file and line context in the message.
class LoadError : public ValidationError {
  public:
    explicit LoadError(const std::string& msg) : ValidationError(msg) {}
};

/// A remote or mock backend failed. Maps to CLI exit code 2.
class BackendError : public Error {
  public:
    BackendError(const std::string& backend, const std::string& msg)
        : Error("backend '" + backend + "': " + msg), backend_(backend), message_(msg) {}

    const std::string& backend() const { return backend_; }
    /// Message without the "backend '...'" prefix, for rethrows that extend it.
    const std::string& message() const { return message_; }

  private:
    std::string backend_;
    std::string message_;
};

/// A mock table lookup missed. Mocks never fabricate values.
class MockMissError : public BackendError {
  public:
    MockMissError(const std::string& backend, const std::string& fingerprint,
                  const std::string& request_summary)
        : BackendError(backend, "no recorded response for fingerprint " + fingerprint +
                                    " (request: " + request_summary + ")"),
          fingerprint_(fingerprint) {}

    const std::string& fingerprint() const { return fingerprint_; }

  private:
    std::string fingerprint_;
};

} // namespace nsm
