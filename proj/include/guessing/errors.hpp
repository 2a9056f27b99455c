#pragma once

#include <stdexcept>
#include <string>

namespace guessing {

/// Malformed or invalid input. `path` names the offending field, e.g. "pmf[2]".
class InputError : public std::runtime_error {
 public:
  InputError(std::string path, const std::string& message)
      : std::runtime_error(path.empty() ? message : path + ": " + message),
        path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// An enumeration or product size exceeded its configured cap.
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace guessing
