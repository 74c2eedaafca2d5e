#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace plc {

/// Malformed map or file content.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameter or configuration value.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A caller broke an operation's precondition.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class UnreachableError : public std::runtime_error {
 public:
  UnreachableError(const std::string& what, std::size_t frontier_size)
      : std::runtime_error(what), frontier_size_(frontier_size) {}

  /// Number of states expanded before the search gave up.
  std::size_t frontier_size() const { return frontier_size_; }

 private:
  std::size_t frontier_size_;
};

class IoError : public std::runtime_error {
 public:
  IoError(const std::string& what, std::string path)
      : std::runtime_error(what + ": " + path), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

}  // namespace plc
