#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace pge {

// Base of all recoverable failures. Each category maps onto a process exit
// code so the CLI can report it without inspecting messages.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual int exit_code() const noexcept { return 1; }
};

// Invalid configuration or unreadable/malformed input files.
class ConfigError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 2; }
};

class InputError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// A subgraph cannot be placed on its compute node.
class CapacityError : public Error {
 public:
  CapacityError(const std::string& what, std::optional<std::size_t> subgraph = {})
      : Error(what), subgraph_(subgraph) {}
  int exit_code() const noexcept override { return 3; }
  std::optional<std::size_t> subgraph() const noexcept { return subgraph_; }

 private:
  std::optional<std::size_t> subgraph_;
};

// An embedding backend (or the alignment of its output) failed.
class BackendError : public Error {
 public:
  BackendError(const std::string& what, std::optional<std::size_t> subgraph = {})
      : Error(what), subgraph_(subgraph) {}
  int exit_code() const noexcept override { return 4; }
  std::optional<std::size_t> subgraph() const noexcept { return subgraph_; }

 private:
  std::optional<std::size_t> subgraph_;
};

class AlignmentError : public BackendError {
 public:
  using BackendError::BackendError;
};

}  // namespace pge
