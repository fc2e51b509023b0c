#pragma once

#include <stdexcept>
#include <string>

namespace slp {

// Violated precondition or API contract (caller bug).
struct ContractError : std::logic_error {
  explicit ContractError(const std::string& msg) : std::logic_error(msg) {}
};

// Incompatible tensor shapes; message names the operation and operands.
struct ShapeError : std::runtime_error {
  explicit ShapeError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed treebank input; message carries the line number.
struct ConllError : std::runtime_error {
  explicit ConllError(const std::string& msg) : std::runtime_error(msg) {}
};

// Unreadable, truncated, or incompatible model file.
struct ModelIoError : std::runtime_error {
  explicit ModelIoError(const std::string& msg) : std::runtime_error(msg) {}
};

// Gold tree cannot be linearized into a transition sequence.
struct OracleError : std::runtime_error {
  explicit OracleError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace slp
