#pragma once

#include <stdexcept>
#include <string>

namespace cvqc {

/// A caller violated an operation's precondition.
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A server response could not be interpreted against the client's secrets in
/// a way that is a programming error rather than a protocol outcome.
class TableMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Decoding found a gadget that is not in honest form.
class NonHonestForm : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool condition, const char* what) {
  if (!condition) throw ContractError(what);
}

inline void require(bool condition, const std::string& what) {
  if (!condition) throw ContractError(what);
}

}  // namespace cvqc
