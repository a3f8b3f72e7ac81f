#pragma once

#include <stdexcept>
#include <string>

namespace cuckoo_prf {

// Caller passed a value that violates an operation's precondition
// (length mismatch, index out of range, width mismatch).
class UsageError : public std::invalid_argument {
public:
  explicit UsageError(const std::string &what) : std::invalid_argument(what) {}
};

// A construction or experiment was configured with parameters outside its
// contract. The message names the violated constraint.
class ConfigError : public std::invalid_argument {
public:
  explicit ConfigError(const std::string &what) : std::invalid_argument(what) {}
};

// A distinguisher broke the game protocol (budget exceeded, out-of-domain or
// repeated query). Raised inside a trial; the harness aborts that trial.
class ProtocolViolation : public std::runtime_error {
public:
  explicit ProtocolViolation(const std::string &what) : std::runtime_error(what) {}
};

} // namespace cuckoo_prf
