#pragma once

#include <stdexcept>
#include <string>

namespace qpm {

inline constexpr const char* kEngineVersion = "0.1.0";

// Error hierarchy. The CLI maps these onto process exit codes:
//   ConfigError      -> 2   (bad config file / input file / CLI usage)
//   DomainError      -> 3   (argument outside its physical domain)
//   PhysicsError     -> 3   (valid inputs, invalid regime: resonance, window)
//   ConvergenceError -> 4   (iterative solver failed to converge)
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class ConfigError : public Error {
public:
  explicit ConfigError(const std::string& msg) : Error(msg) {}
};

class DomainError : public Error {
public:
  explicit DomainError(const std::string& msg) : Error(msg) {}
};

class PhysicsError : public Error {
public:
  explicit PhysicsError(const std::string& msg) : Error(msg) {}
};

class ConvergenceError : public Error {
public:
  explicit ConvergenceError(const std::string& msg) : Error(msg) {}
};

} // namespace qpm
