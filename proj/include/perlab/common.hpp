#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace perlab {

// Error hierarchy. SizeError / GenerationError map to CLI exit code 3
// (resource guard), ConfigError to exit code 2.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct SizeError : Error {
  explicit SizeError(const std::string& msg) : Error(msg) {}
};

struct ParityError : Error {
  explicit ParityError(const std::string& msg) : Error(msg) {}
};

struct GenerationError : Error {
  explicit GenerationError(const std::string& msg) : Error(msg) {}
};

struct DomainError : Error {
  explicit DomainError(const std::string& msg) : Error(msg) {}
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& msg) : Error(msg) {}
};

}  // namespace perlab
