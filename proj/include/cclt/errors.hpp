#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace cclt {

// Exit-code classes used by the CLI: ConfigError -> 1, NumericalError -> 2.

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  std::vector<std::string> problems_;
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cclt
