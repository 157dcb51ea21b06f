#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace satmodel {

// Invalid parameters or configuration (C <= 1, t_n outside (0,1), ...).
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
  explicit ValidationError(std::vector<std::string> messages);

  const std::vector<std::string>& messages() const { return messages_; }

 private:
  std::vector<std::string> messages_;
};

// A computation that cannot be carried out at the working precision,
// e.g. a lost bisection bracket or an argument that cannot be reduced.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace satmodel
