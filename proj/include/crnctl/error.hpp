#pragma once

#include <stdexcept>
#include <string>

namespace crnctl {

/// Raised for precondition violations and numerical failures anywhere in the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace crnctl
