#pragma once

#include <stdexcept>
#include <string>

namespace layerscope {

enum class ErrorCode {
  parse,       // malformed input text
  validation,  // data that parses but violates a structural requirement
  argument,    // out-of-range or inconsistent call parameters
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace layerscope
