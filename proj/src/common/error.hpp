#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace planetary {

// Failure categories surfaced by the service layer. Parse problems are not
// errors in this sense: they are returned as data (see markup::ParseError).
enum class ErrorCode {
  InvalidArgument,
  InvalidPath,
  InvalidTermPath,
  EmptyCommit,
  NotFound,
  NoSuchRevision,
  UnknownNode,
  UnknownFragment,
  UnknownThread,
  EmptyBody,
  MalformedQuery,
  AuthFailed,
  BindFailed,
  Corrupt,
  Io,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace planetary
