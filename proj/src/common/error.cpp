#include "common/error.hpp"

namespace planetary {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidPath: return "InvalidPath";
    case ErrorCode::InvalidTermPath: return "InvalidTermPath";
    case ErrorCode::EmptyCommit: return "EmptyCommit";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::NoSuchRevision: return "NoSuchRevision";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::UnknownFragment: return "UnknownFragment";
    case ErrorCode::UnknownThread: return "UnknownThread";
    case ErrorCode::EmptyBody: return "EmptyBody";
    case ErrorCode::MalformedQuery: return "MalformedQuery";
    case ErrorCode::AuthFailed: return "AuthFailed";
    case ErrorCode::BindFailed: return "BindFailed";
    case ErrorCode::Corrupt: return "Corrupt";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace planetary
