#pragma once

#include <map>
#include <mutex>
#include <string>

#include "render/render.hpp"
#include "services/services.hpp"

namespace planetary::services {

// Per-session fold state. Sessions never observe each other's changes.
class FoldTable {
 public:
  // Idempotent. Throws Error{UnknownFragment} when `fragment` is not a
  // fragment of the head corpus.
  render::FoldState set_fold(const Corpus& corpus, const std::string& session,
                             const std::string& fragment, bool folded);
  render::FoldState get_folds(const std::string& session) const;
  std::size_t session_count() const;

 private:
  mutable std::mutex mutex_;
  std::map<std::string, render::FoldState> sessions_;
};

}  // namespace planetary::services
