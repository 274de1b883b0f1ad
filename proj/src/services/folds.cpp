#include "services/folds.hpp"

namespace planetary::services {

render::FoldState FoldTable::set_fold(const Corpus& corpus, const std::string& session,
                                      const std::string& fragment, bool folded) {
  corpus.fragment(fragment);
  std::lock_guard lock(mutex_);
  auto& state = sessions_[session];
  if (folded) {
    state.insert(fragment);
  } else {
    state.erase(fragment);
  }
  return state;
}

render::FoldState FoldTable::get_folds(const std::string& session) const {
  std::lock_guard lock(mutex_);
  const auto it = sessions_.find(session);
  return it == sessions_.end() ? render::FoldState{} : it->second;
}

std::size_t FoldTable::session_count() const {
  std::lock_guard lock(mutex_);
  return sessions_.size();
}

}  // namespace planetary::services
