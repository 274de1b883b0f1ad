#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "json.hpp"
#include "store/store.hpp"

namespace planetary::services {

struct Post {
  std::string author;
  std::int64_t timestamp = 0;  // UTC seconds
  std::string body;
  friend bool operator==(const Post&, const Post&) = default;
};

struct Anchor {
  std::string path;  // repository path of the document
  std::uint64_t revision = 0;
  std::string fragment;
  friend bool operator==(const Anchor&, const Anchor&) = default;
};

// At least one post; post timestamps non-decreasing.
struct DiscussionThread {
  std::string id;
  Anchor anchor;
  std::string title;
  std::vector<Post> posts;
  friend bool operator==(const DiscussionThread&, const DiscussionThread&) = default;
};

nlohmann::ordered_json thread_to_json(const DiscussionThread& t);
DiscussionThread thread_from_json(const nlohmann::json& j);

inline constexpr std::string_view kThreadPrefix = "_threads/";

// Threads persisted as `_threads/<id>.json`, one store commit per mutation.
class ThreadStore {
 public:
  // True when `fragment` exists in `path` at `revision`.
  using AnchorCheck =
      std::function<bool(const std::string& path, std::uint64_t revision,
                         const std::string& fragment)>;

  ThreadStore(store::VersionedStore& store, AnchorCheck check,
              std::function<std::int64_t()> clock = {});

  // Throws Error{UnknownFragment} or Error{EmptyBody}. The post timestamp
  // is assigned here.
  DiscussionThread create_thread(const Anchor& anchor, const std::string& title,
                                 const std::string& author, const std::string& body);
  // Throws Error{UnknownThread} or Error{EmptyBody}.
  DiscussionThread add_post(const std::string& thread_id, const std::string& author,
                            const std::string& body);

  // Threads anchored anywhere in `path`, at any revision, by creation time.
  std::vector<DiscussionThread> by_document(const std::string& path) const;
  // Threads anchored at exactly `fragment`, by creation time.
  std::vector<DiscussionThread> by_fragment(const std::string& fragment) const;
  std::vector<DiscussionThread> all() const;
  // Throws Error{UnknownThread}.
  DiscussionThread get(const std::string& thread_id) const;

 private:
  std::int64_t now(std::int64_t floor) const;
  void persist(const DiscussionThread& t, const std::string& author,
               const std::string& message);
  std::vector<DiscussionThread> filter(
      const std::function<bool(const DiscussionThread&)>& keep) const;

  store::VersionedStore& store_;
  AnchorCheck check_;
  std::function<std::int64_t()> clock_;
  mutable std::mutex mutex_;
  std::map<std::string, DiscussionThread> threads_;  // ids sort by creation
  std::uint64_t next_id_ = 1;
};

std::string format_thread_id(std::uint64_t n);

}  // namespace planetary::services
