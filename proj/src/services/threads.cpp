#include "services/threads.hpp"

#include <chrono>
#include <cstdio>

#include "common/error.hpp"
#include "common/text.hpp"

namespace planetary::services {

std::string format_thread_id(std::uint64_t n) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "t%06llu", static_cast<unsigned long long>(n));
  return buf;
}

nlohmann::ordered_json thread_to_json(const DiscussionThread& t) {
  nlohmann::ordered_json posts = nlohmann::ordered_json::array();
  for (const auto& p : t.posts) {
    posts.push_back({{"author", p.author}, {"timestamp", p.timestamp}, {"body", p.body}});
  }
  return {{"id", t.id},
          {"anchor",
           {{"path", t.anchor.path},
            {"revision", t.anchor.revision},
            {"fragment", t.anchor.fragment}}},
          {"title", t.title},
          {"posts", std::move(posts)}};
}

DiscussionThread thread_from_json(const nlohmann::json& j) {
  try {
    DiscussionThread t;
    t.id = j.at("id").get<std::string>();
    const auto& a = j.at("anchor");
    t.anchor = Anchor{a.at("path").get<std::string>(), a.at("revision").get<std::uint64_t>(),
                      a.at("fragment").get<std::string>()};
    t.title = j.at("title").get<std::string>();
    for (const auto& p : j.at("posts")) {
      t.posts.push_back(Post{p.at("author").get<std::string>(),
                             p.at("timestamp").get<std::int64_t>(),
                             p.at("body").get<std::string>()});
    }
    if (t.posts.empty()) throw Error(ErrorCode::Corrupt, "thread without posts");
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Corrupt, std::string("malformed thread record: ") + e.what());
  }
}

namespace {

void require_body(const std::string& body) {
  if (text::trim(body).empty()) throw Error(ErrorCode::EmptyBody, "post body is empty");
}

}  // namespace

ThreadStore::ThreadStore(store::VersionedStore& store, AnchorCheck check,
                         std::function<std::int64_t()> clock)
    : store_(store), check_(std::move(check)), clock_(std::move(clock)) {
  for (const auto& path : store_.list(kThreadPrefix)) {
    auto t = thread_from_json(nlohmann::json::parse(store_.get(path)));
    threads_.emplace(t.id, std::move(t));
  }
  if (!threads_.empty()) {
    next_id_ = std::stoull(threads_.rbegin()->first.substr(1)) + 1;
  }
}

std::int64_t ThreadStore::now(std::int64_t floor) const {
  const auto t = clock_ ? clock_()
                        : std::chrono::duration_cast<std::chrono::seconds>(
                              std::chrono::system_clock::now().time_since_epoch())
                              .count();
  return std::max(t, floor);
}

void ThreadStore::persist(const DiscussionThread& t, const std::string& author,
                          const std::string& message) {
  store_.commit({store::Change::put(std::string(kThreadPrefix) + t.id + ".json",
                                    thread_to_json(t).dump() + "\n")},
                author, message);
}

DiscussionThread ThreadStore::create_thread(const Anchor& anchor, const std::string& title,
                                            const std::string& author,
                                            const std::string& body) {
  require_body(body);
  if (!check_ || !check_(anchor.path, anchor.revision, anchor.fragment)) {
    throw Error(ErrorCode::UnknownFragment, "unknown fragment " + anchor.fragment);
  }
  std::lock_guard lock(mutex_);
  std::int64_t floor = 0;
  if (!threads_.empty()) floor = threads_.rbegin()->second.posts.front().timestamp;
  DiscussionThread t{format_thread_id(next_id_), anchor, title,
                     {Post{author, now(floor), body}}};
  persist(t, author, "open thread " + t.id);
  ++next_id_;
  threads_.emplace(t.id, t);
  return t;
}

DiscussionThread ThreadStore::add_post(const std::string& thread_id, const std::string& author,
                                       const std::string& body) {
  std::lock_guard lock(mutex_);
  const auto it = threads_.find(thread_id);
  if (it == threads_.end()) throw Error(ErrorCode::UnknownThread, "unknown thread " + thread_id);
  require_body(body);
  auto t = it->second;
  t.posts.push_back(Post{author, now(t.posts.back().timestamp), body});
  persist(t, author, "reply to " + t.id);
  it->second = t;
  return t;
}

std::vector<DiscussionThread> ThreadStore::filter(
    const std::function<bool(const DiscussionThread&)>& keep) const {
  std::lock_guard lock(mutex_);
  std::vector<DiscussionThread> out;
  for (const auto& [id, t] : threads_) {
    if (keep(t)) out.push_back(t);
  }
  return out;
}

std::vector<DiscussionThread> ThreadStore::by_document(const std::string& path) const {
  return filter([&](const DiscussionThread& t) { return t.anchor.path == path; });
}

std::vector<DiscussionThread> ThreadStore::by_fragment(const std::string& fragment) const {
  return filter([&](const DiscussionThread& t) { return t.anchor.fragment == fragment; });
}

std::vector<DiscussionThread> ThreadStore::all() const {
  return filter([](const DiscussionThread&) { return true; });
}

DiscussionThread ThreadStore::get(const std::string& thread_id) const {
  std::lock_guard lock(mutex_);
  const auto it = threads_.find(thread_id);
  if (it == threads_.end()) throw Error(ErrorCode::UnknownThread, "unknown thread " + thread_id);
  return it->second;
}

}  // namespace planetary::services
