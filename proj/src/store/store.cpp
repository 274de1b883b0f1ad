#include "store/store.hpp"

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>
#include <zlib.h>

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>

#include "common/error.hpp"
#include "common/text.hpp"
#include "json.hpp"

namespace planetary::store {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

[[noreturn]] void io_error(const std::string& what) {
  throw Error(ErrorCode::Io, what + ": " + std::strerror(errno));
}

class Fd {
 public:
  Fd(const fs::path& path, int flags, mode_t mode = 0644)
      : fd_(::open(path.c_str(), flags | O_CLOEXEC, mode)) {
    if (fd_ < 0) io_error("open " + path.string());
  }
  ~Fd() {
    if (fd_ >= 0) ::close(fd_);
  }
  Fd(const Fd&) = delete;
  Fd& operator=(const Fd&) = delete;

  void write_all(std::string_view data) const {
    while (!data.empty()) {
      const auto n = ::write(fd_, data.data(), data.size());
      if (n < 0) {
        if (errno == EINTR) continue;
        io_error("write");
      }
      data.remove_prefix(static_cast<std::size_t>(n));
    }
  }
  void sync() const {
    if (::fsync(fd_) != 0) io_error("fsync");
  }
  int get() const { return fd_; }

 private:
  int fd_;
};

void sync_directory(const fs::path& dir) {
  Fd fd(dir, O_RDONLY | O_DIRECTORY);
  fd.sync();
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) io_error("read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Writes via a temporary file and rename so readers never see partial files.
void write_file_atomic(const fs::path& path, std::string_view data, bool sync) {
  fs::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    Fd fd(tmp, O_WRONLY | O_CREAT | O_TRUNC);
    fd.write_all(data);
    if (sync) fd.sync();
  }
  fs::rename(tmp, path);
  if (sync) sync_directory(path.parent_path());
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint32_t get_u32(std::string_view in, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[at + i]))
         << (8 * i);
  }
  return v;
}

std::uint32_t checksum(std::string_view payload) {
  return static_cast<std::uint32_t>(
      crc32(0L, reinterpret_cast<const Bytef*>(payload.data()),
            static_cast<uInt>(payload.size())));
}

json changes_json(
    const std::vector<std::pair<std::string, std::optional<std::string>>>& changes) {
  auto arr = json::array();
  for (const auto& [path, blob] : changes) {
    arr.push_back(json::array({path, blob ? json(*blob) : json(nullptr)}));
  }
  return arr;
}

std::vector<std::pair<std::string, std::optional<std::string>>> changes_from(
    const json& arr) {
  std::vector<std::pair<std::string, std::optional<std::string>>> out;
  for (const auto& c : arr) {
    std::optional<std::string> blob;
    if (!c.at(1).is_null()) blob = c.at(1).get<std::string>();
    out.emplace_back(c.at(0).get<std::string>(), std::move(blob));
  }
  return out;
}

std::int64_t system_seconds() {
  return std::chrono::duration_cast<std::chrono::seconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

}  // namespace

VersionedStore::VersionedStore(fs::path dir, StoreOptions options)
    : dir_(std::move(dir)), options_(std::move(options)) {
  if (!options_.clock) options_.clock = system_seconds;
  std::error_code ec;
  fs::create_directories(dir_ / "blobs", ec);
  if (ec) {
    throw Error(ErrorCode::Io,
                "cannot create data directory " + dir_.string() + ": " + ec.message());
  }
  open();
}

void VersionedStore::fail_at(std::string_view point) const {
  if (options_.failpoint) options_.failpoint(point);
}

void VersionedStore::apply(Entry entry) {
  for (const auto& [path, blob] : entry.changes) {
    paths_[path].push_back(Version{entry.record.revision, blob});
  }
  entries_.push_back(std::move(entry));
}

void VersionedStore::open() {
  const auto log_path = dir_ / "log";
  const auto index_path = dir_ / "index";
  if (!fs::exists(log_path)) {
    Fd create(log_path, O_WRONLY | O_CREAT);
  }
  const auto log = read_file(log_path);

  // Index first: each line is a full entry plus its log offset.
  std::uint64_t covered = 0;
  bool index_ok = true;
  if (fs::exists(index_path)) {
    std::istringstream in(read_file(index_path));
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      try {
        const auto j = json::parse(line);
        Entry e;
        e.record.revision = Revision{j.at("rev").get<std::uint64_t>()};
        e.record.timestamp = j.at("ts").get<std::int64_t>();
        e.record.author = j.at("author").get<std::string>();
        e.record.message = j.at("message").get<std::string>();
        e.changes = changes_from(j.at("changes"));
        for (const auto& c : e.changes) e.record.changed_paths.push_back(c.first);
        e.offset = j.at("offset").get<std::uint64_t>();
        e.length = j.at("length").get<std::uint64_t>();
        if (e.record.revision.value != entries_.size() + 1 || e.offset != covered ||
            e.offset + e.length > log.size()) {
          index_ok = false;
          break;
        }
        covered = e.offset + e.length;
        apply(std::move(e));
      } catch (const json::exception&) {
        index_ok = false;
        break;
      }
    }
  } else {
    index_ok = false;
  }
  if (!index_ok) {
    entries_.clear();
    paths_.clear();
    covered = 0;
  }

  // Replay log records the index does not cover yet.
  std::size_t pos = covered;
  bool replayed = false;
  while (pos + 8 <= log.size()) {
    const auto len = get_u32(log, pos);
    const auto crc = get_u32(log, pos + 4);
    if (pos + 8 + len > log.size()) break;
    const auto payload = std::string_view(log).substr(pos + 8, len);
    if (checksum(payload) != crc) break;
    Entry e;
    try {
      const auto j = json::parse(payload);
      e.record.revision = Revision{j.at("rev").get<std::uint64_t>()};
      e.record.timestamp = j.at("ts").get<std::int64_t>();
      e.record.author = j.at("author").get<std::string>();
      e.record.message = j.at("message").get<std::string>();
      e.changes = changes_from(j.at("changes"));
    } catch (const json::exception&) {
      break;
    }
    if (e.record.revision.value != entries_.size() + 1) {
      throw Error(ErrorCode::Corrupt, "commit log revisions out of sequence");
    }
    for (const auto& c : e.changes) e.record.changed_paths.push_back(c.first);
    e.offset = pos;
    e.length = 8 + len;
    pos += 8 + len;
    apply(std::move(e));
    replayed = true;
  }
  if (pos < log.size()) {
    // Torn or damaged tail from an interrupted append: never acknowledged.
    if (::truncate(log_path.c_str(), static_cast<off_t>(pos)) != 0) {
      io_error("truncate log");
    }
  }
  log_size_ = pos;
  if (replayed || !index_ok) rebuild_index();
}

void VersionedStore::rebuild_index() {
  std::string out;
  for (const auto& e : entries_) {
    json j;
    j["rev"] = e.record.revision.value;
    j["ts"] = e.record.timestamp;
    j["author"] = e.record.author;
    j["message"] = e.record.message;
    j["changes"] = changes_json(e.changes);
    j["offset"] = e.offset;
    j["length"] = e.length;
    out += j.dump();
    out.push_back('\n');
  }
  write_file_atomic(dir_ / "index", out, options_.sync);
}

std::string VersionedStore::write_blob(std::string_view content) const {
  auto hash = text::sha256_hex(content);
  const auto path = dir_ / "blobs" / hash;
  if (!fs::exists(path)) write_file_atomic(path, content, options_.sync);
  return hash;
}

std::string VersionedStore::read_blob(const std::string& hash) const {
  const auto content = read_file(dir_ / "blobs" / hash);
  if (text::sha256_hex(content) != hash) {
    throw Error(ErrorCode::Corrupt, "blob " + hash + " fails its checksum");
  }
  return content;
}

Revision VersionedStore::commit(const std::vector<Change>& changes,
                                const std::string& author,
                                const std::string& message) {
  if (changes.empty()) throw Error(ErrorCode::EmptyCommit, "empty commit");
  std::set<std::string> seen;
  for (const auto& c : changes) {
    if (!text::is_valid_repo_path(c.path)) {
      throw Error(ErrorCode::InvalidPath, "invalid path '" + c.path + "'");
    }
    if (!seen.insert(c.path).second) {
      throw Error(ErrorCode::InvalidPath, "path '" + c.path + "' changed twice");
    }
  }

  std::unique_lock lock(mutex_);
  const Revision head{entries_.size()};
  for (const auto& c : changes) {
    if (!c.content && version_at(c.path, head) == nullptr) {
      throw Error(ErrorCode::InvalidPath,
                  "cannot delete missing path '" + c.path + "'");
    }
  }

  Entry e;
  e.record.revision = Revision{head.value + 1};
  e.record.timestamp = options_.clock();
  if (!entries_.empty()) {
    e.record.timestamp = std::max(e.record.timestamp, entries_.back().record.timestamp);
  }
  e.record.author = author;
  e.record.message = message;
  for (const auto& c : changes) {
    std::optional<std::string> blob;
    if (c.content) blob = write_blob(*c.content);
    e.changes.emplace_back(c.path, std::move(blob));
    e.record.changed_paths.push_back(c.path);
  }
  fail_at("after-blobs");

  json j;
  j["rev"] = e.record.revision.value;
  j["ts"] = e.record.timestamp;
  j["author"] = e.record.author;
  j["message"] = e.record.message;
  j["changes"] = changes_json(e.changes);
  const auto payload = j.dump();
  std::string record;
  put_u32(record, static_cast<std::uint32_t>(payload.size()));
  put_u32(record, checksum(payload));
  record += payload;
  {
    Fd log(dir_ / "log", O_WRONLY | O_APPEND);
    fail_at("before-log-append");
    // Two writes so the mid-append failpoint can leave a torn record.
    log.write_all(std::string_view(record).substr(0, record.size() / 2));
    fail_at("mid-log-append");
    log.write_all(std::string_view(record).substr(record.size() / 2));
    if (options_.sync) log.sync();
  }
  e.offset = log_size_;
  e.length = record.size();
  log_size_ += record.size();
  fail_at("after-log-append");

  {
    json line = j;
    line["offset"] = e.offset;
    line["length"] = e.length;
    Fd index(dir_ / "index", O_WRONLY | O_APPEND | O_CREAT);
    index.write_all(line.dump() + "\n");
  }
  fail_at("after-index-update");

  const auto revision = e.record.revision;
  apply(std::move(e));
  return revision;
}

Revision VersionedStore::head() const {
  std::shared_lock lock(mutex_);
  return Revision{entries_.size()};
}

Revision VersionedStore::resolve(std::optional<Revision> at) const {
  const Revision head{entries_.size()};
  if (!at) return head;
  if (at->value == 0 || *at > head) {
    throw Error(ErrorCode::NoSuchRevision,
                "no revision " + std::to_string(at->value));
  }
  return *at;
}

const VersionedStore::Version* VersionedStore::version_at(const std::string& path,
                                                          Revision at) const {
  const auto it = paths_.find(path);
  if (it == paths_.end()) return nullptr;
  const auto& versions = it->second;
  auto pos = std::upper_bound(
      versions.begin(), versions.end(), at,
      [](Revision r, const Version& v) { return r < v.revision; });
  if (pos == versions.begin()) return nullptr;
  --pos;
  return pos->blob ? &*pos : nullptr;
}

std::string VersionedStore::get(const std::string& path,
                                std::optional<Revision> at) const {
  std::string hash;
  {
    std::shared_lock lock(mutex_);
    const auto rev = resolve(at);
    const auto* v = version_at(path, rev);
    if (v == nullptr) {
      throw Error(ErrorCode::NotFound, "'" + path + "' not found at revision " +
                                           std::to_string(rev.value));
    }
    hash = *v->blob;
  }
  return read_blob(hash);
}

bool VersionedStore::exists(const std::string& path,
                            std::optional<Revision> at) const {
  std::shared_lock lock(mutex_);
  return version_at(path, resolve(at)) != nullptr;
}

std::optional<Revision> VersionedStore::last_change(
    const std::string& path, std::optional<Revision> at) const {
  std::shared_lock lock(mutex_);
  const auto* v = version_at(path, resolve(at));
  if (v == nullptr) return std::nullopt;
  return v->revision;
}

std::vector<CommitRecord> VersionedStore::history(const std::string& path) const {
  std::shared_lock lock(mutex_);
  std::vector<CommitRecord> out;
  const auto it = paths_.find(path);
  if (it == paths_.end()) return out;
  for (const auto& v : it->second) {
    out.push_back(entries_[v.revision.value - 1].record);
  }
  return out;
}

CommitRecord VersionedStore::record(Revision revision) const {
  std::shared_lock lock(mutex_);
  return entries_[resolve(revision).value - 1].record;
}

std::vector<Hunk> VersionedStore::diff(const std::string& path, Revision r1,
                                       Revision r2) const {
  const auto before = get(path, r1);
  const auto after = get(path, r2);
  return diff_lines(before, after);
}

std::vector<std::string> VersionedStore::list(std::string_view prefix,
                                              std::optional<Revision> at) const {
  std::shared_lock lock(mutex_);
  const auto rev = resolve(at);
  std::vector<std::string> out;
  for (auto it = paths_.lower_bound(std::string(prefix)); it != paths_.end(); ++it) {
    if (!text::starts_with(it->first, prefix)) break;
    if (version_at(it->first, rev) != nullptr) out.push_back(it->first);
  }
  return out;
}

void VersionedStore::put_derived(std::string_view kind, const std::string& path,
                                 Revision revision, std::string_view bytes) const {
  if (!text::is_valid_repo_path(path)) {
    throw Error(ErrorCode::InvalidPath, "invalid path '" + path + "'");
  }
  write_file_atomic(dir_ / "derived" / std::string(kind) /
                        std::to_string(revision.value) / path,
                    bytes, false);
}

std::optional<std::string> VersionedStore::get_derived(std::string_view kind,
                                                       const std::string& path,
                                                       Revision revision) const {
  if (!text::is_valid_repo_path(path)) return std::nullopt;
  const auto file = dir_ / "derived" / std::string(kind) /
                    std::to_string(revision.value) / path;
  std::error_code ec;
  if (!fs::exists(file, ec)) return std::nullopt;
  return read_file(file);
}

fs::path default_data_dir() {
  if (const char* env = std::getenv("PORTAL_DATA_DIR"); env && *env) return env;
  return "data";
}

}  // namespace planetary::store
