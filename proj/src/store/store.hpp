#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "store/diff.hpp"

namespace planetary::store {

struct Revision {
  std::uint64_t value = 0;

  auto operator<=>(const Revision&) const = default;
};

struct Change {
  std::string path;
  std::optional<std::string> content;  // nullopt deletes the path

  static Change put(std::string path, std::string content) {
    return {std::move(path), std::move(content)};
  }
  static Change remove(std::string path) { return {std::move(path), std::nullopt}; }
};

struct CommitRecord {
  Revision revision;
  std::int64_t timestamp = 0;  // UTC seconds
  std::string author;
  std::string message;
  std::vector<std::string> changed_paths;

  friend bool operator==(const CommitRecord&, const CommitRecord&) = default;
};

struct StoreOptions {
  // fsync blobs, log records and directory entries before acknowledging.
  bool sync = true;
  // Seconds since the epoch; defaults to the system clock.
  std::function<std::int64_t()> clock;
  // Test hook invoked at named points of a commit ("after-blobs",
  // "after-log-append", "after-index-update").
  std::function<void(std::string_view)> failpoint;
};

// Linear, single-branch versioned storage.
//
// Layout under the data directory:
//   blobs/<sha256>   content-addressed file contents
//   log              append-only commit records: u32 length, u32 crc32, JSON
//   index            JSON lines mirroring the log with record offsets;
//                    rebuilt from the log when missing, stale or damaged
//   derived/<kind>/<revision>/<path>
//                    reproducible artifacts keyed by (path, revision)
//
// A commit is durable once its log record is written; a torn final record
// is discarded on open. One writer at a time, any number of readers; readers
// always observe a fully applied revision.
class VersionedStore {
 public:
  explicit VersionedStore(std::filesystem::path dir, StoreOptions options = {});

  VersionedStore(const VersionedStore&) = delete;
  VersionedStore& operator=(const VersionedStore&) = delete;

  // Throws Error{EmptyCommit} or Error{InvalidPath}. Deleting a path that does
  // not exist is an InvalidPath error.
  Revision commit(const std::vector<Change>& changes, const std::string& author,
                  const std::string& message);

  // Bytes most recently committed at or before `at` (head by default).
  // Throws Error{NotFound} or Error{NoSuchRevision}.
  std::string get(const std::string& path,
                  std::optional<Revision> at = std::nullopt) const;
  bool exists(const std::string& path,
              std::optional<Revision> at = std::nullopt) const;

  // Revision at which the content visible at `at` was written.
  std::optional<Revision> last_change(const std::string& path,
                                      std::optional<Revision> at = std::nullopt) const;

  std::vector<CommitRecord> history(const std::string& path) const;
  CommitRecord record(Revision revision) const;

  // Line hunks turning content@r1 into content@r2.
  std::vector<Hunk> diff(const std::string& path, Revision r1,
                         Revision r2) const;

  // Live paths at `at`, sorted, optionally restricted to a prefix.
  std::vector<std::string> list(std::string_view prefix = {},
                                std::optional<Revision> at = std::nullopt) const;

  Revision head() const;

  void put_derived(std::string_view kind, const std::string& path,
                   Revision revision, std::string_view bytes) const;
  std::optional<std::string> get_derived(std::string_view kind,
                                         const std::string& path,
                                         Revision revision) const;

  const std::filesystem::path& directory() const { return dir_; }

 private:
  struct Version {
    Revision revision;
    std::optional<std::string> blob;  // nullopt: deleted
  };
  struct Entry {
    CommitRecord record;
    std::vector<std::pair<std::string, std::optional<std::string>>> changes;
    std::uint64_t offset = 0;  // start of the record in the log
    std::uint64_t length = 0;  // bytes including the 8-byte header
  };

  void open();
  void rebuild_index();
  void apply(Entry entry);
  Revision resolve(std::optional<Revision> at) const;
  const Version* version_at(const std::string& path, Revision at) const;
  std::string read_blob(const std::string& hash) const;
  std::string write_blob(std::string_view content) const;
  void fail_at(std::string_view point) const;

  std::filesystem::path dir_;
  StoreOptions options_;
  mutable std::shared_mutex mutex_;
  std::vector<Entry> entries_;  // entries_[i] is revision i + 1
  std::map<std::string, std::vector<Version>> paths_;
  std::uint64_t log_size_ = 0;
};

// Data directory from PORTAL_DATA_DIR, or ./data when unset.
std::filesystem::path default_data_dir();

}  // namespace planetary::store
