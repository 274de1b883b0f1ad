#include <string>
#include <vector>

#include "common/error.hpp"
#include "doctest.h"
#include "store/diff.hpp"
#include "store/store.hpp"
#include "support/fs_support.hpp"
#include "support/store_replay.hpp"

using namespace planetary;
using store::Change;
using store::Revision;
using store::VersionedStore;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::Io;
}

store::StoreOptions fast() {
  store::StoreOptions o;
  o.sync = false;
  return o;
}

std::string random_text(testing::Rng& rng) {
  std::string s;
  for (std::size_t i = 0, n = testing::uniform(rng, 0, 30); i < n; ++i) {
    s += static_cast<char>('a' + testing::uniform(rng, 0, 4));
    s += '\n';
  }
  if (testing::chance(rng, 0.3)) s += "no newline";
  return s;
}

}  // namespace

TEST_SUITE("store") {

TEST_CASE("first commit is revision 1") {
  testing::TempDir dir;
  VersionedStore s(dir.path(), fast());
  CHECK(s.head().value == 0);
  CHECK(s.commit({Change::put("a.stx", "x")}, "me", "first").value == 1);
  CHECK(s.head().value == 1);
}

TEST_CASE("empty commit and invalid paths") {
  testing::TempDir dir;
  VersionedStore s(dir.path(), fast());
  CHECK(code_of([&] { s.commit({}, "me", "nothing"); }) == ErrorCode::EmptyCommit);
  for (const char* bad : {"", "/abs", "a/../b", "a//b", "./a", "a\\b"}) {
    CAPTURE(bad);
    CHECK(code_of([&] { s.commit({Change::put(bad, "x")}, "me", "bad"); }) == ErrorCode::InvalidPath);
  }
  CHECK(code_of([&] { s.commit({Change::remove("never.stx")}, "me", "rm"); }) == ErrorCode::InvalidPath);
  CHECK(s.head().value == 0);
}

TEST_CASE("get at revisions") {
  testing::TempDir dir;
  VersionedStore s(dir.path(), fast());
  s.commit({Change::put("p.stx", "x")}, "me", "r1");
  CHECK(s.get("p.stx") == "x");
  s.commit({Change::put("p.stx", "y")}, "me", "r2");
  CHECK(s.get("p.stx", Revision{1}) == "x");
  s.commit({Change::remove("p.stx")}, "me", "r3");
  CHECK(code_of([&] { s.get("p.stx", Revision{3}); }) == ErrorCode::NotFound);
  CHECK(code_of([&] { s.get("p.stx"); }) == ErrorCode::NotFound);
  CHECK(s.get("p.stx", Revision{2}) == "y");
  CHECK(code_of([&] { s.get("p.stx", Revision{4}); }) == ErrorCode::NoSuchRevision);
  CHECK(code_of([&] { s.get("p.stx", Revision{0}); }) == ErrorCode::NoSuchRevision);
  CHECK(code_of([&] { s.get("q.stx"); }) == ErrorCode::NotFound);
}

TEST_CASE("history") {
  testing::TempDir dir;
  VersionedStore s(dir.path(), fast());
  CHECK(s.history("p.stx").empty());
  for (int r = 1; r <= 5; ++r) {
    std::vector<Change> changes{Change::put("other.stx", std::to_string(r))};
    if (r == 1 || r == 4) changes.push_back(Change::put("p.stx", std::to_string(r)));
    s.commit(changes, "me", "r" + std::to_string(r));
  }
  auto h = s.history("p.stx");
  REQUIRE(h.size() == 2);
  CHECK(h[0].revision.value == 1);
  CHECK(h[1].revision.value == 4);
  CHECK(h[1].message == "r4");
  CHECK(h[1].changed_paths == std::vector<std::string>{"other.stx", "p.stx"});
}

TEST_CASE("timestamps never decrease") {
  testing::TempDir dir;
  std::int64_t clock = 1000;
  auto opts = fast();
  opts.clock = [&] { return clock; };
  VersionedStore s(dir.path(), opts);
  s.commit({Change::put("a.stx", "1")}, "me", "1");
  clock = 500;
  s.commit({Change::put("a.stx", "2")}, "me", "2");
  CHECK(s.record(Revision{1}).timestamp == 1000);
  CHECK(s.record(Revision{2}).timestamp == 1000);
}

TEST_CASE("state survives reopen and index loss") {
  testing::TempDir dir;
  {
    VersionedStore s(dir.path(), fast());
    s.commit({Change::put("a.stx", "1"), Change::put("b/c.stx", "2")}, "me", "1");
    s.commit({Change::put("a.stx", "3")}, "me", "2");
  }
  std::filesystem::remove(dir / "index");
  {
    VersionedStore s(dir.path(), fast());
    CHECK(s.head().value == 2);
    CHECK(s.get("a.stx", Revision{1}) == "1");
    CHECK(s.get("b/c.stx") == "2");
    CHECK(s.list() == std::vector<std::string>{"a.stx", "b/c.stx"});
    CHECK(s.list("b/") == std::vector<std::string>{"b/c.stx"});
  }
  {
    std::ofstream garbage(dir / "index", std::ios::trunc);
    garbage << "{not json\n";
  }
  VersionedStore s(dir.path(), fast());
  CHECK(s.head().value == 2);
  CHECK(s.get("a.stx") == "3");
}

TEST_CASE("damaged blob is reported") {
  testing::TempDir dir;
  VersionedStore s(dir.path(), fast());
  s.commit({Change::put("a.stx", "content")}, "me", "1");
  for (const auto& e : std::filesystem::directory_iterator(dir / "blobs")) {
    std::ofstream out(e.path(), std::ios::trunc);
    out << "tampered";
  }
  CHECK(code_of([&] { s.get("a.stx"); }) == ErrorCode::Corrupt);
}

TEST_CASE("derived artifacts") {
  testing::TempDir dir;
  VersionedStore s(dir.path(), fast());
  s.put_derived("linked", "a/b.stx", Revision{3}, "bytes");
  CHECK(s.get_derived("linked", "a/b.stx", Revision{3}) == std::optional<std::string>("bytes"));
  CHECK_FALSE(s.get_derived("linked", "a/b.stx", Revision{2}).has_value());
  CHECK(std::filesystem::exists(dir / "derived" / "linked" / "3" / "a" / "b.stx"));
}

TEST_CASE("replay against the map oracle") {
  testing::TempDir dir;
  VersionedStore s(dir.path(), fast());
  auto outcome = testing::replay_store(s, 0x570e0001, 1000);
  for (const auto& f : outcome.failures) MESSAGE(f);
  CHECK(outcome.ok());
  CHECK(outcome.commits > 100);
}

TEST_CASE("crash recovery at every failpoint") {
  for (const char* point : {"after-blobs", "before-log-append", "mid-log-append", "after-log-append",
                            "after-index-update"}) {
    CAPTURE(point);
    testing::TempDir dir;
    auto r = testing::crash_at(dir.path(), point, 5);
    CHECK(r.child_crashed);
    CHECK(r.committed_intact);
    CHECK(r.next_commit_ok);
    // A record is durable once fully appended; before that it never happened.
    bool durable = std::string(point) == "after-log-append" || std::string(point) == "after-index-update";
    CHECK(r.crashed_commit_present == durable);
    CHECK(r.head_after == (durable ? 6u : 5u));
  }
}

TEST_CASE("diff of identical revisions is empty") {
  testing::TempDir dir;
  VersionedStore s(dir.path(), fast());
  s.commit({Change::put("a.stx", "1\n2\n3\n")}, "me", "1");
  CHECK(s.diff("a.stx", Revision{1}, Revision{1}).empty());
}

TEST_CASE("one changed line is one hunk") {
  testing::TempDir dir;
  VersionedStore s(dir.path(), fast());
  s.commit({Change::put("a.stx", "1\n2\n3\n")}, "me", "1");
  s.commit({Change::put("a.stx", "1\ntwo\n3\n")}, "me", "2");
  auto hunks = s.diff("a.stx", Revision{1}, Revision{2});
  REQUIRE(hunks.size() == 1);
  CHECK(hunks[0].old_start == 1);
  CHECK(hunks[0].removed == std::vector<std::string>{"2\n"});
  CHECK(hunks[0].added == std::vector<std::string>{"two\n"});
  CHECK(code_of([&] { s.diff("zz.stx", Revision{1}, Revision{2}); }) == ErrorCode::NotFound);
  CHECK(code_of([&] { s.diff("a.stx", Revision{1}, Revision{9}); }) == ErrorCode::NoSuchRevision);
}

TEST_CASE("patch oracle over random text pairs") {
  testing::Rng rng(0xd1ff0001);
  for (int i = 0; i < 500; ++i) {
    auto a = random_text(rng);
    auto b = random_text(rng);
    auto hunks = store::diff_lines(a, b);
    CHECK(store::apply_hunks(a, hunks) == b);
    if (a == b) CHECK(hunks.empty());
  }
}

TEST_CASE("diff is minimal") {
  testing::Rng rng(0xd1ff0002);
  for (int i = 0; i < 200; ++i) {
    auto a = random_text(rng);
    auto b = random_text(rng);
    auto la = store::split_lines(a);
    auto lb = store::split_lines(b);
    // Edit distance with insertions and deletions only equals |a|+|b|-2*LCS.
    std::vector<std::vector<std::size_t>> lcs(la.size() + 1, std::vector<std::size_t>(lb.size() + 1, 0));
    for (std::size_t x = la.size(); x-- > 0;) {
      for (std::size_t y = lb.size(); y-- > 0;) {
        lcs[x][y] = la[x] == lb[y] ? lcs[x + 1][y + 1] + 1 : std::max(lcs[x + 1][y], lcs[x][y + 1]);
      }
    }
    std::size_t edits = 0;
    for (const auto& h : store::diff_lines(a, b)) edits += h.removed.size() + h.added.size();
    CHECK(edits == la.size() + lb.size() - 2 * lcs[0][0]);
  }
}

TEST_CASE("split_lines keeps terminators") {
  CHECK(store::split_lines("") == std::vector<std::string>{});
  CHECK(store::split_lines("a\nb") == std::vector<std::string>{"a\n", "b"});
  CHECK(store::split_lines("a\n\n") == std::vector<std::string>{"a\n", "\n"});
}

}  // TEST_SUITE
