#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace planetary::store {

// A contiguous change: `removed` lines starting at old_start (0-based) are
// replaced by `added` lines, which start at new_start in the new text.
struct Hunk {
  std::size_t old_start = 0;
  std::size_t new_start = 0;
  std::vector<std::string> removed;
  std::vector<std::string> added;

  friend bool operator==(const Hunk&, const Hunk&) = default;
};

// Splits after each '\n'; every line keeps its terminator, so only the last
// line may lack one and concatenation reproduces the input exactly.
std::vector<std::string> split_lines(std::string_view text);

// Minimal line edit script (Myers' O(ND) algorithm); adjacent deletions and
// insertions are grouped into one hunk.
std::vector<Hunk> diff_lines(std::string_view before, std::string_view after);

// Applies hunks produced by diff_lines(before, after) to `before`.
std::string apply_hunks(std::string_view before, const std::vector<Hunk>& hunks);

std::string format_unified(const std::vector<Hunk>& hunks);

}  // namespace planetary::store
