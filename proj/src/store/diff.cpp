#include "store/diff.hpp"

#include <stdexcept>

namespace planetary::store {

std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    const auto nl = text.find('\n', start);
    const auto end = nl == std::string_view::npos ? text.size() : nl + 1;
    lines.emplace_back(text.substr(start, end - start));
    start = end;
  }
  return lines;
}

namespace {

std::string strip_newline(const std::string& line) {
  if (!line.empty() && line.back() == '\n') {
    return line.substr(0, line.size() - 1);
  }
  return line + "\n\\ No newline at end of file";
}

enum class Op { Keep, Delete, Insert };

std::vector<Op> myers(const std::vector<std::string>& a,
                      const std::vector<std::string>& b) {
  const auto n = static_cast<long>(a.size());
  const auto m = static_cast<long>(b.size());
  const long max = n + m;
  const long offset = max + 1;
  std::vector<long> v(static_cast<std::size_t>(2 * max + 3), 0);
  std::vector<std::vector<long>> trace;
  long found_d = -1;
  for (long d = 0; d <= max; ++d) {
    trace.push_back(v);
    for (long k = -d; k <= d; k += 2) {
      long x;
      if (k == -d || (k != d && v[k - 1 + offset] < v[k + 1 + offset])) {
        x = v[k + 1 + offset];
      } else {
        x = v[k - 1 + offset] + 1;
      }
      long y = x - k;
      while (x < n && y < m && a[x] == b[y]) {
        ++x;
        ++y;
      }
      v[k + offset] = x;
      if (x >= n && y >= m) {
        found_d = d;
        break;
      }
    }
    if (found_d >= 0) break;
  }

  std::vector<Op> ops;
  long x = n;
  long y = m;
  for (long d = found_d; d > 0; --d) {
    const auto& pv = trace[static_cast<std::size_t>(d)];
    const long k = x - y;
    long prev_k;
    if (k == -d || (k != d && pv[k - 1 + offset] < pv[k + 1 + offset])) {
      prev_k = k + 1;
    } else {
      prev_k = k - 1;
    }
    const long prev_x = pv[prev_k + offset];
    const long prev_y = prev_x - prev_k;
    while (x > prev_x && y > prev_y) {
      ops.push_back(Op::Keep);
      --x;
      --y;
    }
    ops.push_back(x == prev_x ? Op::Insert : Op::Delete);
    x = prev_x;
    y = prev_y;
  }
  while (x > 0 && y > 0) {
    ops.push_back(Op::Keep);
    --x;
    --y;
  }
  return {ops.rbegin(), ops.rend()};
}

}  // namespace

std::vector<Hunk> diff_lines(std::string_view before, std::string_view after) {
  const auto a = split_lines(before);
  const auto b = split_lines(after);
  std::vector<Hunk> hunks;
  std::size_t i = 0;
  std::size_t j = 0;
  Hunk* open = nullptr;
  for (const auto op : myers(a, b)) {
    if (op == Op::Keep) {
      open = nullptr;
      ++i;
      ++j;
      continue;
    }
    if (open == nullptr) {
      hunks.push_back(Hunk{i, j, {}, {}});
      open = &hunks.back();
    }
    if (op == Op::Delete) {
      open->removed.push_back(a[i++]);
    } else {
      open->added.push_back(b[j++]);
    }
  }
  return hunks;
}

std::string apply_hunks(std::string_view before,
                        const std::vector<Hunk>& hunks) {
  const auto a = split_lines(before);
  std::vector<std::string> out;
  std::size_t i = 0;
  for (const auto& h : hunks) {
    if (h.old_start < i || h.old_start + h.removed.size() > a.size()) {
      throw std::invalid_argument("hunk does not apply");
    }
    while (i < h.old_start) out.push_back(a[i++]);
    for (const auto& r : h.removed) {
      if (a[i++] != r) throw std::invalid_argument("hunk context mismatch");
    }
    for (const auto& line : h.added) out.push_back(line);
  }
  while (i < a.size()) out.push_back(a[i++]);
  std::string text;
  for (const auto& l : out) text += l;
  return text;
}

std::string format_unified(const std::vector<Hunk>& hunks) {
  std::string out;
  for (const auto& h : hunks) {
    out += "@@ -" + std::to_string(h.old_start + 1) + "," +
           std::to_string(h.removed.size()) + " +" +
           std::to_string(h.new_start + 1) + "," +
           std::to_string(h.added.size()) + " @@\n";
    for (const auto& r : h.removed) out += "-" + strip_newline(r) + "\n";
    for (const auto& a : h.added) out += "+" + strip_newline(a) + "\n";
  }
  return out;
}

}  // namespace planetary::store
