#include "triples/query.hpp"

#include <algorithm>
#include <deque>
#include <optional>
#include <set>
#include <unordered_map>

#include "common/error.hpp"

namespace planetary::triples {

namespace {

using Id = TripleGraph::Id;
using Row = std::vector<std::optional<Id>>;

[[noreturn]] void malformed(const std::string& what) {
  throw Error(ErrorCode::MalformedQuery, what);
}

// A pattern position after resolving constants against the graph.
struct Slot {
  int var = -1;              // variable index, or -1 for a constant
  std::optional<Id> value;   // constant id; nullopt if not in the graph
};

class Evaluator {
 public:
  Evaluator(const TripleGraph& graph, const Query& q) : g_(graph) {
    vars_ = query_variables(q);
    for (const auto& p : q.patterns) {
      compiled_.push_back({slot(p.subject), slot(p.predicate), slot(p.object),
                           p.transitive});
    }
  }

  std::vector<Row> run() {
    std::vector<Row> rows{Row(vars_.size())};
    std::vector<bool> done(compiled_.size(), false);
    for (std::size_t step = 0; step < compiled_.size(); ++step) {
      const auto next = pick(done, rows.empty() ? Row(vars_.size()) : rows.front());
      done[next] = true;
      std::vector<Row> out;
      for (const auto& row : rows) extend(compiled_[next], row, out);
      rows = std::move(out);
      if (rows.empty()) break;
    }
    return rows;
  }

  const std::vector<std::string>& variables() const { return vars_; }

 private:
  struct Compiled {
    Slot s, p, o;
    bool transitive;
  };

  Slot slot(const PatternTerm& t) const {
    Slot s;
    if (t.is_variable) {
      s.var = static_cast<int>(std::find(vars_.begin(), vars_.end(), t.variable) -
                               vars_.begin());
    } else {
      s.value = g_.find(t.constant);
    }
    return s;
  }

  // Next pattern: the one with the most positions already fixed (constants or
  // variables bound in the current rows). Order never changes the result.
  std::size_t pick(const std::vector<bool>& done, const Row& sample) const {
    std::size_t best = 0;
    int best_score = -1;
    for (std::size_t i = 0; i < compiled_.size(); ++i) {
      if (done[i]) continue;
      int score = 0;
      for (const auto* s : {&compiled_[i].s, &compiled_[i].p, &compiled_[i].o}) {
        if (s->var < 0 || sample[static_cast<std::size_t>(s->var)]) ++score;
      }
      if (score > best_score) {
        best_score = score;
        best = i;
      }
    }
    return best;
  }

  // Value a slot is fixed to under `row`: constant, bound variable, or free.
  // `missing` is set for constants absent from the graph.
  std::optional<Id> fixed(const Slot& s, const Row& row, bool& missing) const {
    if (s.var < 0) {
      if (!s.value) missing = true;
      return s.value;
    }
    return row[static_cast<std::size_t>(s.var)];
  }

  static bool bind(Row& row, const Slot& s, Id value) {
    if (s.var < 0) return true;
    auto& cell = row[static_cast<std::size_t>(s.var)];
    if (cell && *cell != value) return false;
    cell = value;
    return true;
  }

  void extend(const Compiled& c, const Row& row, std::vector<Row>& out) {
    bool missing = false;
    const auto s = fixed(c.s, row, missing);
    const auto p = fixed(c.p, row, missing);
    const auto o = fixed(c.o, row, missing);
    if (missing) return;

    if (c.transitive) {
      transitive(c, row, s, *p, o, out);
      return;
    }
    const std::vector<std::uint32_t>* candidates = nullptr;
    if (s) {
      candidates = &g_.by_subject(*s);
    } else if (o) {
      candidates = &g_.by_object(*o);
    } else if (p) {
      candidates = &g_.by_predicate(*p);
    }
    auto consider = [&](const TripleGraph::IdTriple& t) {
      if ((s && t.s != *s) || (p && t.p != *p) || (o && t.o != *o)) return;
      Row next = row;
      if (bind(next, c.s, t.s) && bind(next, c.p, t.p) && bind(next, c.o, t.o)) {
        out.push_back(std::move(next));
      }
    };
    if (candidates != nullptr) {
      for (const auto idx : *candidates) consider(g_.id_triples()[idx]);
    } else {
      for (const auto& t : g_.id_triples()) consider(t);
    }
  }

  // Nodes reachable from `from` over >= 1 edges of `pred`, forwards or
  // backwards.
  const std::vector<Id>& reach(Id pred, Id from, bool forward) {
    auto& cache = forward ? forward_ : backward_;
    const auto key = (static_cast<std::uint64_t>(pred) << 32) | from;
    if (const auto it = cache.find(key); it != cache.end()) return it->second;
    std::vector<Id> result;
    std::set<Id> seen;
    std::deque<Id> queue{from};
    while (!queue.empty()) {
      const auto cur = queue.front();
      queue.pop_front();
      const auto& edges = forward ? g_.by_subject(cur) : g_.by_object(cur);
      for (const auto idx : edges) {
        const auto& t = g_.id_triples()[idx];
        if (t.p != pred) continue;
        const auto nxt = forward ? t.o : t.s;
        if (seen.insert(nxt).second) {
          result.push_back(nxt);
          queue.push_back(nxt);
        }
      }
    }
    std::sort(result.begin(), result.end());
    return cache.emplace(key, std::move(result)).first->second;
  }

  void transitive(const Compiled& c, const Row& row, std::optional<Id> s, Id p,
                  std::optional<Id> o, std::vector<Row>& out) {
    auto emit = [&](Id subject, Id object) {
      Row next = row;
      if (bind(next, c.s, subject) && bind(next, c.o, object)) {
        out.push_back(std::move(next));
      }
    };
    if (s) {
      const auto& r = reach(p, *s, true);
      if (o) {
        if (std::binary_search(r.begin(), r.end(), *o)) emit(*s, *o);
      } else {
        for (const auto n : r) emit(*s, n);
      }
      return;
    }
    if (o) {
      for (const auto n : reach(p, *o, false)) emit(n, *o);
      return;
    }
    std::set<Id> subjects;
    for (const auto idx : g_.by_predicate(p)) subjects.insert(g_.id_triples()[idx].s);
    for (const auto subject : subjects) {
      for (const auto n : reach(p, subject, true)) emit(subject, n);
    }
  }

  const TripleGraph& g_;
  std::vector<std::string> vars_;
  std::vector<Compiled> compiled_;
  std::unordered_map<std::uint64_t, std::vector<Id>> forward_, backward_;
};

}  // namespace

std::vector<std::string> query_variables(const Query& q) {
  std::vector<std::string> vars;
  auto note = [&](const PatternTerm& t) {
    if (t.is_variable &&
        std::find(vars.begin(), vars.end(), t.variable) == vars.end()) {
      vars.push_back(t.variable);
    }
  };
  for (const auto& p : q.patterns) {
    note(p.subject);
    note(p.predicate);
    note(p.object);
  }
  return vars;
}

std::vector<Binding> query(const TripleGraph& graph, const Query& q) {
  if (q.patterns.empty()) malformed("query has no patterns");
  for (const auto& p : q.patterns) {
    if (p.transitive && p.predicate.is_variable) {
      malformed("transitive pattern needs a constant predicate");
    }
    for (const auto* t : {&p.subject, &p.predicate, &p.object}) {
      if (t->is_variable && t->variable.empty()) malformed("empty variable name");
    }
  }
  const auto vars = query_variables(q);
  const auto select = q.select.empty() ? vars : q.select;
  std::vector<std::size_t> columns;
  for (const auto& name : select) {
    const auto it = std::find(vars.begin(), vars.end(), name);
    if (it == vars.end()) malformed("selected variable ?" + name + " is not used");
    columns.push_back(static_cast<std::size_t>(it - vars.begin()));
  }

  Evaluator eval(graph, q);
  std::set<std::vector<Node>> projected;
  for (const auto& row : eval.run()) {
    std::vector<Node> values;
    values.reserve(columns.size());
    for (const auto col : columns) values.push_back(graph.node(*row[col]));
    projected.insert(std::move(values));
  }
  std::vector<Binding> out;
  out.reserve(projected.size());
  for (const auto& values : projected) {
    Binding b;
    for (std::size_t i = 0; i < select.size(); ++i) b.emplace(select[i], values[i]);
    out.push_back(std::move(b));
  }
  return out;
}

}  // namespace planetary::triples
