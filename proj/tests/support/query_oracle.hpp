#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "support/fs_support.hpp"
#include "triples/query.hpp"
#include "triples/triple.hpp"

namespace testing {

using planetary::triples::Node;
using planetary::triples::PatternTerm;
using planetary::triples::Query;
using planetary::triples::Triple;
using planetary::triples::TriplePattern;

inline Node random_subject(Rng& rng) { return Node::iri("n" + std::to_string(uniform(rng, 0, 11))); }
inline Node random_predicate(Rng& rng) { return Node::iri("p" + std::to_string(uniform(rng, 0, 2))); }
inline Node random_object(Rng& rng) {
  if (chance(rng, 0.15)) return Node::lit("v" + std::to_string(uniform(rng, 0, 3)));
  return random_subject(rng);
}

inline std::vector<Triple> random_triples(Rng& rng, std::size_t max) {
  std::vector<Triple> out;
  for (std::size_t i = 0, n = uniform(rng, 0, max); i < n; ++i) {
    out.push_back({random_subject(rng), random_predicate(rng), random_object(rng)});
  }
  return out;
}

// <= 3 patterns over <= 2 distinct variables; every selected variable used.
inline Query random_query(Rng& rng, bool allow_transitive) {
  static const char* kVars[] = {"x", "y"};
  Query q;
  std::set<std::string> used;
  auto term = [&](int position) {
    if (chance(rng, position == 1 ? 0.2 : 0.55)) {
      std::string v = kVars[uniform(rng, 0, 1)];
      used.insert(v);
      return PatternTerm::var(v);
    }
    if (position == 0) return PatternTerm::term(random_subject(rng));
    if (position == 1) return PatternTerm::term(random_predicate(rng));
    return PatternTerm::term(random_object(rng));
  };
  for (std::size_t i = 0, n = uniform(rng, 1, 3); i < n; ++i) {
    TriplePattern p;
    p.subject = term(0);
    p.predicate = term(1);
    p.object = term(2);
    if (allow_transitive && !p.predicate.is_variable && chance(rng, 0.4)) p.transitive = true;
    q.patterns.push_back(std::move(p));
  }
  for (const auto& v : used) {
    if (chance(rng, 0.6)) q.select.push_back(v);
  }
  if (chance(rng, 0.3)) std::reverse(q.select.begin(), q.select.end());
  return q;
}

// Answers by trying every assignment of graph nodes to the variables.
class EnumerationOracle {
 public:
  explicit EnumerationOracle(const std::vector<Triple>& triples)
      : facts_(triples.begin(), triples.end()) {
    for (const auto& t : facts_) {
      domain_.insert(t.subject);
      domain_.insert(t.predicate);
      domain_.insert(t.object);
    }
  }

  std::set<std::vector<Node>> answer(const Query& q) const {
    std::vector<std::string> vars;
    for (const auto& p : q.patterns) {
      for (const auto* t : {&p.subject, &p.predicate, &p.object}) {
        if (t->is_variable && std::find(vars.begin(), vars.end(), t->variable) == vars.end()) {
          vars.push_back(t->variable);
        }
      }
    }
    const auto& select = q.select.empty() ? vars : q.select;
    std::vector<Node> domain(domain_.begin(), domain_.end());
    std::set<std::vector<Node>> out;
    std::map<std::string, Node> env;
    std::function<void(std::size_t)> assign = [&](std::size_t i) {
      if (i == vars.size()) {
        for (const auto& p : q.patterns) {
          if (!holds(p, env)) return;
        }
        std::vector<Node> row;
        for (const auto& v : select) row.push_back(env.at(v));
        out.insert(row);
        return;
      }
      for (const auto& n : domain) {
        env[vars[i]] = n;
        assign(i + 1);
      }
    };
    assign(0);
    return out;
  }

 private:
  static const Node& value(const PatternTerm& t, const std::map<std::string, Node>& env) {
    return t.is_variable ? env.at(t.variable) : t.constant;
  }

  bool holds(const TriplePattern& p, const std::map<std::string, Node>& env) const {
    const Node& s = value(p.subject, env);
    const Node& pr = value(p.predicate, env);
    const Node& o = value(p.object, env);
    if (!p.transitive) return facts_.count(Triple{s, pr, o}) != 0;
    // Depth-first search for a path of length >= 1.
    std::set<Node> seen;
    std::vector<Node> stack{s};
    while (!stack.empty()) {
      Node cur = stack.back();
      stack.pop_back();
      for (const auto& t : facts_) {
        if (t.subject != cur || t.predicate != pr) continue;
        if (t.object == o) return true;
        if (seen.insert(t.object).second) stack.push_back(t.object);
      }
    }
    return false;
  }

  std::set<Triple> facts_;
  std::set<Node> domain_;
};

inline std::set<std::vector<Node>> rows_of(const Query& q,
                                           const std::vector<planetary::triples::Binding>& bindings) {
  auto vars = planetary::triples::query_variables(q);
  const auto& select = q.select.empty() ? vars : q.select;
  std::set<std::vector<Node>> out;
  for (const auto& b : bindings) {
    std::vector<Node> row;
    for (const auto& v : select) row.push_back(b.at(v));
    out.insert(row);
  }
  return out;
}

}  // namespace testing
