#include "triples/triple.hpp"

#include <algorithm>

#include "common/error.hpp"

namespace planetary::triples {

namespace {

std::string escape_literal(std::string_view s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '"': out += "\\\""; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

const std::vector<std::uint32_t> kEmpty;

}  // namespace

std::string vocab::msc_iri(std::string_view code) {
  return std::string(kMscPrefix) + std::string(code);
}

std::string Node::to_ntriples() const {
  if (literal) return "\"" + escape_literal(value) + "\"";
  return "<" + value + ">";
}

std::string Triple::to_ntriples() const {
  return subject.to_ntriples() + " " + predicate.to_ntriples() + " " +
         object.to_ntriples() + " .";
}

TripleGraph::TripleGraph(std::vector<Triple> triples)
    : triples_(std::move(triples)) {
  std::sort(triples_.begin(), triples_.end());
  triples_.erase(std::unique(triples_.begin(), triples_.end()), triples_.end());
  auto intern = [this](const Node& n) -> Id {
    const auto [it, inserted] = lookup_.emplace(n, static_cast<Id>(nodes_.size()));
    if (inserted) nodes_.push_back(n);
    return it->second;
  };
  ids_.reserve(triples_.size());
  for (const auto& t : triples_) {
    ids_.push_back(IdTriple{intern(t.subject), intern(t.predicate), intern(t.object)});
  }
  by_s_.resize(nodes_.size());
  by_p_.resize(nodes_.size());
  by_o_.resize(nodes_.size());
  for (std::uint32_t i = 0; i < ids_.size(); ++i) {
    by_s_[ids_[i].s].push_back(i);
    by_p_[ids_[i].p].push_back(i);
    by_o_[ids_[i].o].push_back(i);
  }
}

std::string TripleGraph::dump() const {
  std::vector<std::string> lines;
  lines.reserve(triples_.size());
  for (const auto& t : triples_) lines.push_back(t.to_ntriples());
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (const auto& l : lines) {
    out += l;
    out.push_back('\n');
  }
  return out;
}

std::optional<TripleGraph::Id> TripleGraph::find(const Node& n) const {
  const auto it = lookup_.find(n);
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

const std::vector<std::uint32_t>& TripleGraph::by_subject(Id s) const {
  return s < by_s_.size() ? by_s_[s] : kEmpty;
}
const std::vector<std::uint32_t>& TripleGraph::by_predicate(Id p) const {
  return p < by_p_.size() ? by_p_[p] : kEmpty;
}
const std::vector<std::uint32_t>& TripleGraph::by_object(Id o) const {
  return o < by_o_.size() ? by_o_[o] : kEmpty;
}

namespace {

class NTriplesReader {
 public:
  explicit NTriplesReader(std::string_view line) : s_(line) {}

  Node node() {
    skip();
    if (pos_ >= s_.size()) bad("unexpected end of line");
    if (s_[pos_] == '<') {
      const auto end = s_.find('>', pos_);
      if (end == std::string_view::npos) bad("unterminated IRI");
      auto v = std::string(s_.substr(pos_ + 1, end - pos_ - 1));
      pos_ = end + 1;
      return Node::iri(std::move(v));
    }
    if (s_[pos_] == '"') {
      std::string v;
      ++pos_;
      while (true) {
        if (pos_ >= s_.size()) bad("unterminated literal");
        const char c = s_[pos_++];
        if (c == '"') break;
        if (c == '\\') {
          if (pos_ >= s_.size()) bad("dangling escape");
          const char e = s_[pos_++];
          switch (e) {
            case 'n': v.push_back('\n'); break;
            case 'r': v.push_back('\r'); break;
            case 't': v.push_back('\t'); break;
            default: v.push_back(e);
          }
          continue;
        }
        v.push_back(c);
      }
      return Node::lit(std::move(v));
    }
    bad("expected '<' or '\"'");
  }

  void end() {
    skip();
    if (pos_ >= s_.size() || s_[pos_] != '.') bad("expected '.'");
    ++pos_;
    skip();
    if (pos_ != s_.size()) bad("trailing characters");
  }

 private:
  [[noreturn]] void bad(const std::string& what) {
    throw Error(ErrorCode::InvalidArgument, "N-Triples: " + what);
  }
  void skip() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }
  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<Triple> parse_ntriples(std::string_view text) {
  std::vector<Triple> out;
  std::size_t start = 0;
  while (start < text.size()) {
    auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    const auto line = text.substr(start, nl - start);
    start = nl + 1;
    if (line.empty() || line.front() == '#') continue;
    NTriplesReader r(line);
    Triple t;
    t.subject = r.node();
    t.predicate = r.node();
    t.object = r.node();
    r.end();
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace planetary::triples
