#include "portal/server.hpp"

#include <atomic>
#include <chrono>
#include <random>
#include <thread>

#include "common/error.hpp"
#include "common/text.hpp"
#include "httplib.h"
#include "json.hpp"
#include "portal/views.hpp"
#include "render/html.hpp"

namespace planetary::portal {

namespace {

using nlohmann::ordered_json;

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotFound:
    case ErrorCode::NoSuchRevision:
    case ErrorCode::UnknownNode:
    case ErrorCode::UnknownFragment:
    case ErrorCode::UnknownThread:
      return 404;
    case ErrorCode::AuthFailed:
      return 401;
    case ErrorCode::Corrupt:
    case ErrorCode::Io:
    case ErrorCode::BindFailed:
      return 500;
    case ErrorCode::InvalidArgument:
    case ErrorCode::InvalidPath:
    case ErrorCode::InvalidTermPath:
    case ErrorCode::EmptyCommit:
    case ErrorCode::EmptyBody:
    case ErrorCode::MalformedQuery:
      return 400;
  }
  return 500;
}

void send_json(httplib::Response& res, const ordered_json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, std::string_view code,
                const std::string& message, ordered_json detail = nullptr) {
  send_json(res, {{"code", code}, {"message", message}, {"detail", std::move(detail)}}, status);
}

std::optional<std::uint64_t> revision_param(const httplib::Request& req, const char* name) {
  if (!req.has_param(name)) return std::nullopt;
  const auto v = req.get_param_value(name);
  if (v.empty() || v.size() > 19 || v.find_first_not_of("0123456789") != std::string::npos) {
    throw Error(ErrorCode::InvalidArgument, std::string("bad revision parameter ") + name);
  }
  return std::stoull(v);
}

std::string required_param(const httplib::Request& req, const char* name) {
  if (!req.has_param(name)) {
    throw Error(ErrorCode::InvalidArgument, std::string("missing parameter ") + name);
  }
  return req.get_param_value(name);
}

nlohmann::json json_body(const httplib::Request& req) {
  try {
    auto j = nlohmann::json::parse(req.body);
    if (!j.is_object()) throw Error(ErrorCode::InvalidArgument, "request body must be an object");
    return j;
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorCode::InvalidArgument, "request body is not valid JSON");
  }
}

std::string string_field(const nlohmann::json& j, const char* name, bool required = true) {
  const auto it = j.find(name);
  if (it == j.end() || it->is_null()) {
    if (required) throw Error(ErrorCode::InvalidArgument, std::string("missing field ") + name);
    return {};
  }
  if (!it->is_string()) {
    throw Error(ErrorCode::InvalidArgument, std::string("field ") + name + " must be a string");
  }
  return it->get<std::string>();
}

ordered_json thread_json(const services::DiscussionThread& t) {
  return services::thread_to_json(t);
}

ordered_json threads_json(const std::vector<services::DiscussionThread>& ts) {
  auto out = ordered_json::array();
  for (const auto& t : ts) out.push_back(thread_json(t));
  return out;
}

ordered_json folds_json(const std::string& session, const render::FoldState& folds) {
  return {{"session", session}, {"folds", std::vector<std::string>(folds.begin(), folds.end())}};
}

std::string new_session_id() {
  static thread_local std::mt19937_64 rng{std::random_device{}()};
  char buf[33];
  std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(rng()),
                static_cast<unsigned long long>(rng()));
  return buf;
}

}  // namespace

struct Server::Impl {
  Portal& portal;
  httplib::Server http;
  std::atomic<bool> started{false};
  std::atomic<bool> finished{false};
  std::atomic<bool> stopping{false};

  explicit Impl(Portal& p) : portal(p) {
    // Address reuse only: a port already being served must fail to bind.
    http.set_socket_options([](socket_t sock) {
      int yes = 1;
      ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
    });
    // Small JSON responses must not wait on delayed ACKs.
    http.set_tcp_nodelay(true);
    routes();
  }

  void authorize(const httplib::Request& req) const {
    const auto token = req.get_header_value(kHeaderWriteToken);
    if (token.empty()) throw Error(ErrorCode::AuthFailed, "write token required");
    portal.authorize(token);
  }

  render::FoldState session_folds(const httplib::Request& req) const {
    const auto session = req.get_header_value(kHeaderSession);
    return session.empty() ? render::FoldState{} : portal.folds(session);
  }

  void stamp(httplib::Response& res, std::uint64_t revision) const {
    res.set_header(kHeaderRevision, std::to_string(revision));
  }

  // Runs `body`, turning errors into structured responses.
  template <typename F>
  httplib::Server::Handler guarded(F body) {
    return [body](const httplib::Request& req, httplib::Response& res) {
      try {
        body(req, res);
      } catch (const Error& e) {
        send_error(res, http_status(e.code()), error_code_name(e.code()), e.what());
      } catch (const std::exception& e) {
        send_error(res, 500, "Internal", e.what());
      }
    };
  }

  // Read-only routes answer from one pinned snapshot.
  template <typename F>
  httplib::Server::Handler reading(F body) {
    return guarded([this, body](const httplib::Request& req, httplib::Response& res) {
      Portal::ReadPin pin(portal);
      body(req, res);
    });
  }

  void routes() {
    http.Get(R"(/doc/(.+)/source)", reading([this](const auto& req, auto& res) {
      const auto path = document_path(req.matches[1].str());
      const auto rev = revision_param(req, "rev");
      stamp(res, portal.head());
      res.set_content(portal.source(path, rev), "text/plain; charset=utf-8");
    }));

    http.Get(R"(/doc/(.+))", reading([this](const auto& req, auto& res) {
      const auto path = document_path(req.matches[1].str());
      const auto r = portal.render(path, revision_param(req, "rev"), session_folds(req));
      stamp(res, r.snapshot);
      res.set_header("X-Document-Revision", std::to_string(r.revision));
      res.set_content(r.html, "text/html; charset=utf-8");
    }));

    http.Get(R"(/fragment/(.+))", reading([this](const auto& req, auto& res) {
      stamp(res, portal.head());
      res.set_content(portal.render_fragment(req.matches[1].str(), session_folds(req)),
                      "text/html; charset=utf-8");
    }));

    http.Get("/definition", reading([this](const auto& req, auto& res) {
      const auto d = portal.definition(required_param(req, "symbol"));
      stamp(res, portal.head());
      send_json(res, definition_to_json(d));
    }));

    http.Get("/prereq", reading([this](const auto& req, auto& res) {
      const auto uri = required_param(req, "uri");
      const auto format = req.has_param("format") ? req.get_param_value("format") : "json";
      std::set<graph::EdgeKind> kinds;
      if (req.has_param("kinds")) {
        for (const auto& k : text::split(req.get_param_value("kinds"), ',')) {
          const auto kind = graph::edge_kind_from_name(k);
          if (!kind) throw Error(ErrorCode::InvalidArgument, "unknown edge kind " + k);
          kinds.insert(*kind);
        }
      }
      const auto view = portal.prerequisites(uri, kinds);
      stamp(res, portal.head());
      if (format == "svg") {
        res.set_content(graph::export_svg(view.result, view.labels), "image/svg+xml");
      } else if (format == "dot") {
        res.set_content(graph::export_dot(view.result, view.labels), "text/vnd.graphviz");
      } else if (format == "json") {
        send_json(res, prereq_to_json(view));
      } else {
        throw Error(ErrorCode::InvalidArgument, "format must be svg, json or dot");
      }
    }));

    http.Get("/services", reading([this](const auto& req, auto& res) {
      auto out = ordered_json::array();
      for (const auto& d : portal.services_for(required_param(req, "fragment"))) {
        out.push_back({{"id", d.name}, {"label", d.label}, {"icon", d.icon}});
      }
      stamp(res, portal.head());
      send_json(res, out);
    }));

    http.Get("/threads", reading([this](const auto& req, auto& res) {
      if (req.has_param("fragment")) {
        send_json(res, threads_json(portal.threads().by_fragment(req.get_param_value("fragment"))));
      } else if (req.has_param("doc")) {
        send_json(res, threads_json(
                           portal.threads_for_document(document_path(req.get_param_value("doc")))));
      } else {
        throw Error(ErrorCode::InvalidArgument, "threads need a doc or fragment parameter");
      }
    }));

    http.Post("/threads", guarded([this](const auto& req, auto& res) {
      authorize(req);
      const nlohmann::json j = json_body(req);
      const auto t = portal.open_thread(string_field(j, "fragment"), string_field(j, "title", false),
                                        string_field(j, "author", false), string_field(j, "body"));
      send_json(res, thread_json(t), 201);
    }));

    http.Post(R"(/threads/([^/]+)/posts)", guarded([this](const auto& req, auto& res) {
      authorize(req);
      const nlohmann::json j = json_body(req);
      send_json(res, thread_json(portal.threads().add_post(
                         req.matches[1].str(), string_field(j, "author", false),
                         string_field(j, "body"))));
    }));

    http.Get("/folds", reading([this](const auto& req, auto& res) {
      const auto session = req.get_header_value(kHeaderSession);
      send_json(res, folds_json(session, session.empty() ? render::FoldState{}
                                                         : portal.folds(session)));
    }));

    http.Post("/folds", guarded([this](const auto& req, auto& res) {
      auto session = req.get_header_value(kHeaderSession);
      if (session.empty()) session = new_session_id();
      const nlohmann::json j = json_body(req);
      const auto folded = j.find("folded");
      if (folded == j.end() || !folded->is_boolean()) {
        throw Error(ErrorCode::InvalidArgument, "field folded must be a boolean");
      }
      const auto state = portal.set_fold(session, string_field(j, "fragment"), folded->get<bool>());
      res.set_header(kHeaderSession, session);
      send_json(res, folds_json(session, state));
    }));

    http.Post("/ingest", guarded([this](const auto& req, auto& res) {
      authorize(req);
      const nlohmann::json j = json_body(req);
      auto author = string_field(j, "author", false);
      if (author.empty()) author = "portal";
      const auto report = portal.ingest(string_field(j, "path"), string_field(j, "text"),
                                        author, string_field(j, "message", false));
      stamp(res, portal.head());
      if (report.status == IngestStatus::Ok) {
        send_json(res, report_to_json(report));
      } else {
        send_error(res, 422, "ParseFailed", "document rejected", report_to_json(report));
      }
    }));

    http.Post("/query", reading([this](const auto& req, auto& res) {
      std::string text = req.body;
      if (const auto first = req.body.find_first_not_of(" \t\r\n");
          first != std::string::npos && req.body[first] == '{') {
        text = string_field(json_body(req), "query");
      }
      std::uint64_t revision = 0;
      auto body = run_query(portal, text, &revision);
      stamp(res, revision);
      send_json(res, body);
    }));

    http.Get(R"(/msc/(.*))", reading([this](const auto& req, auto& res) {
      const auto rows = portal.msc(req.matches[1].str());
      stamp(res, portal.head());
      send_json(res, msc_to_json(rows));
    }));

    http.Get(R"(/history/(.+))", reading([this](const auto& req, auto& res) {
      send_json(res, history_to_json(portal.history(document_path(req.matches[1].str()))));
    }));

    http.Get(R"(/diff/(.+))", reading([this](const auto& req, auto& res) {
      const auto r1 = revision_param(req, "r1");
      const auto r2 = revision_param(req, "r2");
      if (!r1 || !r2) throw Error(ErrorCode::InvalidArgument, "diff needs r1 and r2");
      res.set_content(portal.diff(document_path(req.matches[1].str()), *r1, *r2),
                      "text/x-diff; charset=utf-8");
    }));

    http.Get(R"(/gutter/(.+))", reading([this](const auto& req, auto& res) {
      const auto data = portal.gutter(document_path(req.matches[1].str()), session_folds(req));
      auto lines = ordered_json::array();
      for (const auto& l : data.lines) {
        lines.push_back({{"line", l.line},
                         {"foldable", l.foldable},
                         {"fold_target", l.fold_target ? ordered_json(*l.fold_target) : nullptr},
                         {"thread_count", l.thread_count},
                         {"threads", l.thread_ids}});
      }
      send_json(res, {{"lines", std::move(lines)}});
    }));

    http.Get("/triples", reading([this](const auto&, auto& res) {
      const auto snap = portal.snapshot();
      stamp(res, snap->revision);
      res.set_content(snap->triples->dump(), "application/n-triples");
    }));

    http.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
      if (!res.body.empty()) return;
      send_error(res, res.status, res.status == 404 ? "NotFound" : "HttpError",
                 "no route for " + req.method + " " + req.path);
    });
  }
};

Server::Server(Portal& portal) : impl_(std::make_unique<Impl>(portal)) {}

Server::~Server() { stop(); }

int Server::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = impl_->http.bind_to_any_port(host);
    if (bound < 0) throw Error(ErrorCode::BindFailed, "cannot bind " + host);
    return bound;
  }
  if (!impl_->http.bind_to_port(host, port)) {
    throw Error(ErrorCode::BindFailed, "cannot bind " + host + ":" + std::to_string(port));
  }
  return port;
}

void Server::run() {
  impl_->started = true;
  if (!impl_->stopping) impl_->http.listen_after_bind();
  impl_->finished = true;
}

void Server::stop() {
  if (!impl_) return;
  impl_->stopping = true;
  if (!impl_->started) return;  // run() will see `stopping` and return
  while (!impl_->http.is_running() && !impl_->finished) {
    std::this_thread::sleep_for(std::chrono::milliseconds(1));
  }
  impl_->http.stop();
}

bool Server::running() const { return impl_->http.is_running(); }

}  // namespace planetary::portal
