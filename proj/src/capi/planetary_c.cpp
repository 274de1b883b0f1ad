#include "planetary/planetary.h"

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <mutex>
#include <string>

#include "common/error.hpp"
#include "graph/export.hpp"
#include "portal/portal.hpp"
#include "portal/server.hpp"
#include "portal/views.hpp"

using planetary::Error;
using planetary::ErrorCode;
namespace portal = planetary::portal;

struct plnt_portal {
  std::unique_ptr<portal::Portal> core;
  std::mutex server_mutex;
  std::unique_ptr<portal::Server> server;
  bool stop_requested = false;
};

namespace {

thread_local std::string last_error;

plnt_status status_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return PLNT_E_INVALID_ARGUMENT;
    case ErrorCode::InvalidPath: return PLNT_E_INVALID_PATH;
    case ErrorCode::InvalidTermPath: return PLNT_E_INVALID_TERM_PATH;
    case ErrorCode::EmptyCommit: return PLNT_E_EMPTY_COMMIT;
    case ErrorCode::NotFound: return PLNT_E_NOT_FOUND;
    case ErrorCode::NoSuchRevision: return PLNT_E_NO_SUCH_REVISION;
    case ErrorCode::UnknownNode: return PLNT_E_UNKNOWN_NODE;
    case ErrorCode::UnknownFragment: return PLNT_E_UNKNOWN_FRAGMENT;
    case ErrorCode::UnknownThread: return PLNT_E_UNKNOWN_THREAD;
    case ErrorCode::EmptyBody: return PLNT_E_EMPTY_BODY;
    case ErrorCode::MalformedQuery: return PLNT_E_MALFORMED_QUERY;
    case ErrorCode::AuthFailed: return PLNT_E_AUTH_FAILED;
    case ErrorCode::BindFailed: return PLNT_E_BIND_FAILED;
    case ErrorCode::Corrupt: return PLNT_E_CORRUPT;
    case ErrorCode::Io: return PLNT_E_IO;
  }
  return PLNT_E_INTERNAL;
}

plnt_status fail(plnt_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

// Runs `body` with exceptions mapped to status codes.
template <typename F>
plnt_status guarded(F&& body) {
  try {
    last_error.clear();
    return body();
  } catch (const Error& e) {
    return fail(status_of(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(PLNT_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(PLNT_E_INTERNAL, e.what());
  }
}

char* duplicate(const std::string& s) {
  auto* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size());
  out[s.size()] = '\0';
  return out;
}

// Stores `s` into `*out`, or drops it when the caller passed no slot.
void emit(char** out, const std::string& s) {
  if (out != nullptr) *out = duplicate(s);
}

std::string str(const char* s) { return s == nullptr ? std::string() : std::string(s); }

void require(const void* p, const char* what) {
  if (p == nullptr) throw Error(ErrorCode::InvalidArgument, std::string(what) + " is NULL");
}

std::optional<std::uint64_t> revision_arg(std::uint64_t r) {
  return r == 0 ? std::nullopt : std::optional<std::uint64_t>(r);
}

}  // namespace

extern "C" {

const char* plnt_status_name(plnt_status status) {
  switch (status) {
    case PLNT_OK: return "Ok";
    case PLNT_E_INVALID_ARGUMENT: return "InvalidArgument";
    case PLNT_E_INVALID_PATH: return "InvalidPath";
    case PLNT_E_INVALID_TERM_PATH: return "InvalidTermPath";
    case PLNT_E_EMPTY_COMMIT: return "EmptyCommit";
    case PLNT_E_NOT_FOUND: return "NotFound";
    case PLNT_E_NO_SUCH_REVISION: return "NoSuchRevision";
    case PLNT_E_UNKNOWN_NODE: return "UnknownNode";
    case PLNT_E_UNKNOWN_FRAGMENT: return "UnknownFragment";
    case PLNT_E_UNKNOWN_THREAD: return "UnknownThread";
    case PLNT_E_EMPTY_BODY: return "EmptyBody";
    case PLNT_E_MALFORMED_QUERY: return "MalformedQuery";
    case PLNT_E_AUTH_FAILED: return "AuthFailed";
    case PLNT_E_BIND_FAILED: return "BindFailed";
    case PLNT_E_CORRUPT: return "Corrupt";
    case PLNT_E_IO: return "Io";
    case PLNT_E_PARSE_FAILED: return "ParseFailed";
    case PLNT_E_INTERNAL: return "Internal";
  }
  return "Internal";
}

const char* plnt_last_error(void) { return last_error.c_str(); }

void plnt_string_free(char* s) { std::free(s); }

plnt_status plnt_open(const char* data_dir, const char* write_token, plnt_portal** out) {
  return guarded([&] {
    require(data_dir, "data_dir");
    require(out, "out");
    *out = nullptr;
    portal::PortalConfig config;
    config.data_dir = data_dir;
    config.write_token = str(write_token);
    auto handle = std::make_unique<plnt_portal>();
    handle->core = std::make_unique<portal::Portal>(std::move(config));
    *out = handle.release();
    return PLNT_OK;
  });
}

void plnt_close(plnt_portal* portal) {
  if (portal == nullptr) return;
  plnt_stop(portal);
  delete portal;
}

plnt_status plnt_head(plnt_portal* portal, uint64_t* out) {
  return guarded([&] {
    require(portal, "portal");
    require(out, "out");
    *out = portal->core->head();
    return PLNT_OK;
  });
}

plnt_status plnt_ingest(plnt_portal* portal, const char* token, const char* path,
                        const char* text, const char* author, const char* message,
                        char** report_json) {
  return guarded([&] {
    require(portal, "portal");
    require(path, "path");
    require(text, "text");
    portal->core->authorize(str(token));
    const auto report = portal->core->ingest(path, text, str(author), str(message));
    emit(report_json, portal::report_to_json(report).dump());
    if (report.status != portal::IngestStatus::Ok) {
      return fail(PLNT_E_PARSE_FAILED, "document " + report.path + " rejected");
    }
    return PLNT_OK;
  });
}

plnt_status plnt_ingest_dir(plnt_portal* portal, const char* token, const char* dir,
                            const char* author, const char* message, char** reports_json) {
  return guarded([&] {
    require(portal, "portal");
    require(dir, "dir");
    portal->core->authorize(str(token));
    const auto reports = portal->core->ingest_batch(portal::Portal::read_corpus(dir),
                                                    str(author), str(message));
    auto out = nlohmann::ordered_json::array();
    bool ok = true;
    for (const auto& r : reports) {
      out.push_back(portal::report_to_json(r));
      ok = ok && r.status == portal::IngestStatus::Ok;
    }
    emit(reports_json, out.dump());
    return ok ? PLNT_OK : fail(PLNT_E_PARSE_FAILED, "corpus rejected; nothing committed");
  });
}

plnt_status plnt_render(plnt_portal* portal, const char* path, uint64_t revision, char** html) {
  return guarded([&] {
    require(portal, "portal");
    require(path, "path");
    require(html, "html");
    emit(html, portal->core->render(portal::document_path(path), revision_arg(revision), {}).html);
    return PLNT_OK;
  });
}

plnt_status plnt_source(plnt_portal* portal, const char* path, uint64_t revision, char** text) {
  return guarded([&] {
    require(portal, "portal");
    require(path, "path");
    require(text, "text");
    emit(text, portal->core->source(portal::document_path(path), revision_arg(revision)));
    return PLNT_OK;
  });
}

plnt_status plnt_query(plnt_portal* portal, const char* query_text, char** json) {
  return guarded([&] {
    require(portal, "portal");
    require(query_text, "query_text");
    require(json, "json");
    emit(json, portal::run_query(*portal->core, query_text).dump());
    return PLNT_OK;
  });
}

plnt_status plnt_prereq(plnt_portal* portal, const char* uri, const char* format, char** out) {
  return guarded([&] {
    require(portal, "portal");
    require(uri, "uri");
    require(out, "out");
    const auto fmt = format == nullptr ? std::string("json") : std::string(format);
    if (fmt != "svg" && fmt != "dot" && fmt != "json") {
      throw Error(ErrorCode::InvalidArgument, "format must be svg, dot or json");
    }
    const auto view = portal->core->prerequisites(uri);
    if (fmt == "svg") {
      emit(out, planetary::graph::export_svg(view.result, view.labels));
    } else if (fmt == "dot") {
      emit(out, planetary::graph::export_dot(view.result, view.labels));
    } else {
      emit(out, portal::prereq_to_json(view).dump());
    }
    return PLNT_OK;
  });
}

plnt_status plnt_definition(plnt_portal* portal, const char* symbol, char** json) {
  return guarded([&] {
    require(portal, "portal");
    require(symbol, "symbol");
    require(json, "json");
    emit(json, portal::definition_to_json(portal->core->definition(symbol)).dump());
    return PLNT_OK;
  });
}

plnt_status plnt_services(plnt_portal* portal, const char* fragment, char** json) {
  return guarded([&] {
    require(portal, "portal");
    require(fragment, "fragment");
    require(json, "json");
    auto out = nlohmann::ordered_json::array();
    for (const auto& d : portal->core->services_for(fragment)) {
      out.push_back({{"id", d.name}, {"label", d.label}, {"icon", d.icon}});
    }
    emit(json, out.dump());
    return PLNT_OK;
  });
}

plnt_status plnt_msc(plnt_portal* portal, const char* prefix, char** json) {
  return guarded([&] {
    require(portal, "portal");
    require(prefix, "prefix");
    require(json, "json");
    emit(json, portal::msc_to_json(portal->core->msc(prefix)).dump());
    return PLNT_OK;
  });
}

plnt_status plnt_history(plnt_portal* portal, const char* path, char** json) {
  return guarded([&] {
    require(portal, "portal");
    require(path, "path");
    require(json, "json");
    emit(json, portal::history_to_json(portal->core->history(portal::document_path(path))).dump());
    return PLNT_OK;
  });
}

plnt_status plnt_diff(plnt_portal* portal, const char* path, uint64_t r1, uint64_t r2,
                      char** unified) {
  return guarded([&] {
    require(portal, "portal");
    require(path, "path");
    require(unified, "unified");
    emit(unified, portal->core->diff(portal::document_path(path), r1, r2));
    return PLNT_OK;
  });
}

plnt_status plnt_dump_triples(plnt_portal* portal, char** out) {
  return guarded([&] {
    require(portal, "portal");
    require(out, "out");
    emit(out, portal->core->dump_triples());
    return PLNT_OK;
  });
}

plnt_status plnt_dump_graph(plnt_portal* portal, char** out) {
  return guarded([&] {
    require(portal, "portal");
    require(out, "out");
    emit(out, portal->core->dump_graph());
    return PLNT_OK;
  });
}

plnt_status plnt_bind(plnt_portal* portal, const char* listen, int* port) {
  return guarded([&] {
    require(portal, "portal");
    const auto address = portal::parse_listen(
        listen == nullptr ? portal->core->config().listen : std::string(listen));
    std::lock_guard lock(portal->server_mutex);
    if (portal->server) throw Error(ErrorCode::InvalidArgument, "already bound");
    auto server = std::make_unique<portal::Server>(*portal->core);
    const int bound = server->bind(address.host, address.port);
    portal->server = std::move(server);
    if (port != nullptr) *port = bound;
    return PLNT_OK;
  });
}

plnt_status plnt_run(plnt_portal* portal) {
  return guarded([&] {
    require(portal, "portal");
    portal::Server* server = nullptr;
    {
      std::lock_guard lock(portal->server_mutex);
      if (!portal->server) throw Error(ErrorCode::InvalidArgument, "not bound");
      if (portal->stop_requested) return PLNT_OK;
      server = portal->server.get();
    }
    server->run();
    return PLNT_OK;
  });
}

void plnt_stop(plnt_portal* portal) {
  if (portal == nullptr) return;
  std::lock_guard lock(portal->server_mutex);
  portal->stop_requested = true;
  if (portal->server) portal->server->stop();
}

}  // extern "C"
