// Admin command line for a portal data directory.
#include <pthread.h>
#include <signal.h>

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "planetary/planetary.h"

namespace {

constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

std::string env_or(const char* name, const char* fallback) {
  const char* v = std::getenv(name);
  return v != nullptr && *v != '\0' ? v : fallback;
}

int report(plnt_status status) {
  std::cerr << "error: " << plnt_status_name(status) << ": " << plnt_last_error() << '\n';
  return kExitDomain;
}

// Prints and frees a library string.
void print(char* s) {
  if (s == nullptr) return;
  std::fputs(s, stdout);
  const auto n = std::char_traits<char>::length(s);
  if (n == 0 || s[n - 1] != '\n') std::fputc('\n', stdout);
  plnt_string_free(s);
}

class Handle {
 public:
  Handle(const std::string& dir, const std::string& token) {
    status_ = plnt_open(dir.c_str(), token.c_str(), &portal_);
  }
  ~Handle() { plnt_close(portal_); }
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;

  plnt_status status() const { return status_; }
  plnt_portal* get() const { return portal_; }

 private:
  plnt_portal* portal_ = nullptr;
  plnt_status status_ = PLNT_OK;
};

int serve(plnt_portal* portal, const std::string& listen) {
  int port = 0;
  if (const auto s = plnt_bind(portal, listen.c_str(), &port); s != PLNT_OK) return report(s);
  std::cerr << "serving on port " << port << '\n';

  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    plnt_stop(portal);
  });
  const auto status = plnt_run(portal);
  // Release the waiter if the server stopped for another reason.
  pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  if (status != PLNT_OK) return report(status);
  std::cerr << "stopped\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  // Signals are taken synchronously by the serve waiter thread; every thread
  // inherits this mask.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  CLI::App app{"Semantic document portal administration"};
  app.require_subcommand(1);
  std::string data_dir = env_or("PORTAL_DATA_DIR", "data");
  std::string token = env_or("PORTAL_WRITE_TOKEN", "");
  app.add_option("-d,--data-dir", data_dir, "Data directory (PORTAL_DATA_DIR)");
  app.add_option("-t,--token", token, "Write token (PORTAL_WRITE_TOKEN)");

  std::string author = env_or("USER", "admin");
  std::string message;
  std::string dir;
  auto* ingest = app.add_subcommand("ingest", "Ingest every .stx document below a directory");
  ingest->add_option("dir", dir, "Corpus root")->required();
  ingest->add_option("-a,--author", author, "Commit author");
  ingest->add_option("-m,--message", message, "Commit message");

  std::string path;
  std::uint64_t revision = 0;
  auto* render = app.add_subcommand("render", "Print the rendered markup of a document");
  render->add_option("path", path, "Document path")->required();
  render->add_option("-r,--rev", revision, "Revision (default head)");

  auto* source = app.add_subcommand("source", "Print the stored source of a document");
  source->add_option("path", path, "Document path")->required();
  source->add_option("-r,--rev", revision, "Revision (default head)");

  std::string query_file;
  auto* query = app.add_subcommand("query", "Run a triple query read from a file");
  query->add_option("file", query_file, "Query file")->required();

  std::string uri;
  std::string format = "svg";
  auto* prereq = app.add_subcommand("prereq", "Prerequisite closure of a node");
  prereq->add_option("uri", uri, "Document, module or symbol IRI")->required();
  prereq->add_option("-f,--format", format, "Output format")
      ->check(CLI::IsMember({"svg", "dot", "json"}));

  auto* definition = app.add_subcommand("definition", "Look up the definition of a symbol");
  definition->add_option("symbol", uri, "Symbol IRI")->required();

  std::string fragment;
  auto* services = app.add_subcommand("services", "Services available on a fragment");
  services->add_option("fragment", fragment, "Fragment ID")->required();

  std::string prefix;
  auto* msc = app.add_subcommand("msc", "Documents under an MSC code prefix");
  msc->add_option("prefix", prefix, "Code prefix")->required();

  auto* history = app.add_subcommand("history", "Revision history of a document");
  history->add_option("path", path, "Document path")->required();

  std::uint64_t r1 = 0;
  std::uint64_t r2 = 0;
  auto* diff = app.add_subcommand("diff", "Unified diff of a document between revisions");
  diff->add_option("path", path, "Document path")->required();
  diff->add_option("r1", r1, "Old revision")->required();
  diff->add_option("r2", r2, "New revision")->required();

  auto* dump_triples = app.add_subcommand("dump-triples", "Print the triple graph");
  auto* dump_graph = app.add_subcommand("dump-graph", "Print the dependency graph");

  std::string listen = env_or("PORTAL_LISTEN", "127.0.0.1:8080");
  auto* serve_cmd = app.add_subcommand("serve", "Serve the REST interface");
  serve_cmd->add_option("-l,--listen", listen, "host:port (PORTAL_LISTEN)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  std::string query_text;
  if (*query) {
    std::ifstream in(query_file, std::ios::binary);
    if (!in) {
      std::cerr << "error: cannot read " << query_file << '\n';
      return kExitUsage;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    query_text = buf.str();
  }

  Handle handle(data_dir, token);
  if (handle.status() != PLNT_OK) return report(handle.status());
  auto* p = handle.get();
  char* out = nullptr;
  plnt_status status = PLNT_OK;

  if (*ingest) {
    status = plnt_ingest_dir(p, token.c_str(), dir.c_str(), author.c_str(),
                             (message.empty() ? "ingest " + dir : message).c_str(), &out);
  } else if (*render) {
    status = plnt_render(p, path.c_str(), revision, &out);
  } else if (*source) {
    status = plnt_source(p, path.c_str(), revision, &out);
  } else if (*query) {
    status = plnt_query(p, query_text.c_str(), &out);
  } else if (*prereq) {
    status = plnt_prereq(p, uri.c_str(), format.c_str(), &out);
  } else if (*definition) {
    status = plnt_definition(p, uri.c_str(), &out);
  } else if (*services) {
    status = plnt_services(p, fragment.c_str(), &out);
  } else if (*msc) {
    status = plnt_msc(p, prefix.c_str(), &out);
  } else if (*history) {
    status = plnt_history(p, path.c_str(), &out);
  } else if (*diff) {
    status = plnt_diff(p, path.c_str(), r1, r2, &out);
  } else if (*dump_triples) {
    status = plnt_dump_triples(p, &out);
  } else if (*dump_graph) {
    status = plnt_dump_graph(p, &out);
  } else if (*serve_cmd) {
    return serve(p, listen);
  }
  print(out);
  return status == PLNT_OK ? 0 : report(status);
}
