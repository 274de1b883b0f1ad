#ifndef PLANETARY_PLANETARY_H
#define PLANETARY_PLANETARY_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(PLNT_BUILDING_LIBRARY)
#define PLNT_API __attribute__((visibility("default")))
#else
#define PLNT_API
#endif

/* Opaque portal handle. One handle owns one data directory. Handles may be
 * shared between threads; plnt_close must not race with other calls. */
typedef struct plnt_portal plnt_portal;

typedef enum plnt_status {
  PLNT_OK = 0,
  PLNT_E_INVALID_ARGUMENT = 1,
  PLNT_E_INVALID_PATH = 2,
  PLNT_E_INVALID_TERM_PATH = 3,
  PLNT_E_EMPTY_COMMIT = 4,
  PLNT_E_NOT_FOUND = 5,
  PLNT_E_NO_SUCH_REVISION = 6,
  PLNT_E_UNKNOWN_NODE = 7,
  PLNT_E_UNKNOWN_FRAGMENT = 8,
  PLNT_E_UNKNOWN_THREAD = 9,
  PLNT_E_EMPTY_BODY = 10,
  PLNT_E_MALFORMED_QUERY = 11,
  PLNT_E_AUTH_FAILED = 12,
  PLNT_E_BIND_FAILED = 13,
  PLNT_E_CORRUPT = 14,
  PLNT_E_IO = 15,
  /* Ingest rejected the document; the report lists the parse errors. */
  PLNT_E_PARSE_FAILED = 16,
  PLNT_E_INTERNAL = 17
} plnt_status;

/* Stable name of a status, e.g. "NotFound". */
PLNT_API const char* plnt_status_name(plnt_status status);

/* Message of the last failed call on this thread, or "" after a success. */
PLNT_API const char* plnt_last_error(void);

/* Releases strings returned through char** out parameters. NULL is ignored. */
PLNT_API void plnt_string_free(char* s);

/* Opens (creating if needed) the portal over `data_dir`. `write_token` is the
 * secret mutations must present; NULL means "". */
PLNT_API plnt_status plnt_open(const char* data_dir, const char* write_token,
                               plnt_portal** out);
PLNT_API void plnt_close(plnt_portal* portal);

/* Head store revision of the published snapshot. */
PLNT_API plnt_status plnt_head(plnt_portal* portal, uint64_t* out);

/* Ingests one document. `report_json` receives the ingest report on
 * PLNT_OK and on PLNT_E_PARSE_FAILED. */
PLNT_API plnt_status plnt_ingest(plnt_portal* portal, const char* token,
                                 const char* path, const char* text,
                                 const char* author, const char* message,
                                 char** report_json);

/* Ingests every *.stx below `dir` in one revision, all or nothing.
 * `reports_json` receives a JSON array of reports. */
PLNT_API plnt_status plnt_ingest_dir(plnt_portal* portal, const char* token,
                                     const char* dir, const char* author,
                                     const char* message, char** reports_json);

/* Rendered markup of `path`; `revision` 0 means head. */
PLNT_API plnt_status plnt_render(plnt_portal* portal, const char* path,
                                 uint64_t revision, char** html);
PLNT_API plnt_status plnt_source(plnt_portal* portal, const char* path,
                                 uint64_t revision, char** text);

/* JSON {"variables": [...], "bindings": [...]}. */
PLNT_API plnt_status plnt_query(plnt_portal* portal, const char* query_text,
                                char** json);

/* `format` is "svg", "dot" or "json". */
PLNT_API plnt_status plnt_prereq(plnt_portal* portal, const char* uri,
                                 const char* format, char** out);

PLNT_API plnt_status plnt_definition(plnt_portal* portal, const char* symbol,
                                     char** json);
PLNT_API plnt_status plnt_services(plnt_portal* portal, const char* fragment,
                                   char** json);
PLNT_API plnt_status plnt_msc(plnt_portal* portal, const char* prefix,
                              char** json);
PLNT_API plnt_status plnt_history(plnt_portal* portal, const char* path,
                                  char** json);
PLNT_API plnt_status plnt_diff(plnt_portal* portal, const char* path,
                               uint64_t r1, uint64_t r2, char** unified);

/* Canonical dumps: sorted N-Triples and the dependency graph listing. */
PLNT_API plnt_status plnt_dump_triples(plnt_portal* portal, char** out);
PLNT_API plnt_status plnt_dump_graph(plnt_portal* portal, char** out);

/* Binds `listen` ("host:port"; port 0 picks one) and stores the bound port
 * in `port` when non-NULL. */
PLNT_API plnt_status plnt_bind(plnt_portal* portal, const char* listen,
                               int* port);
/* Serves on the bound address until plnt_stop. */
PLNT_API plnt_status plnt_run(plnt_portal* portal);
/* Safe from any thread, before or during plnt_run. */
PLNT_API void plnt_stop(plnt_portal* portal);

#ifdef __cplusplus
}
#endif

#endif /* PLANETARY_PLANETARY_H */
