#ifndef RSUB_RSUB_H
#define RSUB_RSUB_H

/*
 * C interface to the random substitution library.
 *
 * A substitution is loaded into an opaque handle; every analysis returns a
 * status code and, on success, a JSON document in *out_json that the caller
 * releases with rsub_string_free. On failure *out_json is left NULL and
 * rsub_last_error() describes the problem (per thread).
 *
 * Handles may be shared between threads; all queries are read-only apart
 * from internal caches, which are synchronised.
 */

#include <stddef.h>

#if defined(_WIN32)
#  if defined(RSUB_BUILDING)
#    define RSUB_API __declspec(dllexport)
#  else
#    define RSUB_API __declspec(dllimport)
#  endif
#else
#  define RSUB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rsub_status {
  RSUB_OK = 0,
  RSUB_INVALID_ARGUMENT = 1,
  RSUB_PARSE_ERROR = 2,
  RSUB_IO_ERROR = 3,
  /* the analysis does not apply to this substitution */
  RSUB_PRECONDITION = 4,
  RSUB_INTERNAL = 5
} rsub_status;

typedef struct rsub_substitution rsub_substitution;

RSUB_API const char* rsub_version(void);
RSUB_API const char* rsub_status_name(rsub_status status);
/* Message for the last failed call on this thread; never NULL. */
RSUB_API const char* rsub_last_error(void);
/* Line of the last parse error on this thread, 0 if none. */
RSUB_API size_t rsub_last_error_line(void);

RSUB_API rsub_status rsub_from_file(const char* path, rsub_substitution** out);
RSUB_API rsub_status rsub_from_string(const char* text, rsub_substitution** out);
RSUB_API void rsub_free(rsub_substitution* sub);

/* Directory for cached legal-word tables; NULL disables the cache. Call
 * before running analyses. */
RSUB_API rsub_status rsub_set_cache_dir(rsub_substitution* sub, const char* dir);

/* 16 hex digits, invariant under rule and image reordering. */
RSUB_API rsub_status rsub_fingerprint(const rsub_substitution* sub, char** out);
/* JSON array of warnings produced while parsing. */
RSUB_API rsub_status rsub_warnings(const rsub_substitution* sub, char** out_json);

RSUB_API rsub_status rsub_analyze(const rsub_substitution* sub, size_t existence_window,
                                  char** out_json);
RSUB_API rsub_status rsub_legal(const rsub_substitution* sub, const char* word,
                                char** out_json);
RSUB_API rsub_status rsub_decompose(const rsub_substitution* sub, const char* word,
                                    char** out_json);
/* inflation_depth 0 skips the inflation-images check. */
RSUB_API rsub_status rsub_disjoint(const rsub_substitution* sub, size_t inflation_depth,
                                   char** out_json);
RSUB_API rsub_status rsub_exists(const rsub_substitution* sub, size_t window,
                                 char** out_json);
RSUB_API rsub_status rsub_periodic_block(const rsub_substitution* sub, const char* word,
                                         char** out_json);
/* jobs 0 means one worker. Blocks are omitted when count_only is nonzero. */
RSUB_API rsub_status rsub_enumerate(const rsub_substitution* sub, size_t period,
                                    size_t jobs, int count_only, char** out_json);

RSUB_API void rsub_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif
