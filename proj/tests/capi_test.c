/* Exercises the C interface from plain C. */

#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "rsub/rsub.h"

static int failures = 0;

#define EXPECT(cond)                                                  \
  do {                                                                \
    if (!(cond)) {                                                    \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                     \
    }                                                                 \
  } while (0)

static int contains(const char* haystack, const char* needle) {
  return haystack && strstr(haystack, needle) != NULL;
}

int main(void) {
  rsub_substitution* rpd = NULL;
  rsub_substitution* fib = NULL;
  rsub_substitution* bad = NULL;
  char*              out = NULL;

  EXPECT(rsub_from_string("alphabet: a b\na -> ab | ba\nb -> aa\n", &rpd) == RSUB_OK);
  EXPECT(rsub_from_string("alphabet: a b\na -> ba | ab | ab\nb -> a\n", &fib) == RSUB_OK);
  if (!rpd || !fib) {
    return 1;
  }

  EXPECT(rsub_from_string("alphabet: a b\na -> ab\nb -> \n", &bad) == RSUB_PARSE_ERROR);
  EXPECT(bad == NULL);
  EXPECT(rsub_last_error_line() == 3);
  EXPECT(contains(rsub_last_error(), "empty image"));
  EXPECT(rsub_from_file("/nonexistent/x.spec", &bad) == RSUB_IO_ERROR);
  EXPECT(rsub_from_string(NULL, &bad) == RSUB_INVALID_ARGUMENT);

  EXPECT(rsub_fingerprint(rpd, &out) == RSUB_OK);
  EXPECT(out && strlen(out) == 16);
  rsub_string_free(out);

  EXPECT(rsub_warnings(fib, &out) == RSUB_OK);
  EXPECT(contains(out, "duplicate image"));
  rsub_string_free(out);

  EXPECT(rsub_legal(rpd, "abaa", &out) == RSUB_OK);
  EXPECT(contains(out, "\"legal\":true"));
  rsub_string_free(out);
  EXPECT(rsub_legal(rpd, "bbb", &out) == RSUB_OK);
  EXPECT(contains(out, "\"legal\":false"));
  rsub_string_free(out);
  EXPECT(rsub_legal(rpd, "abc", &out) == RSUB_INVALID_ARGUMENT);
  EXPECT(out == NULL);

  EXPECT(rsub_disjoint(fib, 1, &out) == RSUB_OK);
  EXPECT(contains(out, "\"w\":\"aba\""));
  EXPECT(contains(out, "\"witness_verified\":true"));
  rsub_string_free(out);

  EXPECT(rsub_exists(fib, 8, &out) == RSUB_OK);
  EXPECT(contains(out, "\"reason\":\"irrational_lambda\""));
  rsub_string_free(out);

  EXPECT(rsub_periodic_block(rpd, "aab", &out) == RSUB_OK);
  EXPECT(contains(out, "\"decision\":\"yes\""));
  EXPECT(contains(out, "\"certificate_verified\":true"));
  rsub_string_free(out);

  EXPECT(rsub_periodic_block(fib, "aab", &out) == RSUB_PRECONDITION);
  EXPECT(out == NULL);
  EXPECT(strlen(rsub_last_error()) > 0);

  EXPECT(rsub_enumerate(rpd, 6, 2, 1, &out) == RSUB_OK);
  EXPECT(contains(out, "\"per_count\":15"));
  EXPECT(!contains(out, "\"blocks\""));
  rsub_string_free(out);
  EXPECT(rsub_enumerate(rpd, 0, 1, 1, &out) == RSUB_INVALID_ARGUMENT);

  EXPECT(rsub_analyze(rpd, 16, &out) == RSUB_OK);
  EXPECT(contains(out, "\"virtual_period\":3"));
  rsub_string_free(out);

  EXPECT(rsub_decompose(rpd, "abaa", &out) == RSUB_OK);
  EXPECT(contains(out, "\"unique\":true"));
  rsub_string_free(out);

  EXPECT(rsub_analyze(NULL, 16, &out) == RSUB_INVALID_ARGUMENT);
  EXPECT(strcmp(rsub_status_name(RSUB_PRECONDITION), "precondition") == 0);
  EXPECT(strlen(rsub_version()) > 0);

  rsub_free(rpd);
  rsub_free(fib);
  rsub_free(NULL);
  if (failures) {
    fprintf(stderr, "%d check(s) failed\n", failures);
    return 1;
  }
  puts("capi_test: all checks passed");
  return 0;
}
