/* Exercises the shared library through its C header only. */

#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "padicforge/padicforge.h"

static int failures = 0;

#define EXPECT(cond)                                               \
  do {                                                             \
    if (!(cond)) {                                                 \
      fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, #cond);   \
      ++failures;                                                  \
    }                                                              \
  } while (0)

static pf_modulus_spec pk(uint64_t p, unsigned k) {
  pf_modulus_spec m = {p, k, NULL};
  return m;
}

static void test_expressions(void) {
  pf_expr* e = NULL;
  int line = 0, col = 0;
  EXPECT(pf_expr_parse("1 + x + 2*delta(x xor (2*x + 1))", &e, &line, &col) == PF_OK);
  char* v = NULL;
  EXPECT(pf_expr_eval(e, "3", pk(2, 8), &v) == PF_OK);
  /* 1 + 3 + 2*((4 xor 9) - (3 xor 7)) = 4 + 2*(13 - 4) */
  EXPECT(v && strcmp(v, "22") == 0);
  pf_string_free(v);

  char* js = NULL;
  EXPECT(pf_expr_to_json(e, &js) == PF_OK);
  pf_expr* back = NULL;
  EXPECT(pf_expr_from_json(js, &back) == PF_OK);
  pf_string_free(js);
  EXPECT(pf_expr_eval(back, "3", pk(2, 8), &v) == PF_OK);
  EXPECT(v && strcmp(v, "22") == 0);
  pf_string_free(v);
  pf_expr_free(back);

  pf_verdict verdict = PF_UNKNOWN;
  EXPECT(pf_certify(e, "ergodic", 2, 0, NULL, &js, &verdict) == PF_OK);
  EXPECT(verdict == PF_PROVEN);
  EXPECT(js && strstr(js, "PROVEN") != NULL);
  pf_string_free(js);
  pf_expr_free(e);

  pf_expr* bad = NULL;
  EXPECT(pf_expr_parse("1 +\n  )", &bad, &line, &col) == PF_SYNTAX_ERROR);
  EXPECT(bad == NULL);
  EXPECT(line == 2 && col == 3);
  EXPECT(strlen(pf_last_error()) > 0);
  EXPECT(strcmp(pf_status_name(PF_CAP_EXCEEDED), "CAP_EXCEEDED") == 0);
  EXPECT(pf_expr_parse(NULL, &bad, NULL, NULL) == PF_NULL_ARGUMENT);
}

static void test_generator(void) {
  pf_expr* f = NULL;
  EXPECT(pf_expr_parse("1 + 5*x", &f, NULL, NULL) == PF_OK);
  pf_generator* g = NULL;
  EXPECT(pf_generator_create(f, NULL, pk(2, 8), NULL, "0", 0, NULL, &g) == PF_OK);
  uint64_t w = 0, x = 0;
  for (int i = 0; i < 300; ++i) {
    x = (1 + 5 * x) % 256;
    EXPECT(pf_generator_next_u64(g, &w) == PF_OK);
    EXPECT(w == x);
  }
  unsigned bpw = 0;
  EXPECT(pf_generator_bytes_per_word(g, &bpw) == PF_OK && bpw == 1);
  uint8_t buf[4];
  EXPECT(pf_generator_emit_bytes(g, 4, buf, 3) == PF_INVALID_ARGUMENT);
  EXPECT(pf_generator_emit_bytes(g, 4, buf, 4) == PF_OK);
  char* js = NULL;
  EXPECT(pf_generator_census(g, NULL, &js) == PF_OK);
  EXPECT(js && strstr(js, "\"period\":256") != NULL);
  pf_string_free(js);
  pf_generator_free(g);

  pf_expr* sq = NULL;
  EXPECT(pf_expr_parse("x^2", &sq, NULL, NULL) == PF_OK);
  EXPECT(pf_generator_create(sq, NULL, pk(2, 8), NULL, "0", 0, NULL, &g) == PF_UNCERTIFIED_GENERATOR);
  pf_expr_free(sq);

  pf_modulus_spec ten = {0, 0, "1000"};
  pf_expr* c = NULL;
  EXPECT(pf_expr_parse("1 + x + 100*x^3", &c, NULL, NULL) == PF_OK);
  EXPECT(pf_generator_create(c, NULL, ten, NULL, "0", 0, NULL, &g) == PF_OK);
  char* s = NULL;
  EXPECT(pf_generator_next(g, &s) == PF_OK && strcmp(s, "1") == 0);
  pf_string_free(s);
  pf_generator_free(g);
  pf_expr_free(c);
  pf_expr_free(f);
}

static void test_analysis(void) {
  uint64_t words[16];
  uint64_t x = 0;
  for (int i = 0; i < 16; ++i) {
    words[i] = x;
    x = (3 + 5 * x) % 16;
  }
  char* js = NULL;
  EXPECT(pf_analyze_words(words, 16, 2, 4, 4, &js) == PF_OK);
  EXPECT(js && strstr(js, "\"period\":16") != NULL);
  pf_string_free(js);
  EXPECT(pf_analyze_words(words, 0, 2, 4, 4, &js) == PF_EMPTY_SEQUENCE);

  pf_limits lim = pf_limits_default();
  EXPECT(lim.cap_states > 0);
  unsigned fails = 99;
  EXPECT(pf_repro("section1", &lim, &js, &fails) == PF_OK);
  EXPECT(fails == 0);
  pf_string_free(js);
}

int main(void) {
  EXPECT(pf_version() && strlen(pf_version()) > 0);
  test_expressions();
  test_generator();
  test_analysis();
  if (failures) {
    fprintf(stderr, "%d check(s) failed\n", failures);
    return 1;
  }
  printf("capi: all checks passed\n");
  return 0;
}
