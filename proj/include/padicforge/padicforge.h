/* C interface to padicforge. Every call returns a pf_status; on failure
 * pf_last_error() describes the error for the calling thread. Strings
 * returned through char** are owned by the caller and released with
 * pf_string_free. */
#ifndef PADICFORGE_H
#define PADICFORGE_H

#include <stddef.h>
#include <stdint.h>

#if defined(PADICFORGE_BUILDING)
#define PF_API __attribute__((visibility("default")))
#else
#define PF_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pf_status {
  PF_OK = 0,
  PF_INVALID_ARGUMENT = 1,
  PF_NOT_PRIME = 2,
  PF_MIXED_MODULI = 3,
  PF_PRECISION_SHORTFALL = 4,
  PF_NOT_A_UNIT = 5,
  PF_BASE_NOT_ONE_UNIT = 6,
  PF_NOT_INTEGER_VALUED = 7,
  PF_WRONG_PRIME = 8,
  PF_DEGREE_CAP_EXCEEDED = 9,
  PF_BITWISE_ODD_PRIME = 10,
  PF_C_DIVISIBLE_BY_P = 11,
  PF_NOT_CLASS_B = 12,
  PF_NOT_CLASS_A = 13,
  PF_LENGTH_MISMATCH = 14,
  PF_SYNTAX_ERROR = 15,
  PF_UNKNOWN_IDENTIFIER = 16,
  PF_CAP_EXCEEDED = 17,
  PF_NOT_BIJECTIVE = 18,
  PF_NOT_BINARY_MODULUS = 19,
  PF_EMPTY_SEQUENCE = 20,
  PF_UNCERTIFIED_GENERATOR = 21,
  PF_IO_ERROR = 22,
  PF_NULL_ARGUMENT = 98,
  PF_INTERNAL_ERROR = 99
} pf_status;

typedef enum pf_verdict { PF_PROVEN = 0, PF_REFUTED = 1, PF_UNKNOWN = 2 } pf_verdict;

typedef struct pf_expr pf_expr;
typedef struct pf_generator pf_generator;

/* A prime power p^k, or a decimal modulus m (factored by trial division)
 * when m is non-null. */
typedef struct pf_modulus_spec {
  uint64_t p;
  unsigned k;
  const char* m;
} pf_modulus_spec;

typedef struct pf_limits {
  uint64_t cap_states;
  uint64_t cap_inputs;
  unsigned rmax;
} pf_limits;

PF_API const char* pf_version(void);
/* Message of the last failed call on this thread ("" if none). */
PF_API const char* pf_last_error(void);
PF_API const char* pf_status_name(pf_status status);
PF_API void pf_string_free(char* s);
/* Defaults, with PADIC_FORGE_CAP applied. */
PF_API pf_limits pf_limits_default(void);

/* Expressions. Parse errors report 1-based line and column when the
 * pointers are non-null. */
PF_API pf_status pf_expr_parse(const char* text, pf_expr** out, int* line, int* column);
PF_API pf_status pf_expr_from_json(const char* json, pf_expr** out);
PF_API pf_status pf_expr_to_json(const pf_expr* e, char** json);
PF_API pf_status pf_expr_to_string(const pf_expr* e, char** text);
/* f(x) mod m with x and the result as decimal strings. */
PF_API pf_status pf_expr_eval(const pf_expr* e, const char* x, pf_modulus_spec m, char** result);
PF_API void pf_expr_free(pf_expr* e);

/* Brute-force compatibility, bijectivity and transitivity modulo every
 * prime-power factor, plus the coefficient criteria for polynomials. */
PF_API pf_status pf_check(const pf_expr* e, pf_modulus_spec m, const pf_limits* limits, char** json);

/* property: "compatible", "measure_preserving", "ergodic" or "equiprobable".
 * generic_k = 0 selects the default brute-force depth. */
PF_API pf_status pf_certify(const pf_expr* e, const char* property, uint64_t p, unsigned generic_k,
                            const pf_limits* limits, char** json, pf_verdict* verdict);

/* Generators. state_fn must be certified ergodic unless unchecked != 0;
 * out_fn may be null. */
PF_API pf_status pf_generator_create(const pf_expr* state_fn, const pf_expr* out_fn, pf_modulus_spec m,
                                     const pf_modulus_spec* output_modulus, const char* seed, int unchecked,
                                     const pf_limits* limits, pf_generator** out);
PF_API pf_status pf_generator_from_spec_json(const char* json, const pf_limits* limits, pf_generator** out);
PF_API pf_status pf_generator_spec_json(const pf_generator* g, char** json);
/* Next output as a decimal string. */
PF_API pf_status pf_generator_next(pf_generator* g, char** value);
PF_API pf_status pf_generator_next_u64(pf_generator* g, uint64_t* value);
PF_API pf_status pf_generator_bytes_per_word(const pf_generator* g, unsigned* bytes);
/* Writes count words into buf, which must hold count * bytes_per_word bytes. */
PF_API pf_status pf_generator_emit_bytes(pf_generator* g, uint64_t count, uint8_t* buf, size_t buf_len);
/* Census over one full run of the generator's spec from its seed. */
PF_API pf_status pf_generator_census(const pf_generator* g, const pf_limits* limits, char** json);
PF_API void pf_generator_free(pf_generator* g);

/* Sequence analysis. words are residues mod p^k. */
PF_API pf_status pf_analyze_words(const uint64_t* words, size_t n, uint64_t p, unsigned k, unsigned rmax,
                                  char** json);
PF_API pf_status pf_analyze_generator(const pf_generator* g, const pf_limits* limits, char** json);
PF_API pf_status pf_complexity_profile(const pf_expr* f, uint64_t p, unsigned k_lo, unsigned k_hi,
                                       const pf_limits* limits, char** json);

/* Worked-example table; only may be null or "section1".."section5".
 * failures receives the number of failing rows. */
PF_API pf_status pf_repro(const char* only, const pf_limits* limits, char** json, unsigned* failures);
PF_API pf_status pf_repro_text(const char* only, const pf_limits* limits, char** text, unsigned* failures);

#ifdef __cplusplus
}
#endif

#endif
