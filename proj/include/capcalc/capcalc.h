#ifndef CAPCALC_H
#define CAPCALC_H

/* C interface to the capability-calculus engine.
 *
 * Every function that can fail returns a capcalc_status and, when err is
 * non-NULL, stores a heap-allocated message in *err on failure. All strings
 * handed out through out-parameters are heap-allocated; release them with
 * capcalc_string_free. Out-parameters are only written on CAPCALC_OK (err on
 * anything else). */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum capcalc_status {
  CAPCALC_OK = 0,
  CAPCALC_ERR_PARSE = 1,
  CAPCALC_ERR_TYPE = 2,
  CAPCALC_ERR_MISSING_BINDING = 3,
  CAPCALC_ERR_EVAL = 4,
  CAPCALC_ERR_USAGE = 5
} capcalc_status;

/* A parsed source file: cap / let / main declarations. */
typedef struct capcalc_source capcalc_source;

capcalc_status capcalc_source_parse(const char* text, capcalc_source** out, char** err);
void capcalc_source_free(capcalc_source* src);

/* Typechecks the whole file; on success *type_out holds main's rendered
 * type. Type errors carry source positions in the message. */
capcalc_status capcalc_source_check(const capcalc_source* src, char** type_out, char** err);

/* Evaluates main under capability bindings (parallel arrays: cap_names[i]
 * runs on channel channels[i]). *value_out is the rendered value;
 * *output_out holds one "channel: text" line per channel with nonempty
 * output, sorted by channel, each newline-terminated (empty string when the
 * run is silent). strict != 0 rejects box bodies that produce output. A cap
 * declaration without a binding is CAPCALC_ERR_MISSING_BINDING. */
capcalc_status capcalc_source_run(const capcalc_source* src, const char* const* cap_names,
                                  const char* const* channels, size_t n, int strict,
                                  char** value_out, char** output_out, char** err);

/* Static value weight and dynamic effect weight of main, rendered as
 * "{a, b}" sets. Caps without an explicit binding are bound to their own
 * name, so weights read in terms of the declared capabilities. */
capcalc_status capcalc_source_weigh(const capcalc_source* src, const char* const* cap_names,
                                    const char* const* channels, size_t n,
                                    char** value_weight_out, char** effect_weight_out, char** err);

/* Embeds a pure term (unit, variables, lambdas over unit/arrow types,
 * application) into the calculus: arrows acquire boxed domains, lambdas
 * unbox, applications box. Input is a bare term. */
capcalc_status capcalc_embed(const char* stlc_term, char** cap_term_out, char** err);

/* Reverse-translates a source file's main term to the pure calculus: boxes
 * vanish, prints become (), base types collapse to unit. Products have no
 * image and are rejected. */
capcalc_status capcalc_unembed(const char* cap_source, char** stlc_term_out, char** err);

/* Runs the law suites. suite: "eq", "model", "embed", or "all".
 * instances <= 0 picks each suite's default (200 per rule / 500). caps and
 * max_carrier bound the finite-model search; monoid is "trivial", "trunc2",
 * or "idem". *report_out gets one line per check, "name: PASS" or
 * "name: FAIL (note)" (JSON objects instead when emit_json != 0);
 * *all_pass_out is 1 iff every check passed. */
capcalc_status capcalc_laws_run(const char* suite, uint64_t seed, int instances, int caps,
                                int max_carrier, const char* monoid, int emit_json,
                                char** report_out, int* all_pass_out, char** err);

void capcalc_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* CAPCALC_H */
