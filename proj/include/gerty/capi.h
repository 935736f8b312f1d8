#ifndef GERTY_CAPI_H
#define GERTY_CAPI_H

/*
 * C API for the gerty graded dependent type checker.
 *
 * Handles are opaque; every object returned by a gerty_* constructor must
 * be released with the matching gerty_*_free. Strings returned through
 * result accessors stay owned by the result object.
 */

#ifdef __cplusplus
extern "C" {
#endif

typedef struct gerty_options gerty_options;
typedef struct gerty_result gerty_result;

/* Exit/status codes carried by results. */
enum {
  GERTY_OK = 0,
  GERTY_ERR_CHECK = 1,  /* parse or type errors in the input program */
  GERTY_ERR_CONFIG = 2  /* configuration, file, or solver errors */
};

gerty_options* gerty_options_new(void);
void gerty_options_free(gerty_options* opts);

/*
 * Recognised keys: semiring, equality (normal|smt), optimize (0|1),
 * debug-elision (0|1), smt-solver, fuel, seed, csv, arities, trials,
 * cases, suite, target.
 * Returns 0 on success, nonzero for an unknown key or bad value.
 */
int gerty_options_set(gerty_options* opts, const char* key, const char* value);

/*
 * Runs a command: "check" (args: file), "eval" (file, name),
 * "translate" (file, name), "bench" (no args), "selftest" (no args).
 * Never returns NULL.
 */
gerty_result* gerty_run(const gerty_options* opts, const char* command,
                        const char* const* args, int nargs);

int gerty_result_code(const gerty_result* res);
const char* gerty_result_output(const gerty_result* res);
const char* gerty_result_diagnostics(const gerty_result* res);
void gerty_result_free(gerty_result* res);

const char* gerty_version(void);

#ifdef __cplusplus
}
#endif

#endif /* GERTY_CAPI_H */
