#ifndef MTZ_H
#define MTZ_H

/* C interface to the mtz library. Every call returns an mtz_status; results
 * come back as strings owned by the caller (free with mtz_free_string).
 * Structured results are JSON. */

#include <stddef.h>
#include <stdint.h>

#if defined(MTZ_BUILDING_LIBRARY)
#define MTZ_API __attribute__((visibility("default")))
#else
#define MTZ_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mtz_status {
  MTZ_OK = 0,
  MTZ_INVALID_ARGUMENT,
  MTZ_NOT_PRIME,
  MTZ_NON_UNIT_DENOMINATOR,
  MTZ_NON_UNIT,
  MTZ_PRECISION_MISMATCH,
  MTZ_PARTS_MISMATCH,
  MTZ_IRREGULAR_MODULUS,
  MTZ_PRECONDITION_VIOLATED,
  MTZ_NON_INTEGRAL,
  MTZ_EXACT_LIMIT_EXCEEDED,
  MTZ_UNSUPPORTED_DEPTH,
  MTZ_DIVERGENT_TERM,
  MTZ_UNSUPPORTED_TERM,
  MTZ_CONFIG_INVALID,
  MTZ_PERSISTENCE_FAILURE,
  MTZ_INTERNAL_ERROR
} mtz_status;

typedef struct mtz_context mtz_context;

typedef enum mtz_oracle { MTZ_ORACLE_BRUTE = 0, MTZ_ORACLE_REDUCTION = 1 } mtz_oracle;

MTZ_API const char* mtz_version(void);
MTZ_API const char* mtz_status_name(mtz_status status);

MTZ_API mtz_context* mtz_context_new(void);
MTZ_API void mtz_context_free(mtz_context* ctx);
MTZ_API mtz_status mtz_set_workers(mtz_context* ctx, unsigned workers);
MTZ_API mtz_status mtz_set_exact_limits(mtz_context* ctx, uint64_t max_modulus, size_t max_depth);
/* Message of the last failed call on this context; "" if none. */
MTZ_API const char* mtz_last_error(const mtz_context* ctx);

MTZ_API void mtz_free_string(char* s);

/* B_n as "n/d" when p == 0, otherwise "v (mod p^e)". */
MTZ_API mtz_status mtz_bernoulli(mtz_context* ctx, unsigned n, uint64_t p, unsigned e, char** out);

/* H_n(s) exactly; p != 0 restricts indices to those prime to p. */
MTZ_API mtz_status mtz_mhs(mtz_context* ctx, uint64_t n, uint64_t p, const int* s, size_t depth,
                           char** out);

/* Chain-restricted sum mod p^precision; precision 0 asks for the exact rational. */
MTZ_API mtz_status mtz_chain_mhs(mtz_context* ctx, uint64_t p, unsigned r, const int* s,
                                 size_t depth, unsigned precision, char** out);

/* Z_{p^r}(s) mod p^precision; precision 0 asks for the exact rational. */
MTZ_API mtz_status mtz_z_sum(mtz_context* ctx, uint64_t p, unsigned r, const int* s, size_t depth,
                             unsigned precision, mtz_oracle oracle, char** out);

/* T_{p^r}(alphas; lambdas). One lambda gives the plain finite sum, more than
 * one the chain-restricted one. precision 0 asks for the exact rational. */
MTZ_API mtz_status mtz_mt_sum(mtz_context* ctx, uint64_t p, unsigned r, const int* alphas,
                              size_t n_alphas, const int* lambdas, size_t n_lambdas,
                              unsigned precision, char** out);

/* Symbolic reductions as JSON. kind is "t2" (a,b,c), "t20" (a,b,l), "t3"
 * (a,b,c,l), "z4" or "z4-literal" (a,b,c,l). */
MTZ_API mtz_status mtz_reduce(mtz_context* ctx, const char* kind, const int* args, size_t n_args,
                              char** out_json);

/* A verification request as JSON, e.g. {"check":"base","p":7} or
 * {"check":"conjecture","p":7,"r":2,"s":[1,1,1,2]}. Returns
 * {"reports":[...], "all_passed":bool}. */
MTZ_API mtz_status mtz_verify(mtz_context* ctx, const char* request_json, char** out_json);

/* Runs a scan described by a JSON config; returns {"summary_csv", "records",
 * "all_passed"}. Records are also written to the config's out path. */
MTZ_API mtz_status mtz_scan(mtz_context* ctx, const char* config_json, char** out_json);

/* Counting table for weights 3..w_max as JSON with rows and crossovers. */
MTZ_API mtz_status mtz_counts(mtz_context* ctx, unsigned w_max, char** out_json);

MTZ_API mtz_status mtz_deligne_count(mtz_context* ctx, unsigned w, char** out_json);

/* Signed Mordell-Tornheim value as MZVs plus a numeric estimate. alphas use
 * a leading minus for sign -1. */
MTZ_API mtz_status mtz_mt_to_mzv(mtz_context* ctx, const char* alphas, int lambda, uint64_t cutoff,
                                 char** out_json);

MTZ_API mtz_status mtz_value_table(mtz_context* ctx, double tolerance, uint64_t cutoff,
                                   char** out_json);

#ifdef __cplusplus
}
#endif

#endif
