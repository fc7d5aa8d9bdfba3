#ifndef PRIMPAIR_H
#define PRIMPAIR_H

/* C interface to the primitive-pair engines. Every entry point returns a
 * pp_status; on failure pp_last_error() describes the problem for the
 * calling thread. Results are opaque and rendered on demand. */

#include <stdint.h>

#if defined(_WIN32)
#define PP_API __declspec(dllexport)
#else
#define PP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pp_status {
  PP_OK = 0,
  PP_ERR_DOMAIN = 1,   /* invalid mathematical input: q not a prime power, l not dividing q^n - 1 */
  PP_ERR_BUDGET = 2,   /* factorization budget exhausted */
  PP_ERR_BOUNDS = 3,   /* enumeration, subset or table bound exceeded */
  PP_ERR_ARGUMENT = 4, /* malformed argument or null handle */
  PP_ERR_INTERNAL = 5
} pp_status;

typedef struct pp_config pp_config;
typedef struct pp_result pp_result;

PP_API const char* pp_version(void);
PP_API const char* pp_status_name(pp_status status);
/* Message for the last failing call on this thread; "" if none. */
PP_API const char* pp_last_error(void);

PP_API pp_status pp_config_new(pp_config** out);
PP_API void pp_config_free(pp_config* config);
PP_API pp_status pp_config_set_seed(pp_config* config, uint64_t seed);
PP_API pp_status pp_config_set_threads(pp_config* config, uint32_t threads);
PP_API pp_status pp_config_set_factor_budget(pp_config* config, uint64_t iterations);
PP_API pp_status pp_config_set_enum_bound(pp_config* config, uint64_t bound);
PP_API pp_status pp_config_set_witness_budget(pp_config* config, uint64_t budget);
PP_API pp_status pp_config_set_subset_bits(pp_config* config, uint32_t bits);
/* "prefix" or "exhaustive". */
PP_API pp_status pp_config_set_strategy(pp_config* config, const char* strategy);
/* "witness", "count" or "exception". */
PP_API pp_status pp_config_set_mode(pp_config* config, const char* mode);
/* When disabled, elapsed_ms is reported as 0 so output is reproducible byte for byte. */
PP_API pp_status pp_config_set_timing(pp_config* config, int enabled);

/* Integers are decimal strings. A NULL config means defaults. */
PP_API pp_status pp_factor(const pp_config* config, const char* m, pp_result** out);
PP_API pp_status pp_sieve(const pp_config* config, const char* q, uint32_t n, pp_result** out);
PP_API pp_status pp_decide(const pp_config* config, const char* q, uint32_t n, pp_result** out);
PP_API pp_status pp_table1(const pp_config* config, pp_result** out);
PP_API pp_status pp_verify(const pp_config* config, const char* q, uint32_t n, pp_result** out);
/* Count mode for pairs with q^n <= scope, witness mode above. */
PP_API pp_status pp_confirm_exceptions(const pp_config* config, uint64_t scope, pp_result** out);
PP_API pp_status pp_charsum(const pp_config* config, const char* q, uint32_t n, pp_result** out);

/* Rendered views; the strings live as long as the result. */
PP_API const char* pp_result_json(const pp_result* result);
PP_API const char* pp_result_csv(const pp_result* result);
PP_API const char* pp_result_text(const pp_result* result);
/* 0: success (IN_P, proved, all checks pass); 1: negative (NOT_IN_P,
 * UNRESOLVED, no witness, failed check). */
PP_API int pp_result_outcome(const pp_result* result);
PP_API void pp_result_free(pp_result* result);

#ifdef __cplusplus
}
#endif

#endif
