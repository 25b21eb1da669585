#ifndef HYPERCF_H
#define HYPERCF_H

/* Generated by cbindgen. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes.
typedef enum HcfStatus {
  HCF_STATUS_OK = 0,
  HCF_STATUS_NULL_ARGUMENT = 1,
  // Malformed JSON or text that is not UTF-8.
  HCF_STATUS_PARSE = 2,
  // Well-formed input that does not describe a valid object.
  HCF_STATUS_INVALID_INPUT = 3,
  // The expansion or orbit hits a vanishing denominator.
  HCF_STATUS_SINGULAR = 4,
  // A check ran and failed.
  HCF_STATUS_VERIFICATION_FAILED = 5,
  // Not enough terms for the request.
  HCF_STATUS_INSUFFICIENT_DATA = 6,
  // A search finished without a result.
  HCF_STATUS_NOT_FOUND = 7,
  HCF_STATUS_INTERNAL = 8,
} HcfStatus;

// Opaque continued-fraction expansion.
typedef struct HcfExpansion HcfExpansion;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failure on this thread, or NULL. Valid until the
// next failing call on the same thread; do not free.
const char *hcf_last_error(void);

// Library version as a static string; do not free.
const char *hcf_version(void);

// Releases a string returned by this library. NULL is ignored.
//
// # Safety
// `s` must be NULL or a string returned through an output parameter of
// this library that has not been freed yet.
void hcf_string_free(char *s);

// Builds an expansion from a curve document
// `{"genus", "A", "R", "P0", "Q0"}`.
//
// # Safety
// `curve_json` must be NULL or NUL-terminated; `out` must be NULL or
// writable.
enum HcfStatus hcf_expansion_new(const char *curve_json, struct HcfExpansion **out);

// Releases an expansion. NULL is ignored.
//
// # Safety
// `h` must be NULL or a live handle from [`hcf_expansion_new`].
void hcf_expansion_free(struct HcfExpansion *h);

// Genus of the curve, or 0 for NULL.
//
// # Safety
// `h` must be NULL or a live handle.
size_t hcf_expansion_genus(const struct HcfExpansion *h);

// Lines `-backward ..= forward` as a JSON array of `{n, u, v, d, P, Q}`.
// On a singular line the status is `Singular` and `out` still receives
// the lines computed before it.
//
// # Safety
// `h` must be a live handle; `out` must be writable.
enum HcfStatus hcf_expansion_lines(const struct HcfExpansion *h,
                                   size_t forward,
                                   size_t backward,
                                   char **out);

// First `count` moments at the first (`backward == 0`) or second point at
// infinity, as a JSON array of rational strings.
//
// # Safety
// `h` must be a live handle; `out` must be writable.
enum HcfStatus hcf_expansion_moments(const struct HcfExpansion *h,
                                     size_t count,
                                     int32_t backward,
                                     char **out);

// Hankel determinants up to `size` as `{"delta": [...], "delta_star": [...]}`.
//
// # Safety
// `h` must be a live handle; `out` must be writable.
enum HcfStatus hcf_expansion_hankel(const struct HcfExpansion *h,
                                    size_t size,
                                    int32_t backward,
                                    char **out);

// Two-sided tau sequence as `{"start": n, "terms": [...]}`.
//
// # Safety
// `h` must be a live handle; `out` must be writable.
enum HcfStatus hcf_expansion_tau(const struct HcfExpansion *h,
                                 size_t forward,
                                 size_t backward,
                                 char **out);

// Smallest Somos relation of order at most `k_max` for a sequence
// `{"start", "terms"}`; `NotFound` if there is none.
//
// # Safety
// `sequence_json` must be NUL-terminated; `out` must be writable.
enum HcfStatus hcf_somos_find(const char *sequence_json, size_t k_max, char **out);

// Checks a relation `{"k", "coefficients"}` on every window of a sequence.
//
// # Safety
// Both strings must be NUL-terminated.
enum HcfStatus hcf_somos_verify(const char *relation_json, const char *sequence_json);

// Runs a reproduction bundle and writes its JSON report. The status is
// `VerificationFailed` if any value differs.
//
// # Safety
// `bundle` must be NUL-terminated; `out` must be writable.
enum HcfStatus hcf_repro(const char *bundle, char **out);

// Runs a randomized suite (`theorem2`, `identities`, `poisson`, `qrt`,
// `somos8`) and writes its JSON report.
//
// # Safety
// `suite` must be NUL-terminated; `out` must be writable.
enum HcfStatus hcf_verify(const char *suite,
                          size_t genus,
                          size_t samples,
                          uint64_t seed,
                          char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HYPERCF_H */
