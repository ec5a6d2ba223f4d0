/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef POSETPACK_H
#define POSETPACK_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of a fallible call. Values match the command-line exit codes where
// they overlap.
typedef enum PpStatus {
  PP_STATUS_OK = 0,
  PP_STATUS_NULL_ARGUMENT = 1,
  PP_STATUS_INVALID_INPUT = 2,
  PP_STATUS_BUDGET_EXCEEDED = 3,
  PP_STATUS_VERIFICATION_FAILED = 4,
  PP_STATUS_INTERNAL = 5,
} PpStatus;

// A minimum-closure certificate: closure size, target size and witness.
typedef struct PpCertificate PpCertificate;

// A family of subsets of `[n]`.
typedef struct PpFamily PpFamily;

// A layered packing plan.
typedef struct PpPlan PpPlan;

// A finite poset.
typedef struct PpPoset PpPoset;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message describing the last failure on this thread, or NULL.
//
// The pointer stays valid until the next `pp_*` call on the same thread.
const char *pp_last_error_message(void);

// Replaces every work budget for later calls. Zero restores the defaults.
void pp_set_budget(uint64_t budget);

// Releases a string returned by this library.
//
// # Safety
// `s` must be NULL or a string returned by this library, not yet freed.
void pp_string_free(char *s);

// Builds a poset on `0..size` from `pair_count` relations `a < b`, stored
// flat in `pairs` as `a0, b0, a1, b1, ...`.
//
// # Safety
// `pairs` must point to `2 * pair_count` readable values; `out` must be writable.
enum PpStatus pp_poset_new(size_t size,
                           const size_t *pairs,
                           size_t pair_count,
                           struct PpPoset **out);

// A named poset such as `"V"`, `"J"`, `"chain(2)"` or `"antichain(3)"`.
//
// # Safety
// `name` must be a NUL-terminated string; `out` must be writable.
enum PpStatus pp_poset_standard(const char *name, struct PpPoset **out);

// Parses the poset JSON format `{"elements": p, "relations": [[a, b], ...]}`.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be writable.
enum PpStatus pp_poset_from_json(const char *json, struct PpPoset **out);

// Number of elements, or 0 for NULL.
//
// # Safety
// `poset` must be NULL or a live handle.
size_t pp_poset_size(const struct PpPoset *poset);

// # Safety
// `poset` must be NULL or a live handle, not used afterwards.
void pp_poset_free(struct PpPoset *poset);

// A family on `[n]` from bit masks (bit `i` stands for element `i + 1`).
// Duplicates are merged.
//
// # Safety
// `masks` must point to `len` readable values; `out` must be writable.
enum PpStatus pp_family_new(size_t n, const uint64_t *masks, size_t len, struct PpFamily **out);

// Parses the family JSON format `{"n": n, "sets": [[1, 3], ...]}`.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be writable.
enum PpStatus pp_family_from_json(const char *json, struct PpFamily **out);

// Number of sets, or 0 for NULL.
//
// # Safety
// `family` must be NULL or a live handle.
size_t pp_family_len(const struct PpFamily *family);

// Copies up to `cap` member masks, in increasing order, into `buf` and
// stores the total number of members in `total`.
//
// # Safety
// `buf` must have room for `cap` values (it may be NULL when `cap` is 0).
enum PpStatus pp_family_masks(const struct PpFamily *family,
                              uint64_t *buf,
                              size_t cap,
                              size_t *total);

// # Safety
// `family` must be a live handle; `out` must be writable.
enum PpStatus pp_family_closure(const struct PpFamily *family, struct PpFamily **out);

// # Safety
// `family` must be a live handle; `out` must be writable.
enum PpStatus pp_family_is_convex(const struct PpFamily *family, bool *out);

// Whether no set of one family equals, contains or lies in a set of the other.
//
// # Safety
// Both handles must be live; `out` must be writable.
enum PpStatus pp_families_unrelated(const struct PpFamily *first,
                                    const struct PpFamily *second,
                                    bool *out);

// Number of full chains meeting the family, as a decimal string.
//
// # Safety
// `family` must be a live handle; `out` must be writable.
enum PpStatus pp_chains_through(const struct PpFamily *family, char **out);

// # Safety
// `family` must be NULL or a live handle, not used afterwards.
void pp_family_free(struct PpFamily *family);

// Minimum closure size over weak (or, with `strong`, induced) embeddings
// into `B_k` for `k <= k_max`. A `k_max` of 0 searches up to the poset size.
//
// # Safety
// `poset` must be a live handle; `out` must be writable.
enum PpStatus pp_minimal_closure(const struct PpPoset *poset,
                                 bool strong,
                                 size_t k_max,
                                 struct PpCertificate **out);

// Closure size `m`, or 0 for NULL.
//
// # Safety
// `cert` must be NULL or a live handle.
size_t pp_certificate_m(const struct PpCertificate *cert);

// Target lattice size `k` of the witness, or 0 for NULL.
//
// # Safety
// `cert` must be NULL or a live handle.
size_t pp_certificate_k(const struct PpCertificate *cert);

// Witness image masks indexed by poset element. `buf` needs room for
// `pp_poset_size` values.
//
// # Safety
// `cert` must be a live handle and `buf` must have room for `cap` values.
enum PpStatus pp_certificate_witness(const struct PpCertificate *cert, uint64_t *buf, size_t cap);

// The certificate in its JSON form.
//
// # Safety
// `cert` must be a live handle; `out` must be writable.
enum PpStatus pp_certificate_to_json(const struct PpCertificate *cert, char **out);

// # Safety
// `cert` must be NULL or a live handle, not used afterwards.
void pp_certificate_free(struct PpCertificate *cert);

// Lays out the packing of the certificate's witness in `B_n` with words of
// length at most `iterations`.
//
// # Safety
// `cert` must be a live handle; `out` must be writable.
enum PpStatus pp_plan_build(const struct PpCertificate *cert,
                            size_t n,
                            size_t iterations,
                            struct PpPlan **out);

// Exact copy count and total number of sets, as decimal strings. Either
// output may be NULL to skip it.
//
// # Safety
// `plan` must be a live handle; non-NULL outputs must be writable.
enum PpStatus pp_plan_count(const struct PpPlan *plan, char **copies, char **family_size);

// Writes out every copy and checks that they are pairwise unrelated (and,
// for strong witnesses, induced). Returns [`PpStatus::VerificationFailed`]
// when they are not.
//
// # Safety
// `plan` must be a live handle.
enum PpStatus pp_plan_verify(const struct PpPlan *plan);

// # Safety
// `plan` must be NULL or a live handle, not used afterwards.
void pp_plan_free(struct PpPlan *plan);

// `(k + 1) * C(n - k, floor((n - k) / 2))` as a decimal string.
//
// # Safety
// `out` must be writable.
enum PpStatus pp_gst(size_t k, size_t n, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* POSETPACK_H */
