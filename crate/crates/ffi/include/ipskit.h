#ifndef IPSKIT_H
#define IPSKIT_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum IpsMode {
  IPS_MODE_EXACT = 0,
  IPS_MODE_RANDOMIZED = 1,
} IpsMode;

/**
 * Status codes; 1 to 3 agree with the command-line exit codes.
 */
typedef enum IpsStatus {
  IPS_STATUS_OK = 0,
  IPS_STATUS_REJECTED = 1,
  IPS_STATUS_INVALID_INPUT = 2,
  IPS_STATUS_RESOURCE_CAP = 3,
  IPS_STATUS_NULL_POINTER = 4,
  IPS_STATUS_PANIC = 5,
} IpsStatus;

/**
 * An algebraic circuit over `x` and placeholder variables.
 */
typedef struct IpsCircuit IpsCircuit;

/**
 * A polynomial system `F_1 = ... = F_m = 0`.
 */
typedef struct IpsSystem IpsSystem;

/**
 * Outcome of [`ipskit_verify`].
 */
typedef struct IpsVerdict {
  bool accepted;
  /**
   * First failing condition (1 or 2), 0 when accepted.
   */
  uint8_t failure_condition;
  size_t trials;
  /**
   * Bound on wrongly accepting; 0 in exact mode.
   */
  double soundness;
  /**
   * Modulus used, 0 for exact integer arithmetic.
   */
  uint64_t prime;
} IpsVerdict;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or NULL. Owned by the
 * library; valid until the next call.
 */
const char *ipskit_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *ipskit_version(void);

/**
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void ipskit_string_free(char *s);

/**
 * Translates DIMACS text into a system, optionally with Boolean axioms.
 *
 * # Safety
 * `dimacs` must be a NUL-terminated string and `out` a valid pointer.
 */
enum IpsStatus ipskit_system_from_dimacs(const char *dimacs,
                                         bool boolean_axioms,
                                         struct IpsSystem **out);

/**
 * Parses a system in its text format.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum IpsStatus ipskit_system_parse(const char *text, struct IpsSystem **out);

/**
 * Number of equations.
 *
 * # Safety
 * `sys` must be a live handle or NULL (which gives 0).
 */
size_t ipskit_system_len(const struct IpsSystem *sys);

/**
 * Writes the system as text; free the result with [`ipskit_string_free`].
 *
 * # Safety
 * `sys` must be a live handle and `out` a valid pointer.
 */
enum IpsStatus ipskit_system_to_text(const struct IpsSystem *sys, char **out);

/**
 * # Safety
 * `sys` must come from this library and not have been freed.
 */
void ipskit_system_free(struct IpsSystem *sys);

/**
 * Parses an algcircuit document.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum IpsStatus ipskit_circuit_parse(const char *text, struct IpsCircuit **out);

/**
 * Writes the circuit as an algcircuit document.
 *
 * # Safety
 * `c` must be a live handle and `out` a valid pointer.
 */
enum IpsStatus ipskit_circuit_to_text(const struct IpsCircuit *c, char **out);

/**
 * Node count of the circuit, 0 for NULL.
 *
 * # Safety
 * `c` must be a live handle or NULL.
 */
size_t ipskit_circuit_size(const struct IpsCircuit *c);

/**
 * # Safety
 * `c` must come from this library and not have been freed.
 */
void ipskit_circuit_free(struct IpsCircuit *c);

/**
 * Hilbert-like certificate for an unsatisfiable CNF given as DIMACS text.
 * With `summand` set, returns instead the summand over `x` and
 * `e = x_{n+1..2n}` whose sum over `e in {0,1}^n` is the certificate.
 *
 * # Safety
 * `dimacs` must be a NUL-terminated string and `out` a valid pointer.
 */
enum IpsStatus ipskit_construct_vnp(const char *dimacs, bool summand, struct IpsCircuit **out);

/**
 * Verifies `cert` against `sys`. `target` is NULL for a refutation and
 * otherwise the derived polynomial; `modulus` 0 keeps the default field.
 * Returns `Ok` when accepted and `Rejected` otherwise, with `out` filled
 * in both cases.
 *
 * # Safety
 * `sys` and `cert` must be live handles, `target` a live handle or NULL,
 * and `out` a valid pointer.
 */
enum IpsStatus ipskit_verify(const struct IpsSystem *sys,
                             const struct IpsCircuit *cert,
                             const struct IpsCircuit *target,
                             enum IpsMode mode,
                             size_t trials,
                             uint64_t seed,
                             uint64_t modulus,
                             struct IpsVerdict *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* IPSKIT_H */
