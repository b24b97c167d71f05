/*
 * Copyright (c) the cove-sim contributors.
 * Licensed under the Apache 2.0 License.
 *
 * C API for the cove-sim library: a deterministic, desk-scale simulator of
 * the RISC-V CoVE confidential-computing architecture. The simulator models
 * a platform whose security monitor (TSM + TSM-driver) tracks confidential
 * memory ownership in a Memory Tracking Table, implements the COVH/COVG/COVI
 * ABIs for the TVM lifecycle, and issues DICE-rooted attestation evidence.
 *
 * Handles are opaque; every function returns a cove_status. ABI-level
 * results (the status a real hypervisor would see in a0) are data, carried
 * in out-parameters, and never map to cove_status errors.
 */

#ifndef COVE_COVE_H_
#define COVE_COVE_H_

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#ifndef COVE_API
#define COVE_API __attribute__((visibility("default")))
#endif

typedef enum cove_status {
  COVE_OK = 0,
  COVE_ERR_INVALID_ARG = 1, /* bad handle, null pointer, bad config */
  COVE_ERR_PARSE = 2,       /* scenario text rejected; see cove_last_error() */
  COVE_ERR_IO = 3,          /* file could not be read */
  COVE_ERR_STATE = 4,       /* call not valid in this state */
  COVE_ERR_NOT_FOUND = 5,
} cove_status;

/* Exception kinds reported by access paths. */
enum {
  COVE_EXC_ILLEGAL_INSTRUCTION = 0,
  COVE_EXC_VIRTUAL_INSTRUCTION = 1,
  COVE_EXC_ACCESS_FAULT = 2,
  COVE_EXC_GUEST_PAGE_FAULT = 3,
};

typedef enum cove_access_kind {
  COVE_ACCESS_LOAD = 0,
  COVE_ACCESS_STORE = 1,
  COVE_ACCESS_FETCH = 2,
} cove_access_kind;

typedef struct cove_platform cove_platform;
typedef struct cove_program cove_program;
typedef struct cove_report cove_report;
typedef struct cove_fuzz_report cove_fuzz_report;

/* Thread-local detail message for the most recent error on this thread. */
COVE_API const char* cove_last_error(void);

COVE_API const char* cove_version(void);

/* Name of an ABI status value (the a0 register after a TEECALL). */
COVE_API const char* cove_status_name(uint64_t abi_status);

/* ---------------------------------------------------------------- */
/* Platform lifecycle                                                */
/* ---------------------------------------------------------------- */

typedef struct cove_platform_config {
  uint64_t memory_pages; /* 0 -> 256 */
  uint32_t hart_count;   /* 0 -> 1 */
  uint64_t max_tvms;     /* 0 -> 16 */
  const uint8_t* tsm_blob; /* NULL -> built-in image */
  size_t tsm_blob_len;
  const uint8_t* tsm_driver_blob; /* NULL -> built-in image */
  size_t tsm_driver_blob_len;
  const uint8_t* root_secret; /* NULL -> fixed default; else 32 bytes */
  int debug_platform;
} cove_platform_config;

/* config may be NULL for all defaults. */
COVE_API cove_status cove_platform_create(const cove_platform_config* config,
                                          cove_platform** out);
COVE_API void cove_platform_destroy(cove_platform* platform);

/* Measure and install the TCB; idempotent calls fail with COVE_ERR_STATE. */
COVE_API cove_status cove_platform_boot(cove_platform* platform);

/* ---------------------------------------------------------------- */
/* Host-side ABI                                                     */
/* ---------------------------------------------------------------- */

/*
 * One TEECALL round trip on a hart: function id (a6) plus up to six
 * arguments (a0..a5). ret[0] receives the ABI status (a0), ret[1..6] the
 * response values (a1..a6). Returns COVE_ERR_STATE when the hart is not in
 * a host context that may enter the TSM.
 */
COVE_API cove_status cove_teecall(cove_platform* platform, uint32_t hart,
                                  uint64_t fn, const uint64_t args[6],
                                  uint64_t ret[7]);

/* vcpu creation carries an out-of-band program payload. */
COVE_API cove_status cove_teecall_create_vcpu(cove_platform* platform,
                                              uint32_t hart, uint64_t tvm,
                                              uint64_t vcpu,
                                              uint64_t backing_addr,
                                              uint64_t backing_count,
                                              const cove_program* program,
                                              uint64_t ret[7]);

typedef struct cove_access_result {
  int ok; /* 1 = completed */
  uint64_t value;
  int fault; /* COVE_EXC_* when !ok */
  int unaligned;
} cove_access_result;

/* Raw physical load/store/fetch from the hart's current context. */
COVE_API cove_status cove_host_access(cove_platform* platform, uint32_t hart,
                                      uint64_t addr, cove_access_kind kind,
                                      uint64_t store_value,
                                      cove_access_result* out);

/* Queue an interrupt on the file bound to (tvm, vcpu). abi_status receives
 * the ABI status (ok / invalid_irq / unbound). */
COVE_API cove_status cove_inject_interrupt(cove_platform* platform,
                                           uint64_t tvm, uint64_t vcpu,
                                           uint32_t irq, uint64_t* abi_status);

/* ---------------------------------------------------------------- */
/* Guest-side actions                                                */
/* ---------------------------------------------------------------- */

typedef struct cove_guest_result {
  uint64_t status; /* ABI status */
  int has_exit;
  uint64_t exit_reason; /* TVM exit reason when has_exit */
  uint64_t exit_args[3];
  int has_value;
  uint64_t value;
} cove_guest_result;

COVE_API cove_status cove_guest_touch(cove_platform* platform, uint32_t hart,
                                      uint64_t tvm, uint64_t vcpu,
                                      cove_access_kind kind, uint64_t gpa,
                                      uint64_t store_value,
                                      cove_guest_result* out);

/* report_data may be NULL (zeroes) and is used by the evidence call. */
COVE_API cove_status cove_guest_covg(cove_platform* platform, uint32_t hart,
                                     uint64_t tvm, uint64_t vcpu, uint64_t fn,
                                     uint64_t arg0, uint64_t arg1,
                                     const uint8_t report_data[64],
                                     cove_guest_result* out);

/* ---------------------------------------------------------------- */
/* vcpu programs                                                     */
/* ---------------------------------------------------------------- */

COVE_API cove_status cove_program_create(cove_program** out);
COVE_API void cove_program_destroy(cove_program* program);
COVE_API cove_status cove_program_touch(cove_program* program,
                                        cove_access_kind kind, uint64_t gpa,
                                        uint64_t value);
COVE_API cove_status cove_program_covg(cove_program* program, uint64_t fn,
                                       uint64_t arg0, uint64_t arg1,
                                       const uint8_t report_data[64]);
COVE_API cove_status cove_program_wfi(cove_program* program);
COVE_API cove_status cove_program_exit(cove_program* program, uint64_t code);

/* ---------------------------------------------------------------- */
/* Platform introspection                                            */
/* ---------------------------------------------------------------- */

COVE_API cove_status cove_platform_root_public_key(
    const cove_platform* platform, uint8_t out[32]);

COVE_API cove_status cove_platform_measurements(const cove_platform* platform,
                                                uint8_t tsm_driver_digest[32],
                                                uint8_t tsm_digest[32],
                                                uint64_t* tsm_version,
                                                int* debug_platform);

/* Serialized evidence from the most recent guest evidence request. Query the
 * size with buf == NULL. COVE_ERR_NOT_FOUND when none was issued yet. */
COVE_API cove_status cove_platform_last_evidence(const cove_platform* platform,
                                                 uint8_t* buf, size_t cap,
                                                 size_t* len);

/* ---------------------------------------------------------------- */
/* Scenarios                                                         */
/* ---------------------------------------------------------------- */

COVE_API size_t cove_scenario_count(void);
COVE_API const char* cove_scenario_name(size_t index); /* NULL past end */
COVE_API const char* cove_scenario_text(const char* name); /* NULL unknown */

/* Parse and execute scenario text on a fresh platform. Expectation failures
 * and invariant violations are data in the report, not errors. */
COVE_API cove_status cove_scenario_run(const char* text, cove_report** out);
COVE_API cove_status cove_scenario_run_file(const char* path,
                                            cove_report** out);

COVE_API void cove_report_destroy(cove_report* report);
COVE_API const char* cove_report_scenario_name(const cove_report* report);
COVE_API const char* cove_report_summary(const cove_report* report);
COVE_API size_t cove_report_steps(const cove_report* report);
COVE_API size_t cove_report_failure_count(const cove_report* report);
COVE_API const char* cove_report_failure(const cove_report* report,
                                         size_t index);
COVE_API size_t cove_report_violation_count(const cove_report* report);
COVE_API const char* cove_report_violation(const cove_report* report,
                                           size_t index);
COVE_API size_t cove_report_trace_count(const cove_report* report);
COVE_API const char* cove_report_trace_line(const cove_report* report,
                                            size_t index);
COVE_API const char* cove_report_root_public_key_hex(
    const cove_report* report);
COVE_API cove_status cove_report_evidence(const cove_report* report,
                                          const uint8_t** data, size_t* len);

/* ---------------------------------------------------------------- */
/* Fuzzing                                                           */
/* ---------------------------------------------------------------- */

COVE_API cove_status cove_fuzz_run(uint64_t seed, uint64_t ops,
                                   uint32_t illegal_bias_pct,
                                   cove_fuzz_report** out);
COVE_API void cove_fuzz_report_destroy(cove_fuzz_report* report);
COVE_API const char* cove_fuzz_summary(const cove_fuzz_report* report);
COVE_API uint64_t cove_fuzz_ops_executed(const cove_fuzz_report* report);
COVE_API uint64_t cove_fuzz_violation_count(const cove_fuzz_report* report);
COVE_API const char* cove_fuzz_violation(const cove_fuzz_report* report,
                                         size_t index);

/* ---------------------------------------------------------------- */
/* Attestation verification (relying party; no platform required)    */
/* ---------------------------------------------------------------- */

typedef struct cove_verify_policy {
  const uint8_t* expected_tsm_driver_digest; /* NULL to skip, else 32 bytes */
  const uint8_t* expected_tsm_digest;        /* NULL to skip, else 32 bytes */
  int allow_debug;
  const uint8_t* expected_tvm_measurement; /* NULL to skip, else 32 bytes */
} cove_verify_policy;

/* accepted receives 1/0; reason receives the reject reason name (empty on
 * accept). Malformed evidence rejects as chain_broken. */
COVE_API cove_status cove_evidence_verify(const uint8_t* evidence,
                                          size_t evidence_len,
                                          const uint8_t root_public_key[32],
                                          const cove_verify_policy* policy,
                                          int* accepted, char reason[32]);

/* Human-readable dump of serialized evidence; free with cove_string_free. */
COVE_API cove_status cove_evidence_dump(const uint8_t* evidence,
                                        size_t evidence_len, char** text);
COVE_API void cove_string_free(char* text);

#ifdef __cplusplus
}
#endif

#endif /* COVE_COVE_H_ */
