/* C interface to the bikebf library: QC-MDPC bit-flipping decoding, threshold
 * quantization and calibration, Monte Carlo DFR estimation with extrapolation,
 * and the hardware cost model. All functions return a bikebf_status; outputs
 * are written through pointers and are unspecified on failure unless noted.
 * bikebf_last_error() describes the most recent failure on the calling thread.
 *
 * Bit vectors cross this boundary as sorted arrays of set-bit indices: error
 * vectors index [0, 2r), syndromes index [0, r). Fixed-size caller buffers
 * report their required size through *out_len when BIKEBF_ERR_BUFFER_TOO_SMALL
 * is returned.
 *
 * Determinism contract: every randomized entry point takes a master_seed (and
 * a stream or trial indexing derived from it); equal seeds give bit-identical
 * results and output files for any worker count.
 */
#ifndef BIKEBF_H
#define BIKEBF_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bikebf_status {
  BIKEBF_OK = 0,
  BIKEBF_ERR_INVALID_ARG = 1,
  BIKEBF_ERR_IO = 2, /* unreadable/unwritable or malformed file */
  BIKEBF_ERR_KEYGEN_RETRIES = 3,
  BIKEBF_ERR_DEGENERATE_FIT = 4,
  BIKEBF_ERR_NO_EXTRAPOLATION = 5,
  BIKEBF_ERR_BUFFER_TOO_SMALL = 6,
  BIKEBF_ERR_INTERNAL = 7,
} bikebf_status;

/* Message for the most recent error on this thread; empty string if none.
 * Valid until the next bikebf_* call on the same thread. */
const char* bikebf_last_error(void);

/* ---- keys ---- */

typedef struct bikebf_key bikebf_key; /* opaque */

/* Samples a key at circulant size r with d indices per half (h0 resampled
 * until invertible) from the (master_seed, stream) generator. out_resamples
 * (optional) receives the number of rejected h0 candidates. */
bikebf_status bikebf_keygen(uint32_t r, uint32_t d, uint64_t master_seed, uint64_t stream,
                            bikebf_key** out_key, uint32_t* out_resamples);

/* Builds a key from explicit supports (sorted or not; duplicates rejected).
 * No invertibility requirement — decoding does not need one. */
bikebf_status bikebf_key_create(uint32_t r, const uint32_t* h0, size_t h0_len,
                                const uint32_t* h1, size_t h1_len, bikebf_key** out_key);

void bikebf_key_free(bikebf_key* key);

uint32_t bikebf_key_r(const bikebf_key* key);
uint32_t bikebf_key_d(const bikebf_key* key);

/* Copies the support of half 0 or 1 (sorted ascending) into out. */
bikebf_status bikebf_key_support(const bikebf_key* key, unsigned half, uint32_t* out,
                                 size_t cap, size_t* out_len);

/* Key fixture files ("r: ...", "h0: ...", "h1: ..."); load ignores extra
 * fixture fields so a combined key+error file also loads as a key. */
bikebf_status bikebf_key_save(const bikebf_key* key, const char* path);
bikebf_status bikebf_key_load(const char* path, bikebf_key** out_key);

/* Writes a fixture with any subset of key / error / syndrome. has_e and has_s
 * select whether the "e:"/"s:" lines appear (length 0 writes an empty list). */
bikebf_status bikebf_fixture_save(const char* path, const bikebf_key* key, int has_e,
                                  const uint32_t* e, size_t e_len, int has_s,
                                  const uint32_t* s, size_t s_len);

/* Reads one index-list field ("h0", "h1", "e", "s") from a fixture.
 * *out_present is 0 when the field is absent (out untouched, *out_len = 0). */
bikebf_status bikebf_fixture_read_list(const char* path, const char* field, uint32_t* out,
                                       size_t cap, size_t* out_len, int* out_present);

/* ---- sampling and syndromes ---- */

/* Uniform weight-t error over [0, 2r) from (master_seed, stream); writes t
 * sorted indices. */
bikebf_status bikebf_sample_error(uint32_t r, uint32_t t, uint64_t master_seed,
                                  uint64_t stream, uint32_t* out, size_t cap,
                                  size_t* out_len);

/* s = H e^T for an error given as e_len sorted-or-not indices into [0, 2r). */
bikebf_status bikebf_syndrome(const bikebf_key* key, const uint32_t* e, size_t e_len,
                              uint32_t* out, size_t cap, size_t* out_len);

/* ---- decoding ---- */

/* Full decoder configuration. a and b are decimal strings (e.g. "0.00618658",
 * "10.8504") evaluated exactly; precision_bits > 0 truncates them to that
 * fixed-point precision first (MSNB window for a, fractional MSBs for b). */
typedef struct bikebf_config {
  uint32_t r;
  uint32_t w;
  uint32_t t;
  uint32_t security_lambda; /* 0 defaults to 128 */
  uint32_t delta;           /* threshold schedule offset, default 3 when 0 */
  uint32_t imax;            /* iteration count, default 7 when 0 */
  size_t block_size;        /* columns per block; 0 = one block over all 2r */
  int track_weight;         /* nonzero: feed tracked weight to the threshold */
  int trunc_thirds_bits;    /* -1 exact; >= 0 truncates the /3 schedule terms */
  const char* a;            /* NULL means "0" */
  const char* b;            /* NULL means "0" */
  uint32_t precision_bits;  /* 0 = use a, b at full precision */
} bikebf_config;

typedef struct bikebf_outcome {
  int converged; /* final syndrome identically zero */
  uint32_t iterations;
  uint64_t final_syndrome_weight;
  uint64_t flips_total;
} bikebf_outcome;

/* Per-iteration trace callback. threshold is the exact value as text (decimal
 * when terminating, "p/q" otherwise) and only valid during the call. */
typedef void (*bikebf_trace_fn)(void* user, uint32_t iteration, const char* threshold,
                                uint64_t weight_before, uint64_t flips,
                                uint64_t weight_after);

/* Decodes a syndrome (s_len indices into [0, r)). The error estimate is
 * written as sorted indices; flips_per_iter (optional) receives cfg->imax
 * entries. A non-converging decode is still BIKEBF_OK — inspect
 * outcome->converged. */
bikebf_status bikebf_decode(const bikebf_key* key, const bikebf_config* cfg,
                            const uint32_t* s, size_t s_len, uint32_t* e_out, size_t e_cap,
                            size_t* e_len, uint64_t* flips_per_iter, bikebf_trace_fn trace,
                            void* trace_user, bikebf_outcome* out);

/* ---- threshold quantization report ---- */

typedef struct bikebf_quantize_report {
  char a_binary[128];
  char a_decimal[64];
  char b_binary[128];
  char b_decimal[64];
} bikebf_quantize_report;

/* Renders coefficients at k-bit precision (k = 0: full precision; binary
 * expansions are cut at 20 fractional bits with a "..." suffix when they
 * continue). Values are exact decimals. */
bikebf_status bikebf_quantize(const char* a, const char* b, uint32_t k,
                              bikebf_quantize_report* out);

/* ---- calibration ---- */

typedef struct bikebf_fit {
  uint32_t r_prime;
  double a;
  double b;
  uint64_t num_samples;
} bikebf_fit;

/* Runs the best-first-threshold calibration at circulant size r_prime (w and
 * t from cfg; candidate threshold bases lo..hi, each applied as base + delta
 * exactly like the decoder's first iteration applies f(|s0|) + delta; the
 * best base is what gets fitted; block schedule cfg->block_size). out_base,
 * when non-NULL, roots the artifact files: base_samples.csv, base_fit.csv,
 * base_plot.csv, base.gp. */
bikebf_status bikebf_calibrate(const bikebf_config* cfg, uint32_t r_prime,
                               uint64_t num_samples, uint64_t master_seed, uint32_t lo,
                               uint32_t hi, unsigned workers, const char* out_base,
                               bikebf_fit* out_fit);

/* ---- DFR estimation ---- */

typedef struct bikebf_dfr_result {
  uint32_t r;
  uint64_t trials;
  uint64_t failures;
  double dfr;
  double ci_low; /* 95% Clopper-Pearson bounds */
  double ci_high;
} bikebf_dfr_result;

typedef struct bikebf_extrapolation {
  int present; /* 0: omitted (see the sweep warning) */
  double slope;
  double intercept;
  double r_star;
  uint32_t lambda;
} bikebf_extrapolation;

bikebf_status bikebf_dfr_estimate(const bikebf_config* cfg, uint64_t trials,
                                  uint64_t master_seed, unsigned workers,
                                  bikebf_dfr_result* out);

/* DFR sweep over strictly ascending r values; results must hold r_count
 * entries. out_base, when non-NULL, roots base.csv, base_plot.csv, base.gp
 * and (when fitted) base_extrapolation.csv. warning (optional) receives the
 * reason when the extrapolation is omitted. */
bikebf_status bikebf_dfr_sweep(const bikebf_config* cfg, const uint32_t* r_list,
                               size_t r_count, uint64_t trials_per_r, uint64_t master_seed,
                               unsigned workers, int fit_all, const char* out_base,
                               bikebf_dfr_result* results, bikebf_extrapolation* out_ex,
                               char* warning, size_t warning_cap);

/* Line fit through (r, log2 dfr) solved for DFR = 2^-lambda; fit_all = 0 uses
 * exactly the two lowest-dfr points. Zero-dfr points are skipped. */
bikebf_status bikebf_extrapolate(const double* r_values, const double* dfr_values,
                                 size_t count, uint32_t lambda, int fit_all,
                                 bikebf_extrapolation* out);

/* Reads a dfr CSV (schema r,trials,failures,dfr,ci_low,ci_high). */
bikebf_status bikebf_read_dfr_csv(const char* path, bikebf_dfr_result* out, size_t cap,
                                  size_t* out_len);

/* ---- hardware cost model ---- */

typedef struct bikebf_cost_report {
  uint64_t ram_e_bits;
  uint64_t ram_s_bits;
  uint64_t ram_i_bits;
  uint64_t total_mem_bits;
  uint64_t logic_xors;
  uint64_t total_area_xors;
  uint64_t latency_cycles;
  int layered;
} bikebf_cost_report;

/* logic_xors < 0 selects the per-variant default (3780 layered, 5134 not).
 * latency_iterations scales the block-sweep latency (pass 1 for the
 * single-sweep reading). */
bikebf_status bikebf_cost(uint64_t r, uint64_t w, uint64_t L, int layered,
                          int64_t logic_xors, uint32_t latency_iterations,
                          bikebf_cost_report* out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* BIKEBF_H */
