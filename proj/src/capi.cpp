#include "bikebf.h"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <exception>
#include <new>
#include <numeric>
#include <string>
#include <vector>

#include "bikebf/calibration.hpp"
#include "bikebf/cost.hpp"
#include "bikebf/decoder.hpp"
#include "bikebf/dfr.hpp"
#include "bikebf/errors.hpp"
#include "bikebf/gf2.hpp"
#include "bikebf/io.hpp"
#include "bikebf/threshold.hpp"

struct bikebf_key {
  bikebf::SparseKey key;
};

namespace {

using namespace bikebf;

thread_local std::string g_last_error;

// Thrown internally when a caller buffer cannot hold the result; the required
// size has already been reported through the out_len pointer.
struct BufferTooSmall {
  std::string what;
};

bikebf_status fail(bikebf_status s, std::string msg) {
  g_last_error = std::move(msg);
  return s;
}

template <typename F>
bikebf_status wrap(F&& f) noexcept {
  g_last_error.clear();
  try {
    return f();
  } catch (const BufferTooSmall& e) {
    return fail(BIKEBF_ERR_BUFFER_TOO_SMALL, e.what);
  } catch (const KeygenRetryLimitError& e) {
    return fail(BIKEBF_ERR_KEYGEN_RETRIES, e.what());
  } catch (const DegenerateFitError& e) {
    return fail(BIKEBF_ERR_DEGENERATE_FIT, e.what());
  } catch (const NoExtrapolationError& e) {
    return fail(BIKEBF_ERR_NO_EXTRAPOLATION, e.what());
  } catch (const ParseError& e) {
    return fail(BIKEBF_ERR_IO, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(BIKEBF_ERR_INVALID_ARG, e.what());
  } catch (const std::out_of_range& e) {
    return fail(BIKEBF_ERR_INVALID_ARG, e.what());
  } catch (const std::overflow_error& e) {
    return fail(BIKEBF_ERR_INVALID_ARG, e.what());
  } catch (const std::runtime_error& e) {
    return fail(BIKEBF_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(BIKEBF_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(BIKEBF_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(BIKEBF_ERR_INTERNAL, "unknown error");
  }
}

template <typename T>
void require(const T* p, const char* name) {
  if (p == nullptr) throw std::invalid_argument(std::string(name) + " is NULL");
}

void copy_indices(const std::vector<std::uint32_t>& v, std::uint32_t* out, std::size_t cap,
                  std::size_t* out_len) {
  require(out_len, "out_len");
  *out_len = v.size();
  if (v.size() > cap)
    throw BufferTooSmall{"need capacity " + std::to_string(v.size()) + ", got " +
                         std::to_string(cap)};
  require(out, "out");
  std::copy(v.begin(), v.end(), out);
}

void copy_string(const std::string& s, char* buf, std::size_t cap, const char* name) {
  if (s.size() + 1 > cap)
    throw BufferTooSmall{std::string(name) + " does not fit its buffer"};
  std::memcpy(buf, s.c_str(), s.size() + 1);
}

DecoderConfig to_config(const bikebf_config* c) {
  require(c, "config");
  DecoderConfig cfg;
  cfg.params.r = c->r;
  cfg.params.w = c->w;
  cfg.params.t = c->t;
  cfg.params.security_lambda = c->security_lambda == 0 ? 128 : c->security_lambda;
  cfg.params.delta = c->delta == 0 ? 3 : c->delta;
  cfg.params.imax = c->imax == 0 ? 7 : c->imax;
  cfg.block_size = c->block_size;
  cfg.track_weight_incrementally = c->track_weight != 0;
  cfg.trunc_thirds_bits = c->trunc_thirds_bits;
  cfg.coeffs = ThresholdCoefficients::from_decimal(c->a != nullptr ? c->a : "0",
                                                   c->b != nullptr ? c->b : "0");
  if (c->precision_bits > 0) cfg.coeffs = quantize(cfg.coeffs, c->precision_bits);
  return cfg;
}

void fill_dfr_result(const DfrEstimate& est, bikebf_dfr_result* out) {
  out->r = est.r;
  out->trials = est.trials;
  out->failures = est.failures;
  out->dfr = est.dfr_point;
  out->ci_low = est.ci_low;
  out->ci_high = est.ci_high;
}

}  // namespace

extern "C" {

const char* bikebf_last_error(void) { return g_last_error.c_str(); }

bikebf_status bikebf_keygen(uint32_t r, uint32_t d, uint64_t master_seed, uint64_t stream,
                            bikebf_key** out_key, uint32_t* out_resamples) {
  return wrap([&] {
    require(out_key, "out_key");
    StreamRng rng(master_seed, stream);
    KeygenResult kg = keygen(r, d, rng);
    *out_key = new bikebf_key{std::move(kg.key)};
    if (out_resamples != nullptr) *out_resamples = kg.resamples;
    return BIKEBF_OK;
  });
}

bikebf_status bikebf_key_create(uint32_t r, const uint32_t* h0, size_t h0_len,
                                const uint32_t* h1, size_t h1_len, bikebf_key** out_key) {
  return wrap([&] {
    require(out_key, "out_key");
    if (h0_len != 0) require(h0, "h0");
    if (h1_len != 0) require(h1, "h1");
    *out_key = new bikebf_key{SparseKey(r, std::vector<std::uint32_t>(h0, h0 + h0_len),
                                        std::vector<std::uint32_t>(h1, h1 + h1_len))};
    return BIKEBF_OK;
  });
}

void bikebf_key_free(bikebf_key* key) { delete key; }

uint32_t bikebf_key_r(const bikebf_key* key) { return key != nullptr ? key->key.r() : 0; }
uint32_t bikebf_key_d(const bikebf_key* key) { return key != nullptr ? key->key.d() : 0; }

bikebf_status bikebf_key_support(const bikebf_key* key, unsigned half, uint32_t* out,
                                 size_t cap, size_t* out_len) {
  return wrap([&] {
    require(key, "key");
    if (half > 1) throw std::invalid_argument("half must be 0 or 1");
    copy_indices(key->key.support(half), out, cap, out_len);
    return BIKEBF_OK;
  });
}

bikebf_status bikebf_key_save(const bikebf_key* key, const char* path) {
  return wrap([&] {
    require(key, "key");
    require(path, "path");
    Fixture f;
    f.r = key->key.r();
    f.h0 = key->key.h0();
    f.h1 = key->key.h1();
    write_fixture(path, f);
    return BIKEBF_OK;
  });
}

bikebf_status bikebf_key_load(const char* path, bikebf_key** out_key) {
  return wrap([&] {
    require(path, "path");
    require(out_key, "out_key");
    *out_key = new bikebf_key{key_from_fixture(read_fixture(path))};
    return BIKEBF_OK;
  });
}

bikebf_status bikebf_fixture_save(const char* path, const bikebf_key* key, int has_e,
                                  const uint32_t* e, size_t e_len, int has_s,
                                  const uint32_t* s, size_t s_len) {
  return wrap([&] {
    require(path, "path");
    Fixture f;
    if (key != nullptr) {
      f.r = key->key.r();
      f.h0 = key->key.h0();
      f.h1 = key->key.h1();
    }
    if (has_e != 0) {
      if (e_len != 0) require(e, "e");
      f.e = std::vector<std::uint32_t>(e, e + e_len);
    }
    if (has_s != 0) {
      if (s_len != 0) require(s, "s");
      f.s = std::vector<std::uint32_t>(s, s + s_len);
    }
    write_fixture(path, f);
    return BIKEBF_OK;
  });
}

bikebf_status bikebf_fixture_read_list(const char* path, const char* field, uint32_t* out,
                                       size_t cap, size_t* out_len, int* out_present) {
  return wrap([&] {
    require(path, "path");
    require(field, "field");
    require(out_len, "out_len");
    require(out_present, "out_present");
    Fixture f = read_fixture(path);
    const std::optional<std::vector<std::uint32_t>>* slot = nullptr;
    const std::string name = field;
    if (name == "h0") slot = &f.h0;
    else if (name == "h1") slot = &f.h1;
    else if (name == "e") slot = &f.e;
    else if (name == "s") slot = &f.s;
    else throw std::invalid_argument("unknown fixture list field '" + name + "'");
    if (!slot->has_value()) {
      *out_present = 0;
      *out_len = 0;
      return BIKEBF_OK;
    }
    *out_present = 1;
    copy_indices(**slot, out, cap, out_len);
    return BIKEBF_OK;
  });
}

bikebf_status bikebf_sample_error(uint32_t r, uint32_t t, uint64_t master_seed,
                                  uint64_t stream, uint32_t* out, size_t cap,
                                  size_t* out_len) {
  return wrap([&] {
    StreamRng rng(master_seed, stream);
    copy_indices(sample_error(r, t, rng).indices(), out, cap, out_len);
    return BIKEBF_OK;
  });
}

bikebf_status bikebf_syndrome(const bikebf_key* key, const uint32_t* e, size_t e_len,
                              uint32_t* out, size_t cap, size_t* out_len) {
  return wrap([&] {
    require(key, "key");
    if (e_len != 0) require(e, "e");
    BitVector ev = BitVector::from_indices(2 * static_cast<std::size_t>(key->key.r()),
                                           std::span<const std::uint32_t>(e, e_len));
    copy_indices(syndrome(key->key, ev).indices(), out, cap, out_len);
    return BIKEBF_OK;
  });
}

bikebf_status bikebf_decode(const bikebf_key* key, const bikebf_config* cfg,
                            const uint32_t* s, size_t s_len, uint32_t* e_out, size_t e_cap,
                            size_t* e_len, uint64_t* flips_per_iter, bikebf_trace_fn trace,
                            void* trace_user, bikebf_outcome* out) {
  return wrap([&] {
    require(key, "key");
    require(out, "out");
    DecoderConfig config = to_config(cfg);
    if (s_len != 0) require(s, "s");
    BitVector s0 = BitVector::from_indices(config.params.r,
                                           std::span<const std::uint32_t>(s, s_len));
    DecodeHooks hooks;
    if (trace != nullptr) {
      hooks.on_iteration = [&](const IterationEvent& ev) {
        trace(trace_user, ev.iteration, ev.threshold.to_exact_string().c_str(),
              ev.weight_before, ev.flips, ev.weight_after);
      };
    }
    DecodeOutcome outcome =
        decode(key->key, s0, config, trace != nullptr ? &hooks : nullptr);
    copy_indices(outcome.error_estimate.indices(), e_out, e_cap, e_len);
    if (flips_per_iter != nullptr)
      std::copy(outcome.flips_per_iteration.begin(), outcome.flips_per_iteration.end(),
                flips_per_iter);
    out->converged = outcome.converged ? 1 : 0;
    out->iterations = outcome.iterations_run;
    out->final_syndrome_weight = outcome.final_syndrome_weight;
    out->flips_total = std::accumulate(outcome.flips_per_iteration.begin(),
                                       outcome.flips_per_iteration.end(), std::uint64_t{0});
    return BIKEBF_OK;
  });
}

bikebf_status bikebf_quantize(const char* a, const char* b, uint32_t k,
                              bikebf_quantize_report* out) {
  return wrap([&] {
    require(a, "a");
    require(b, "b");
    require(out, "out");
    ThresholdCoefficients coeffs = ThresholdCoefficients::from_decimal(a, b);
    if (k > 0) coeffs = quantize(coeffs, k);
    QuantizeReport rep = describe_coefficients(coeffs);
    copy_string(rep.a.binary, out->a_binary, sizeof out->a_binary, "a binary");
    copy_string(rep.a.decimal, out->a_decimal, sizeof out->a_decimal, "a decimal");
    copy_string(rep.b.binary, out->b_binary, sizeof out->b_binary, "b binary");
    copy_string(rep.b.decimal, out->b_decimal, sizeof out->b_decimal, "b decimal");
    return BIKEBF_OK;
  });
}

bikebf_status bikebf_calibrate(const bikebf_config* cfg, uint32_t r_prime,
                               uint64_t num_samples, uint64_t master_seed, uint32_t lo,
                               uint32_t hi, unsigned workers, const char* out_base,
                               bikebf_fit* out_fit) {
  return wrap([&] {
    DecoderConfig config = to_config(cfg);
    CalibrationRun run = calibrate(r_prime, config.params, num_samples, master_seed,
                                   config.block_size, lo, hi, workers);
    if (out_base != nullptr) write_calibration_artifacts(out_base, run);
    if (out_fit != nullptr) {
      out_fit->r_prime = run.fit.r_prime;
      out_fit->a = run.fit.a;
      out_fit->b = run.fit.b;
      out_fit->num_samples = run.fit.num_samples;
    }
    return BIKEBF_OK;
  });
}

bikebf_status bikebf_dfr_estimate(const bikebf_config* cfg, uint64_t trials,
                                  uint64_t master_seed, unsigned workers,
                                  bikebf_dfr_result* out) {
  return wrap([&] {
    require(out, "out");
    fill_dfr_result(estimate_dfr(to_config(cfg), trials, master_seed, workers), out);
    return BIKEBF_OK;
  });
}

bikebf_status bikebf_dfr_sweep(const bikebf_config* cfg, const uint32_t* r_list,
                               size_t r_count, uint64_t trials_per_r, uint64_t master_seed,
                               unsigned workers, int fit_all, const char* out_base,
                               bikebf_dfr_result* results, bikebf_extrapolation* out_ex,
                               char* warning, size_t warning_cap) {
  return wrap([&] {
    require(r_list, "r_list");
    require(results, "results");
    std::vector<std::uint32_t> rs(r_list, r_list + r_count);
    SweepResult sw = sweep(to_config(cfg), rs, trials_per_r, master_seed, workers,
                           fit_all != 0);
    for (std::size_t i = 0; i < sw.estimates.size(); ++i)
      fill_dfr_result(sw.estimates[i], &results[i]);
    if (out_ex != nullptr) {
      *out_ex = {};
      if (sw.extrapolation) {
        out_ex->present = 1;
        out_ex->slope = sw.extrapolation->slope;
        out_ex->intercept = sw.extrapolation->intercept;
        out_ex->r_star = sw.extrapolation->r_star;
        out_ex->lambda = sw.extrapolation->lambda;
      }
    }
    if (warning != nullptr && warning_cap > 0)
      std::snprintf(warning, warning_cap, "%s", sw.warning.c_str());
    if (out_base != nullptr) write_sweep_artifacts(out_base, sw);
    return BIKEBF_OK;
  });
}

bikebf_status bikebf_extrapolate(const double* r_values, const double* dfr_values,
                                 size_t count, uint32_t lambda, int fit_all,
                                 bikebf_extrapolation* out) {
  return wrap([&] {
    require(r_values, "r_values");
    require(dfr_values, "dfr_values");
    require(out, "out");
    std::vector<std::pair<double, double>> points;
    points.reserve(count);
    for (std::size_t i = 0; i < count; ++i) points.emplace_back(r_values[i], dfr_values[i]);
    Extrapolation ex = extrapolate(points, lambda, fit_all != 0);
    out->present = 1;
    out->slope = ex.slope;
    out->intercept = ex.intercept;
    out->r_star = ex.r_star;
    out->lambda = ex.lambda;
    return BIKEBF_OK;
  });
}

bikebf_status bikebf_read_dfr_csv(const char* path, bikebf_dfr_result* out, size_t cap,
                                  size_t* out_len) {
  return wrap([&] {
    require(path, "path");
    require(out_len, "out_len");
    std::vector<DfrEstimate> rows = read_dfr_csv(path);
    *out_len = rows.size();
    if (rows.size() > cap)
      throw BufferTooSmall{"need capacity " + std::to_string(rows.size())};
    require(out, "out");
    for (std::size_t i = 0; i < rows.size(); ++i) fill_dfr_result(rows[i], &out[i]);
    return BIKEBF_OK;
  });
}

bikebf_status bikebf_cost(uint64_t r, uint64_t w, uint64_t L, int layered,
                          int64_t logic_xors, uint32_t latency_iterations,
                          bikebf_cost_report* out) {
  return wrap([&] {
    require(out, "out");
    CostReport rep = cost_report(r, w, L, layered != 0, logic_xors, latency_iterations);
    out->ram_e_bits = rep.ram_e_bits;
    out->ram_s_bits = rep.ram_s_bits;
    out->ram_i_bits = rep.ram_i_bits;
    out->total_mem_bits = rep.total_mem_bits;
    out->logic_xors = rep.logic_xors;
    out->total_area_xors = rep.total_area_xors;
    out->latency_cycles = rep.latency_cycles;
    out->layered = rep.layered ? 1 : 0;
    return BIKEBF_OK;
  });
}

}  // extern "C"
