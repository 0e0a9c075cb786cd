// Command-line front end. Everything goes through the C API in bikebf.h; this
// translation unit holds argument plumbing and report printing only.
#include <algorithm>
#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bikebf.h"

namespace {

struct CodeOpts {
  std::string preset;
  std::uint32_t r = 0;
  std::uint32_t w = 0;
  std::uint32_t t = 0;
  std::uint32_t lambda = 0;
  std::uint32_t delta = 0;
  std::uint32_t imax = 0;
  std::size_t block_size = 32;
  bool track_weight = false;
  int trunc_thirds = -1;
  std::string a = "0";
  std::string b = "0";
  std::uint32_t precision = 0;
};

// Shared decoder/code flags. Preset values fill anything the command line (or
// config file) leaves untouched; explicit flags always win.
void add_code_options(CLI::App* cmd, CodeOpts& o) {
  cmd->add_option("--preset", o.preset,
                  "parameter preset: bike-l1-layered (r=12992, B=32, 7-bit coefficients, "
                  "tracked weight) or bike-l1-nonlayered (r=12095, one block, full "
                  "precision)")
      ->check(CLI::IsMember({"bike-l1-layered", "bike-l1-nonlayered"}));
  cmd->add_option("--r", o.r, "circulant size r");
  cmd->add_option("--w", o.w, "row weight w (d = w/2 per half)");
  cmd->add_option("--t", o.t, "error weight t");
  cmd->add_option("--lambda", o.lambda, "security parameter (default 128)");
  cmd->add_option("--delta", o.delta, "threshold schedule offset (default 3)");
  cmd->add_option("--imax", o.imax, "iteration count (default 7)");
  cmd->add_option("--block-size", o.block_size,
                  "columns per block: 1 column-layered, 32 hardware, 0 one block over "
                  "all 2r columns (default 32)");
  cmd->add_flag("--track-weight,!--no-track-weight", o.track_weight,
                "feed the tracked (incrementally updated) syndrome weight to the "
                "threshold instead of recounting");
  cmd->add_option("--trunc-thirds", o.trunc_thirds,
                  "fractional bits kept in the /3 schedule terms; -1 = exact (default)");
  cmd->add_option("--a", o.a, "threshold coefficient a (decimal string)");
  cmd->add_option("--b", o.b, "threshold coefficient b (decimal string)");
  cmd->add_option("--precision", o.precision,
                  "fixed-point coefficient precision k in bits; 0 = full (default)");
}

bikebf_config resolve_config(const CLI::App* cmd, const CodeOpts& o) {
  bikebf_config c{};
  c.trunc_thirds_bits = -1;
  c.block_size = 32;
  static const std::string kLayeredA = "0.00618658";
  static const std::string kLayeredB = "10.8504";
  static const std::string kNonLayeredA = "0.006258";
  static const std::string kNonLayeredB = "11.094";
  const std::string* a = nullptr;
  const std::string* b = nullptr;
  if (o.preset == "bike-l1-layered") {
    c.r = 12992;
    c.w = 142;
    c.t = 134;
    c.security_lambda = 128;
    c.delta = 3;
    c.imax = 7;
    c.block_size = 32;
    c.track_weight = 1;
    a = &kLayeredA;
    b = &kLayeredB;
    c.precision_bits = 7;
  } else if (o.preset == "bike-l1-nonlayered") {
    c.r = 12095;
    c.w = 142;
    c.t = 134;
    c.security_lambda = 128;
    c.delta = 3;
    c.imax = 7;
    c.block_size = 0;
    c.track_weight = 0;
    a = &kNonLayeredA;
    b = &kNonLayeredB;
    c.precision_bits = 0;
  }
  if (cmd->count("--r") != 0) c.r = o.r;
  if (cmd->count("--w") != 0) c.w = o.w;
  if (cmd->count("--t") != 0) c.t = o.t;
  if (cmd->count("--lambda") != 0) c.security_lambda = o.lambda;
  if (cmd->count("--delta") != 0) c.delta = o.delta;
  if (cmd->count("--imax") != 0) c.imax = o.imax;
  if (cmd->count("--block-size") != 0) c.block_size = o.block_size;
  if (cmd->count("--track-weight") != 0 || cmd->count("--no-track-weight") != 0)
    c.track_weight = o.track_weight ? 1 : 0;
  if (cmd->count("--trunc-thirds") != 0) c.trunc_thirds_bits = o.trunc_thirds;
  if (cmd->count("--a") != 0) a = &o.a;
  if (cmd->count("--b") != 0) b = &o.b;
  if (cmd->count("--precision") != 0) c.precision_bits = o.precision;
  if (a == nullptr) a = &o.a;
  if (b == nullptr) b = &o.b;
  c.a = a->c_str();
  c.b = b->c_str();
  return c;
}

int report_error(bikebf_status s) {
  std::fprintf(stderr, "error: %s (status %d)\n", bikebf_last_error(), static_cast<int>(s));
  return 1;
}

struct KeyDeleter {
  void operator()(bikebf_key* k) const { bikebf_key_free(k); }
};
using KeyPtr = std::unique_ptr<bikebf_key, KeyDeleter>;

// ---- keygen ----

struct KeygenArgs {
  std::uint32_t r = 0;
  std::uint32_t d = 0;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::uint32_t with_error = 0;
  std::string out;
};

int run_keygen(const KeygenArgs& args) {
  bikebf_key* raw = nullptr;
  std::uint32_t resamples = 0;
  bikebf_status s = bikebf_keygen(args.r, args.d, args.seed, args.stream, &raw, &resamples);
  if (s != BIKEBF_OK) return report_error(s);
  KeyPtr key(raw);
  if (args.with_error == 0) {
    s = bikebf_key_save(key.get(), args.out.c_str());
    if (s != BIKEBF_OK) return report_error(s);
  } else {
    std::vector<std::uint32_t> e(args.with_error);
    std::size_t e_len = 0;
    // stream + 1: keeps the error draw independent of the key draw.
    s = bikebf_sample_error(args.r, args.with_error, args.seed, args.stream + 1, e.data(),
                            e.size(), &e_len);
    if (s != BIKEBF_OK) return report_error(s);
    s = bikebf_fixture_save(args.out.c_str(), key.get(), 1, e.data(), e_len, 0, nullptr, 0);
    if (s != BIKEBF_OK) return report_error(s);
  }
  std::printf("wrote %s (r=%" PRIu32 ", d=%" PRIu32 ", h0 resamples=%" PRIu32 ")\n",
              args.out.c_str(), bikebf_key_r(key.get()), bikebf_key_d(key.get()), resamples);
  return 0;
}

// ---- decode ----

struct DecodeArgs {
  std::string key_path;
  std::string input_path;  // defaults to key_path
  std::string trace_path;  // empty: trace to stdout
};

struct TraceSink {
  std::FILE* f = nullptr;
};

extern "C" void trace_to_file(void* user, uint32_t iteration, const char* threshold,
                              uint64_t weight_before, uint64_t flips, uint64_t weight_after) {
  auto* sink = static_cast<TraceSink*>(user);
  std::fprintf(sink->f, "%" PRIu32 ",%s,%" PRIu64 ",%" PRIu64 ",%" PRIu64 "\n", iteration,
               threshold, weight_before, flips, weight_after);
}

int run_decode(const CLI::App* cmd, const CodeOpts& code, const DecodeArgs& args) {
  bikebf_key* raw = nullptr;
  bikebf_status s = bikebf_key_load(args.key_path.c_str(), &raw);
  if (s != BIKEBF_OK) return report_error(s);
  KeyPtr key(raw);
  const std::uint32_t r = bikebf_key_r(key.get());

  bikebf_config cfg = resolve_config(cmd, code);
  cfg.r = r;  // the key is the authority on r and w
  cfg.w = 2 * bikebf_key_d(key.get());

  const std::string& input = args.input_path.empty() ? args.key_path : args.input_path;
  std::vector<std::uint32_t> e_true(2 * static_cast<std::size_t>(r));
  std::size_t e_true_len = 0;
  int has_e = 0;
  s = bikebf_fixture_read_list(input.c_str(), "e", e_true.data(), e_true.size(), &e_true_len,
                               &has_e);
  if (s != BIKEBF_OK) return report_error(s);
  std::vector<std::uint32_t> syn(r);
  std::size_t syn_len = 0;
  int has_s = 0;
  s = bikebf_fixture_read_list(input.c_str(), "s", syn.data(), syn.size(), &syn_len, &has_s);
  if (s != BIKEBF_OK) return report_error(s);
  if (has_e == 0 && has_s == 0) {
    std::fprintf(stderr, "error: '%s' provides neither an error ('e:') nor a syndrome "
                         "('s:') to decode\n",
                 input.c_str());
    return 1;
  }
  if (has_e != 0) {
    std::vector<std::uint32_t> computed(r);
    std::size_t computed_len = 0;
    s = bikebf_syndrome(key.get(), e_true.data(), e_true_len, computed.data(),
                        computed.size(), &computed_len);
    if (s != BIKEBF_OK) return report_error(s);
    if (has_s != 0 && (computed_len != syn_len ||
                       !std::equal(computed.begin(), computed.begin() + computed_len,
                                   syn.begin()))) {
      std::fprintf(stderr, "error: '%s' carries both e and s but they disagree\n",
                   input.c_str());
      return 1;
    }
    syn = std::move(computed);
    syn_len = computed_len;
  }

  TraceSink sink{stdout};
  std::FILE* trace_file = nullptr;
  if (!args.trace_path.empty()) {
    trace_file = std::fopen(args.trace_path.c_str(), "wb");
    if (trace_file == nullptr) {
      std::fprintf(stderr, "error: cannot open '%s' for writing\n", args.trace_path.c_str());
      return 1;
    }
    sink.f = trace_file;
  }
  std::fprintf(sink.f, "iter,T,weight_before,flips,weight_after\n");

  std::vector<std::uint32_t> e_est(2 * static_cast<std::size_t>(r));
  std::size_t e_est_len = 0;
  bikebf_outcome outcome{};
  s = bikebf_decode(key.get(), &cfg, syn.data(), syn_len, e_est.data(), e_est.size(),
                    &e_est_len, nullptr, trace_to_file, &sink, &outcome);
  if (trace_file != nullptr) std::fclose(trace_file);
  if (s != BIKEBF_OK) return report_error(s);

  bool success = outcome.converged != 0;
  if (has_e != 0) {
    success = outcome.converged != 0 && e_est_len == e_true_len &&
              std::equal(e_est.begin(), e_est.begin() + e_est_len, e_true.begin());
    std::printf("converged=%d estimate_matches_planted_error=%d iterations=%" PRIu32
                " flips=%" PRIu64 " final_syndrome_weight=%" PRIu64 "\n",
                outcome.converged, success ? 1 : 0, outcome.iterations, outcome.flips_total,
                outcome.final_syndrome_weight);
  } else {
    std::printf("converged=%d iterations=%" PRIu32 " flips=%" PRIu64
                " final_syndrome_weight=%" PRIu64 "\n",
                outcome.converged, outcome.iterations, outcome.flips_total,
                outcome.final_syndrome_weight);
  }
  return success ? 0 : 2;
}

// ---- dfr ----

struct DfrArgs {
  std::vector<std::uint32_t> r_list;
  std::uint64_t trials = 1000;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  bool fit_all = false;
  std::string out_base;
};

int run_dfr(const CLI::App* cmd, const CodeOpts& code, const DfrArgs& args) {
  bikebf_config cfg = resolve_config(cmd, code);
  std::vector<bikebf_dfr_result> results(args.r_list.size());
  bikebf_extrapolation ex{};
  char warning[256] = {0};
  bikebf_status s = bikebf_dfr_sweep(
      &cfg, args.r_list.data(), args.r_list.size(), args.trials, args.seed, args.workers,
      args.fit_all ? 1 : 0, args.out_base.empty() ? nullptr : args.out_base.c_str(),
      results.data(), &ex, warning, sizeof warning);
  if (s != BIKEBF_OK) return report_error(s);
  std::printf("r,trials,failures,dfr,ci_low,ci_high\n");
  for (const bikebf_dfr_result& e : results)
    std::printf("%" PRIu32 ",%" PRIu64 ",%" PRIu64 ",%.12g,%.12g,%.12g\n", e.r, e.trials,
                e.failures, e.dfr, e.ci_low, e.ci_high);
  if (ex.present != 0)
    std::printf("extrapolation: slope=%.12g intercept=%.12g r_star=%.12g lambda=%" PRIu32
                "\n",
                ex.slope, ex.intercept, ex.r_star, ex.lambda);
  if (warning[0] != '\0') std::fprintf(stderr, "warning: %s\n", warning);
  return 0;
}

// ---- calibrate ----

struct CalibrateArgs {
  std::uint32_t r_prime = 0;
  std::uint64_t samples = 10000;
  std::uint32_t lo = 30;
  std::uint32_t hi = 60;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::string out_base;
};

int run_calibrate(const CLI::App* cmd, const CodeOpts& code, const CalibrateArgs& args) {
  bikebf_config cfg = resolve_config(cmd, code);
  bikebf_fit fit{};
  bikebf_status s = bikebf_calibrate(
      &cfg, args.r_prime, args.samples, args.seed, args.lo, args.hi, args.workers,
      args.out_base.empty() ? nullptr : args.out_base.c_str(), &fit);
  if (s != BIKEBF_OK) return report_error(s);
  std::printf("r_prime,a,b,n\n%" PRIu32 ",%.12g,%.12g,%" PRIu64 "\n", fit.r_prime, fit.a,
              fit.b, fit.num_samples);
  return 0;
}

// ---- quantize ----

struct QuantizeArgs {
  std::string a;
  std::string b;
  std::uint32_t k = 7;
};

int run_quantize(const QuantizeArgs& args) {
  bikebf_quantize_report full{};
  bikebf_status s = bikebf_quantize(args.a.c_str(), args.b.c_str(), 0, &full);
  if (s != BIKEBF_OK) return report_error(s);
  bikebf_quantize_report quant{};
  s = bikebf_quantize(args.a.c_str(), args.b.c_str(), args.k, &quant);
  if (s != BIKEBF_OK) return report_error(s);
  std::printf("coefficient,precision,binary,decimal\n");
  std::printf("a,full,%s,%s\n", full.a_binary, full.a_decimal);
  std::printf("a,%" PRIu32 ",%s,%s\n", args.k, quant.a_binary, quant.a_decimal);
  std::printf("b,full,%s,%s\n", full.b_binary, full.b_decimal);
  std::printf("b,%" PRIu32 ",%s,%s\n", args.k, quant.b_binary, quant.b_decimal);
  return 0;
}

// ---- cost ----

struct CostArgs {
  std::uint64_t r = 0;
  std::uint64_t w = 142;
  std::uint64_t L = 32;
  bool layered = false;
  bool non_layered = false;
  std::int64_t logic_xors = -1;
  std::uint32_t latency_iterations = 1;
};

int run_cost(const CostArgs& args) {
  if (!args.layered && !args.non_layered) {
    std::fprintf(stderr, "error: pick a variant: --layered or --non-layered\n");
    return 1;
  }
  bikebf_cost_report rep{};
  bikebf_status s = bikebf_cost(args.r, args.w, args.L, args.layered ? 1 : 0,
                                args.logic_xors, args.latency_iterations, &rep);
  if (s != BIKEBF_OK) return report_error(s);
  std::printf("r value,%" PRIu64 "\n", args.r);
  std::printf("RAM E,%" PRIu64 "\n", rep.ram_e_bits);
  std::printf("RAM S,%" PRIu64 "\n", rep.ram_s_bits);
  std::printf("RAM I,%" PRIu64 "\n", rep.ram_i_bits);
  std::printf("Total memory (bits),%" PRIu64 "\n", rep.total_mem_bits);
  std::printf("Logic (# of XORs),%" PRIu64 "\n", rep.logic_xors);
  std::printf("Total area (# of XORs),%" PRIu64 "\n", rep.total_area_xors);
  std::printf("Latency (# of clk cycles),%" PRIu64 "\n", rep.latency_cycles);
  return 0;
}

// ---- extrapolate ----

struct ExtrapolateArgs {
  std::string csv;
  std::uint32_t lambda = 128;
  bool fit_all = false;
};

int run_extrapolate(const ExtrapolateArgs& args) {
  std::vector<bikebf_dfr_result> rows(4096);
  std::size_t n = 0;
  bikebf_status s = bikebf_read_dfr_csv(args.csv.c_str(), rows.data(), rows.size(), &n);
  if (s != BIKEBF_OK) return report_error(s);
  std::vector<double> rs(n);
  std::vector<double> dfrs(n);
  for (std::size_t i = 0; i < n; ++i) {
    rs[i] = rows[i].r;
    dfrs[i] = rows[i].dfr;
  }
  bikebf_extrapolation ex{};
  s = bikebf_extrapolate(rs.data(), dfrs.data(), n, args.lambda, args.fit_all ? 1 : 0, &ex);
  if (s != BIKEBF_OK) return report_error(s);
  std::printf("slope,intercept,r_star,lambda\n%.12g,%.12g,%.12g,%" PRIu32 "\n", ex.slope,
              ex.intercept, ex.r_star, ex.lambda);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"QC-MDPC bit-flipping decoder toolkit: decoding, threshold quantization "
               "and calibration, Monte Carlo DFR estimation, hardware cost model"};
  app.require_subcommand(1);

  KeygenArgs keygen_args;
  CLI::App* keygen = app.add_subcommand("keygen", "sample a key and write it as a fixture");
  keygen->set_config("--config");
  keygen->add_option("--r", keygen_args.r, "circulant size")->required();
  keygen->add_option("--d", keygen_args.d, "indices per half (= w/2)")->required();
  keygen->add_option("--seed", keygen_args.seed, "master seed")
      ->envname("BIKEBF_SEED");
  keygen->add_option("--stream", keygen_args.stream, "RNG stream index (default 0)");
  keygen->add_option("--with-error", keygen_args.with_error,
                     "also sample a weight-t error into the fixture (uses stream+1)");
  keygen->add_option("--out", keygen_args.out, "output fixture path")->required();

  CodeOpts decode_code;
  DecodeArgs decode_args;
  CLI::App* decode = app.add_subcommand("decode", "decode one fixture and emit the trace");
  decode->set_config("--config");
  add_code_options(decode, decode_code);
  decode->add_option("--key", decode_args.key_path, "key fixture path")->required();
  decode->add_option("--input", decode_args.input_path,
                     "fixture holding 'e:' and/or 's:' (default: the key file)");
  decode->add_option("--trace", decode_args.trace_path,
                     "write the iteration trace CSV here instead of stdout");

  CodeOpts dfr_code;
  DfrArgs dfr_args;
  CLI::App* dfr = app.add_subcommand("dfr", "Monte Carlo DFR sweep with extrapolation");
  dfr->set_config("--config");
  add_code_options(dfr, dfr_code);
  dfr->add_option("--r-list", dfr_args.r_list, "ascending r values")
      ->required()
      ->delimiter(',');
  dfr->add_option("--trials", dfr_args.trials, "trials per r (default 1000)");
  dfr->add_option("--seed", dfr_args.seed, "master seed")->envname("BIKEBF_SEED");
  dfr->add_option("--workers", dfr_args.workers, "worker threads (default 1)");
  dfr->add_flag("--fit-all", dfr_args.fit_all,
                "extrapolate by OLS over all nonzero points instead of the two lowest");
  dfr->add_option("--out", dfr_args.out_base,
                  "artifact base path (writes base.csv, base_plot.csv, base.gp, "
                  "base_extrapolation.csv)");

  CodeOpts cal_code;
  CalibrateArgs cal_args;
  CLI::App* calibrate = app.add_subcommand(
      "calibrate", "derive threshold coefficients by best-first-threshold search");
  calibrate->set_config("--config");
  add_code_options(calibrate, cal_code);
  calibrate->add_option("--r-prime", cal_args.r_prime, "calibration circulant size")
      ->required();
  calibrate->add_option("--samples", cal_args.samples, "sample count (default 10000)");
  calibrate->add_option("--lo", cal_args.lo, "smallest candidate threshold (default 30)");
  calibrate->add_option("--hi", cal_args.hi, "largest candidate threshold (default 60)");
  calibrate->add_option("--seed", cal_args.seed, "master seed")->envname("BIKEBF_SEED");
  calibrate->add_option("--workers", cal_args.workers, "worker threads (default 1)");
  calibrate->add_option("--out", cal_args.out_base,
                        "artifact base path (writes base_samples.csv, base_fit.csv, "
                        "base_plot.csv, base.gp)");

  QuantizeArgs quant_args;
  CLI::App* quantize = app.add_subcommand(
      "quantize", "fixed-point truncation report for threshold coefficients");
  quantize->set_config("--config");
  quantize->add_option("--a", quant_args.a, "coefficient a (decimal)")->required();
  quantize->add_option("--b", quant_args.b, "coefficient b (decimal)")->required();
  quantize->add_option("--k", quant_args.k, "precision in bits (default 7)");

  CostArgs cost_args;
  CLI::App* cost = app.add_subcommand("cost", "hardware memory/latency/area model");
  cost->set_config("--config");
  cost->add_option("--r", cost_args.r, "circulant size")->required();
  cost->add_option("--w", cost_args.w, "row weight (default 142)");
  cost->add_option("--L", cost_args.L, "datapath parallelism (default 32)");
  CLI::Option* layered_flag = cost->add_flag("--layered", cost_args.layered,
                                             "layered decoder variant");
  cost->add_flag("--non-layered", cost_args.non_layered, "non-layered decoder variant")
      ->excludes(layered_flag);
  cost->add_option("--logic-xors", cost_args.logic_xors,
                   "logic area in XORs; -1 = variant default (3780/5134)");
  cost->add_option("--latency-iterations", cost_args.latency_iterations,
                   "multiply latency by this iteration count (default 1, the table "
                   "definition)");

  ExtrapolateArgs ex_args;
  CLI::App* extrapolate =
      app.add_subcommand("extrapolate", "fit log2(dfr) vs r from a dfr CSV");
  extrapolate->set_config("--config");
  extrapolate->add_option("--csv", ex_args.csv, "dfr CSV path")->required();
  extrapolate->add_option("--lambda", ex_args.lambda, "security target (default 128)");
  extrapolate->add_flag("--fit-all", ex_args.fit_all, "OLS over all nonzero points");

  CLI11_PARSE(app, argc, argv);

  if (*keygen) return run_keygen(keygen_args);
  if (*decode) return run_decode(decode, decode_code, decode_args);
  if (*dfr) return run_dfr(dfr, dfr_code, dfr_args);
  if (*calibrate) return run_calibrate(calibrate, cal_code, cal_args);
  if (*quantize) return run_quantize(quant_args);
  if (*cost) return run_cost(cost_args);
  if (*extrapolate) return run_extrapolate(ex_args);
  return 1;
}
