#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "bikebf.h"
#include "bikebf/calibration.hpp"
#include "bikebf/dfr.hpp"
#include "bikebf/gf2.hpp"
#include "doctest.h"

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    std::random_device rd;
    path = std::filesystem::temp_directory_path() /
           ("bikebf_capi_" + std::to_string(rd()) + "_" + std::to_string(rd()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

struct KeyHandle {
  bikebf_key* key = nullptr;
  ~KeyHandle() { bikebf_key_free(key); }
};

bikebf_config desk_config() {
  bikebf_config c{};
  c.r = 13;
  c.w = 6;
  c.t = 1;
  c.security_lambda = 128;
  c.delta = 1;
  c.imax = 4;
  c.block_size = 0;
  c.track_weight = 0;
  c.trunc_thirds_bits = -1;
  c.a = "0";
  c.b = "2";
  c.precision_bits = 0;
  return c;
}

struct TraceRow {
  uint32_t iteration;
  std::string threshold;
  uint64_t weight_before;
  uint64_t flips;
  uint64_t weight_after;
};

void trace_sink(void* user, uint32_t iteration, const char* threshold,
                uint64_t weight_before, uint64_t flips, uint64_t weight_after) {
  auto* rows = static_cast<std::vector<TraceRow>*>(user);
  rows->push_back({iteration, threshold, weight_before, flips, weight_after});
}

}  // namespace

TEST_CASE("c api key lifecycle, accessors and supports") {
  KeyHandle kg;
  uint32_t resamples = 777;
  REQUIRE(bikebf_keygen(101, 5, 42, 0, &kg.key, &resamples) == BIKEBF_OK);
  CHECK(bikebf_key_r(kg.key) == 101);
  CHECK(bikebf_key_d(kg.key) == 5);
  CHECK(resamples < 1000);
  CHECK(std::string(bikebf_last_error()).empty());

  uint32_t supp[5];
  size_t len = 0;
  REQUIRE(bikebf_key_support(kg.key, 0, supp, 5, &len) == BIKEBF_OK);
  REQUIRE(len == 5);
  for (size_t i = 1; i < 5; ++i) CHECK(supp[i - 1] < supp[i]);
  REQUIRE(bikebf_key_support(kg.key, 1, supp, 5, &len) == BIKEBF_OK);
  CHECK(len == 5);

  // Same seed and stream reproduce the key; the next stream moves it.
  KeyHandle again, moved;
  REQUIRE(bikebf_keygen(101, 5, 42, 0, &again.key, nullptr) == BIKEBF_OK);
  REQUIRE(bikebf_keygen(101, 5, 42, 1, &moved.key, nullptr) == BIKEBF_OK);
  uint32_t h0_kg[5], h0_again[5], h0_moved[5];
  REQUIRE(bikebf_key_support(kg.key, 0, h0_kg, 5, &len) == BIKEBF_OK);
  REQUIRE(bikebf_key_support(again.key, 0, h0_again, 5, &len) == BIKEBF_OK);
  REQUIRE(bikebf_key_support(moved.key, 0, h0_moved, 5, &len) == BIKEBF_OK);
  CHECK(std::memcmp(h0_kg, h0_again, sizeof h0_kg) == 0);
  CHECK(std::memcmp(h0_kg, h0_moved, sizeof h0_kg) != 0);

  // Buffer too small: required size still reported.
  uint32_t tiny[1];
  len = 0;
  CHECK(bikebf_key_support(kg.key, 0, tiny, 1, &len) == BIKEBF_ERR_BUFFER_TOO_SMALL);
  CHECK(len == 5);
  CHECK_FALSE(std::string(bikebf_last_error()).empty());

  CHECK(bikebf_key_support(kg.key, 2, supp, 5, &len) == BIKEBF_ERR_INVALID_ARG);
  CHECK(bikebf_key_r(nullptr) == 0);
  CHECK(bikebf_key_d(nullptr) == 0);
  bikebf_key_free(nullptr);  // must be a no-op
}

TEST_CASE("c api keygen failure paths and key_create validation") {
  bikebf_key* key = nullptr;
  // Even-weight halves are never invertible, so the retry limit trips.
  CHECK(bikebf_keygen(5, 2, 1, 0, &key, nullptr) == BIKEBF_ERR_KEYGEN_RETRIES);
  CHECK_FALSE(std::string(bikebf_last_error()).empty());

  const uint32_t dup[3] = {0, 1, 1};
  const uint32_t ok0[3] = {0, 1, 3};
  const uint32_t ok1[3] = {0, 2, 7};
  CHECK(bikebf_key_create(13, dup, 3, ok1, 3, &key) == BIKEBF_ERR_INVALID_ARG);
  CHECK_FALSE(std::string(bikebf_last_error()).empty());
  const uint32_t big[3] = {0, 1, 13};
  CHECK(bikebf_key_create(13, ok0, 3, big, 3, &key) == BIKEBF_ERR_INVALID_ARG);
  CHECK(bikebf_key_create(13, ok0, 3, ok1, 2, &key) == BIKEBF_ERR_INVALID_ARG);
  CHECK(bikebf_keygen(13, 3, 1, 0, nullptr, nullptr) == BIKEBF_ERR_INVALID_ARG);

  KeyHandle k;
  REQUIRE(bikebf_key_create(13, ok0, 3, ok1, 3, &k.key) == BIKEBF_OK);
  CHECK(bikebf_key_r(k.key) == 13);
  CHECK(bikebf_key_d(k.key) == 3);
  CHECK(std::string(bikebf_last_error()).empty());  // cleared by the success
}

TEST_CASE("c api fixture save, load and field reads") {
  TempDir tmp;
  const uint32_t h0[3] = {0, 1, 3};
  const uint32_t h1[3] = {0, 2, 7};
  KeyHandle k;
  REQUIRE(bikebf_key_create(13, h0, 3, h1, 3, &k.key) == BIKEBF_OK);

  REQUIRE(bikebf_key_save(k.key, tmp.file("key.txt").c_str()) == BIKEBF_OK);
  KeyHandle back;
  REQUIRE(bikebf_key_load(tmp.file("key.txt").c_str(), &back.key) == BIKEBF_OK);
  CHECK(bikebf_key_r(back.key) == 13);
  uint32_t supp[3];
  size_t len = 0;
  REQUIRE(bikebf_key_support(back.key, 1, supp, 3, &len) == BIKEBF_OK);
  CHECK(supp[2] == 7);

  const uint32_t e[2] = {5, 20};
  REQUIRE(bikebf_fixture_save(tmp.file("inst.txt").c_str(), k.key, 1, e, 2, 1, nullptr,
                              0) == BIKEBF_OK);
  // The combined fixture still loads as a key (extra fields ignored).
  KeyHandle combined;
  CHECK(bikebf_key_load(tmp.file("inst.txt").c_str(), &combined.key) == BIKEBF_OK);

  uint32_t list[4];
  size_t list_len = 0;
  int present = 0;
  REQUIRE(bikebf_fixture_read_list(tmp.file("inst.txt").c_str(), "e", list, 4, &list_len,
                                   &present) == BIKEBF_OK);
  CHECK(present == 1);
  REQUIRE(list_len == 2);
  CHECK(list[0] == 5);
  CHECK(list[1] == 20);
  REQUIRE(bikebf_fixture_read_list(tmp.file("inst.txt").c_str(), "s", list, 4, &list_len,
                                   &present) == BIKEBF_OK);
  CHECK(present == 1);
  CHECK(list_len == 0);  // saved as an explicit empty list

  REQUIRE(bikebf_fixture_read_list(tmp.file("key.txt").c_str(), "e", list, 4, &list_len,
                                   &present) == BIKEBF_OK);
  CHECK(present == 0);
  CHECK(list_len == 0);
  CHECK(bikebf_fixture_read_list(tmp.file("key.txt").c_str(), "q", list, 4, &list_len,
                                 &present) == BIKEBF_ERR_INVALID_ARG);

  CHECK(bikebf_key_load(tmp.file("absent.txt").c_str(), &back.key) == BIKEBF_ERR_IO);
  std::ofstream bad(tmp.file("bad.txt"));
  bad << "r 13\n";
  bad.close();
  CHECK(bikebf_key_load(tmp.file("bad.txt").c_str(), &back.key) == BIKEBF_ERR_IO);
  CHECK(bikebf_key_save(k.key, nullptr) == BIKEBF_ERR_INVALID_ARG);
}

TEST_CASE("c api error sampling and syndromes match the library") {
  uint32_t out[7];
  size_t len = 0;
  REQUIRE(bikebf_sample_error(50, 7, 9, 3, out, 7, &len) == BIKEBF_OK);
  REQUIRE(len == 7);
  for (size_t i = 1; i < 7; ++i) CHECK(out[i - 1] < out[i]);
  CHECK(out[6] < 100);

  bikebf::StreamRng rng(9, 3);
  bikebf::BitVector e = bikebf::sample_error(50, 7, rng);
  auto want = e.indices();
  REQUIRE(want.size() == 7);
  for (size_t i = 0; i < 7; ++i) CHECK(out[i] == want[i]);

  const uint32_t h0[3] = {0, 1, 3};
  const uint32_t h1[3] = {0, 2, 7};
  KeyHandle k;
  REQUIRE(bikebf_key_create(13, h0, 3, h1, 3, &k.key) == BIKEBF_OK);
  const uint32_t err[2] = {5, 20};
  uint32_t synd[13];
  size_t synd_len = 0;
  REQUIRE(bikebf_syndrome(k.key, err, 2, synd, 13, &synd_len) == BIKEBF_OK);

  bikebf::SparseKey ck(13, {0, 1, 3}, {0, 2, 7});
  bikebf::BitVector ce(26);
  ce.set(5);
  ce.set(20);
  auto cw = bikebf::syndrome(ck, ce).indices();
  REQUIRE(synd_len == cw.size());
  for (size_t i = 0; i < synd_len; ++i) CHECK(synd[i] == cw[i]);

  CHECK(bikebf_sample_error(13, 27, 1, 0, out, 7, &len) == BIKEBF_ERR_INVALID_ARG);
  const uint32_t oob[1] = {26};
  CHECK(bikebf_syndrome(k.key, oob, 1, synd, 13, &synd_len) == BIKEBF_ERR_INVALID_ARG);
}

TEST_CASE("c api decode round trip with trace and per-iteration flips") {
  const uint32_t h0[3] = {0, 1, 3};
  const uint32_t h1[3] = {0, 2, 7};
  KeyHandle k;
  REQUIRE(bikebf_key_create(13, h0, 3, h1, 3, &k.key) == BIKEBF_OK);

  const uint32_t err[1] = {20};
  uint32_t synd[13];
  size_t synd_len = 0;
  REQUIRE(bikebf_syndrome(k.key, err, 1, synd, 13, &synd_len) == BIKEBF_OK);
  REQUIRE(synd_len == 3);  // distinct column support at a Sidon-set key

  bikebf_config cfg = desk_config();
  uint32_t e_out[8];
  size_t e_len = 0;
  uint64_t flips[4] = {9, 9, 9, 9};
  std::vector<TraceRow> rows;
  bikebf_outcome out{};
  REQUIRE(bikebf_decode(k.key, &cfg, synd, synd_len, e_out, 8, &e_len, flips, trace_sink,
                        &rows, &out) == BIKEBF_OK);
  CHECK(out.converged == 1);
  CHECK(out.iterations == 4);
  CHECK(out.final_syndrome_weight == 0);
  CHECK(out.flips_total == 1);
  REQUIRE(e_len == 1);
  CHECK(e_out[0] == 20);
  CHECK(flips[0] == 1);
  CHECK(flips[1] == 0);
  CHECK(flips[2] == 0);
  CHECK(flips[3] == 0);
  REQUIRE(rows.size() == 4);
  // delta = 1 on b = 2: first threshold is max(f, T'+delta) = 3.
  CHECK(rows[0].threshold == "3");
  CHECK(rows[0].weight_before == 3);
  CHECK(rows[0].flips == 1);
  CHECK(rows[0].weight_after == 0);

  // delta left 0 defaults to 3, pushing the first threshold to 2 + 3 = 5.
  bikebf_config dflt = desk_config();
  dflt.delta = 0;
  dflt.imax = 0;  // defaults to 7
  rows.clear();
  uint64_t flips7[7];
  REQUIRE(bikebf_decode(k.key, &dflt, synd, synd_len, e_out, 8, &e_len, flips7,
                        trace_sink, &rows, &out) == BIKEBF_OK);
  REQUIRE(rows.size() == 7);
  CHECK(out.iterations == 7);
  CHECK(rows[0].threshold == "5");
  CHECK(out.converged == 0);  // threshold 5 > column weight 3: nothing flips
  CHECK(out.flips_total == 0);
  CHECK(out.final_syndrome_weight == 3);

  // Error-estimate buffer too small: required length is still reported.
  e_len = 0;
  CHECK(bikebf_decode(k.key, &cfg, synd, synd_len, e_out, 0, &e_len, nullptr, nullptr,
                      nullptr, &out) == BIKEBF_ERR_BUFFER_TOO_SMALL);
  CHECK(e_len == 1);

  const uint32_t bad_s[1] = {13};
  CHECK(bikebf_decode(k.key, &cfg, bad_s, 1, e_out, 8, &e_len, nullptr, nullptr, nullptr,
                      &out) == BIKEBF_ERR_INVALID_ARG);
  CHECK(bikebf_decode(k.key, nullptr, synd, synd_len, e_out, 8, &e_len, nullptr, nullptr,
                      nullptr, &out) == BIKEBF_ERR_INVALID_ARG);
  bikebf_config mismatched = desk_config();
  mismatched.r = 17;
  CHECK(bikebf_decode(k.key, &mismatched, synd, synd_len, e_out, 8, &e_len, nullptr,
                      nullptr, nullptr, &out) == BIKEBF_ERR_INVALID_ARG);
}

TEST_CASE("c api quantization report") {
  bikebf_quantize_report rep{};
  REQUIRE(bikebf_quantize("0.00618658", "10.8504", 7, &rep) == BIKEBF_OK);
  CHECK(std::string(rep.a_binary) == "0.00000001100101");
  CHECK(std::string(rep.a_decimal) == "0.00616455078125");
  CHECK(std::string(rep.b_binary) == "1010.1101100");
  CHECK(std::string(rep.b_decimal) == "10.84375");

  REQUIRE(bikebf_quantize("0.00618658", "10.8504", 0, &rep) == BIKEBF_OK);
  CHECK(std::string(rep.a_binary) == "0.00000001100101010111...");
  CHECK(std::string(rep.a_decimal) == "0.00618658");
  CHECK(std::string(rep.b_binary) == "1010.11011001101100111101...");
  CHECK(std::string(rep.b_decimal) == "10.8504");

  CHECK(bikebf_quantize("x", "10.8504", 7, &rep) == BIKEBF_ERR_INVALID_ARG);
  CHECK(bikebf_quantize(nullptr, "1", 7, &rep) == BIKEBF_ERR_INVALID_ARG);
}

TEST_CASE("c api calibration matches the library and writes artifacts") {
  TempDir tmp;
  bikebf_config cfg{};
  cfg.w = 10;
  cfg.t = 4;
  cfg.block_size = 8;
  cfg.trunc_thirds_bits = -1;
  bikebf_fit fit{};
  REQUIRE(bikebf_calibrate(&cfg, 29, 120, 999, 1, 5, 2, tmp.file("cal").c_str(), &fit) ==
          BIKEBF_OK);
  CHECK(fit.r_prime == 29);
  CHECK(fit.num_samples == 120);

  bikebf::CodeParams params{0, 10, 4, 128, 3, 7};
  auto run = bikebf::calibrate(29, params, 120, 999, 8, 1, 5, 1);
  CHECK(fit.a == run.fit.a);
  CHECK(fit.b == run.fit.b);

  for (const char* suffix : {"_samples.csv", "_fit.csv", "_plot.csv", ".gp"})
    CHECK(std::filesystem::exists(tmp.file("cal") + suffix));

  CHECK(bikebf_calibrate(&cfg, 29, 10, 999, 1, 5, 1, nullptr, &fit) ==
        BIKEBF_ERR_INVALID_ARG);  // too few samples
}

TEST_CASE("c api dfr estimation, sweep and extrapolation") {
  TempDir tmp;
  bikebf_config cfg{};
  cfg.r = 29;
  cfg.w = 10;
  cfg.t = 4;
  cfg.delta = 1;
  cfg.imax = 3;
  cfg.block_size = 8;
  cfg.trunc_thirds_bits = -1;
  cfg.b = "3";

  bikebf_dfr_result est{};
  REQUIRE(bikebf_dfr_estimate(&cfg, 200, 42, 2, &est) == BIKEBF_OK);
  bikebf::DecoderConfig ccfg;
  ccfg.params = bikebf::CodeParams{29, 10, 4, 128, 1, 3};
  ccfg.coeffs = bikebf::ThresholdCoefficients::from_decimal("0", "3");
  ccfg.block_size = 8;
  bikebf::DfrEstimate want = bikebf::estimate_dfr(ccfg, 200, 42, 1);
  CHECK(est.r == want.r);
  CHECK(est.trials == want.trials);
  CHECK(est.failures == want.failures);
  CHECK(est.dfr == want.dfr_point);
  CHECK(est.ci_low == want.ci_low);
  CHECK(est.ci_high == want.ci_high);

  const uint32_t rs[2] = {23, 29};
  bikebf_dfr_result results[2];
  bikebf_extrapolation ex{};
  char warning[256] = {0};
  REQUIRE(bikebf_dfr_sweep(&cfg, rs, 2, 120, 5, 2, 0, tmp.file("sweep").c_str(), results,
                           &ex, warning, sizeof warning) == BIKEBF_OK);
  auto sw = bikebf::sweep(ccfg, std::vector<std::uint32_t>{23, 29}, 120, 5, 1);
  CHECK(results[0].failures == sw.estimates[0].failures);
  CHECK(results[1].failures == sw.estimates[1].failures);
  CHECK((ex.present == 1) == sw.extrapolation.has_value());
  CHECK((warning[0] == '\0') == sw.warning.empty());
  if (sw.extrapolation) {
    CHECK(ex.slope == sw.extrapolation->slope);
    CHECK(ex.r_star == sw.extrapolation->r_star);
    CHECK(std::filesystem::exists(tmp.file("sweep") + "_extrapolation.csv"));
  }
  CHECK(std::filesystem::exists(tmp.file("sweep") + ".csv"));
  CHECK(std::filesystem::exists(tmp.file("sweep") + "_plot.csv"));
  CHECK(std::filesystem::exists(tmp.file("sweep") + ".gp"));

  // t = 0 never fails, so the sweep must warn; a tiny buffer truncates safely.
  bikebf_config never = cfg;
  never.t = 0;
  bikebf_dfr_result never_results[2];
  char tiny[10];
  std::memset(tiny, 'x', sizeof tiny);
  REQUIRE(bikebf_dfr_sweep(&never, rs, 2, 50, 5, 1, 0, nullptr, never_results, &ex, tiny,
                           sizeof tiny) == BIKEBF_OK);
  CHECK(ex.present == 0);
  CHECK(std::strlen(tiny) == 9);

  const double rv[2] = {9000.0, 9200.0};
  const double dv[2] = {std::pow(2.0, -10), std::pow(2.0, -20)};
  REQUIRE(bikebf_extrapolate(rv, dv, 2, 128, 0, &ex) == BIKEBF_OK);
  CHECK(ex.present == 1);
  CHECK(ex.lambda == 128);
  CHECK(ex.r_star == doctest::Approx(11360.0).epsilon(1e-9));
  const double rising[2] = {std::pow(2.0, -20), std::pow(2.0, -10)};
  CHECK(bikebf_extrapolate(rv, rising, 2, 128, 0, &ex) == BIKEBF_ERR_NO_EXTRAPOLATION);
  CHECK_FALSE(std::string(bikebf_last_error()).empty());

  // Read the sweep's own csv back through the api.
  bikebf_dfr_result rows[4];
  size_t rows_len = 0;
  REQUIRE(bikebf_read_dfr_csv((tmp.file("sweep") + ".csv").c_str(), rows, 4, &rows_len) ==
          BIKEBF_OK);
  REQUIRE(rows_len == 2);
  CHECK(rows[0].r == 23);
  CHECK(rows[1].r == 29);
  CHECK(rows[0].failures == results[0].failures);
  rows_len = 0;
  CHECK(bikebf_read_dfr_csv((tmp.file("sweep") + ".csv").c_str(), rows, 1, &rows_len) ==
        BIKEBF_ERR_BUFFER_TOO_SMALL);
  CHECK(rows_len == 2);
  CHECK(bikebf_read_dfr_csv(tmp.file("absent.csv").c_str(), rows, 4, &rows_len) ==
        BIKEBF_ERR_IO);

  const uint32_t unsorted[2] = {29, 23};
  CHECK(bikebf_dfr_sweep(&cfg, unsorted, 2, 50, 5, 1, 0, nullptr, results, nullptr,
                         nullptr, 0) == BIKEBF_ERR_INVALID_ARG);
}

TEST_CASE("c api cost model") {
  bikebf_cost_report rep{};
  REQUIRE(bikebf_cost(12992, 142, 32, 1, -1, 1, &rep) == BIKEBF_OK);
  CHECK(rep.ram_e_bits == 25984);
  CHECK(rep.ram_s_bits == 12992);
  CHECK(rep.ram_i_bits == 1988);
  CHECK(rep.total_mem_bits == 40964);
  CHECK(rep.logic_xors == 3780);
  CHECK(rep.total_area_xors == 34503);
  CHECK(rep.latency_cycles == 115304);
  CHECK(rep.layered == 1);

  REQUIRE(bikebf_cost(12095, 142, 32, 0, -1, 1, &rep) == BIKEBF_OK);
  CHECK(rep.total_area_xors == 42913);
  CHECK(rep.latency_cycles == 107352);
  CHECK(rep.layered == 0);

  CHECK(bikebf_cost(12992, 141, 32, 1, -1, 1, &rep) == BIKEBF_ERR_INVALID_ARG);
  CHECK(bikebf_cost(12992, 142, 32, 1, -1, 1, nullptr) == BIKEBF_ERR_INVALID_ARG);
}
