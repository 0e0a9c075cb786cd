#include "bikebf/cost.hpp"

#include <bit>
#include <stdexcept>

namespace bikebf {

namespace {

void check_args(std::uint64_t r, std::uint64_t w, std::uint64_t L) {
  if (r == 0 || w == 0 || L == 0)
    throw std::invalid_argument("cost model: r, w, L must be positive");
  if (w % 2 != 0) throw std::invalid_argument("cost model: w must be even");
}

std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) { return (a + b - 1) / b; }

std::uint64_t ceil_log2(std::uint64_t r) {
  return r <= 1 ? 0 : std::bit_width(r - 1);
}

}  // namespace

RamSizes ram_sizes(std::uint64_t r, std::uint64_t w, std::uint64_t L, bool layered) {
  check_args(r, w, L);
  RamSizes s;
  s.ram_e = ceil_div(2 * r, L) * L;
  s.ram_s = (layered ? 2 : 4) * ceil_div(r, 2 * L) * L;
  s.ram_i = 2 * ceil_log2(r) * (w / 2);
  return s;
}

std::uint64_t latency_cycles(std::uint64_t r, std::uint64_t w, std::uint64_t L) {
  check_args(r, w, L);
  return ceil_div(2 * r, L) * w;
}

std::uint64_t total_area_xors(std::uint64_t mem_bits, std::uint64_t logic_xors) {
  return (3 * mem_bits + 2) / 4 + logic_xors;  // 0.75/bit, round half up
}

CostReport cost_report(std::uint64_t r, std::uint64_t w, std::uint64_t L, bool layered,
                       std::int64_t logic_xors, std::uint32_t latency_iterations) {
  if (latency_iterations == 0)
    throw std::invalid_argument("cost model: latency_iterations must be positive");
  const RamSizes rams = ram_sizes(r, w, L, layered);
  CostReport rep;
  rep.layered = layered;
  rep.ram_e_bits = rams.ram_e;
  rep.ram_s_bits = rams.ram_s;
  rep.ram_i_bits = rams.ram_i;
  rep.total_mem_bits = rams.ram_e + rams.ram_s + rams.ram_i;
  rep.logic_xors = logic_xors < 0
                       ? (layered ? kDefaultLogicXorsLayered : kDefaultLogicXorsNonLayered)
                       : static_cast<std::uint64_t>(logic_xors);
  rep.total_area_xors = total_area_xors(rep.total_mem_bits, rep.logic_xors);
  rep.latency_cycles = latency_cycles(r, w, L) * latency_iterations;
  return rep;
}

}  // namespace bikebf
