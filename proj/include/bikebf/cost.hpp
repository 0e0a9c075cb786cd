#pragma once

#include <cstdint>

namespace bikebf {

// Analytical hardware cost model for an L-column-parallel decoder datapath.
// All quantities are exact integers; memory is in bits, area in XOR-gate
// equivalents (1 memory bit = 0.75 XORs, rounded to nearest), latency in
// clock cycles.

struct RamSizes {
  std::uint64_t ram_e = 0;  // error estimate: ceil(2r/L) * L
  std::uint64_t ram_s = 0;  // syndrome banks: (layered ? 2 : 4) * ceil(r/2L) * L
  std::uint64_t ram_i = 0;  // key indices: 2 * ceil(log2 r) * (w/2)
};

struct CostReport {
  std::uint64_t ram_e_bits = 0;
  std::uint64_t ram_s_bits = 0;
  std::uint64_t ram_i_bits = 0;
  std::uint64_t total_mem_bits = 0;
  std::uint64_t logic_xors = 0;
  std::uint64_t total_area_xors = 0;
  std::uint64_t latency_cycles = 0;
  bool layered = false;
};

// Default logic-area constants for the two decoder variants at L = 32.
inline constexpr std::uint64_t kDefaultLogicXorsLayered = 3780;
inline constexpr std::uint64_t kDefaultLogicXorsNonLayered = 5134;

RamSizes ram_sizes(std::uint64_t r, std::uint64_t w, std::uint64_t L, bool layered);

// ceil(2r/L) * w cycles; the per-decode iteration count is not folded in
// (pass latency_iterations > 1 in cost_report for the per-decode reading).
std::uint64_t latency_cycles(std::uint64_t r, std::uint64_t w, std::uint64_t L);

// round-to-nearest(0.75 * mem_bits) + logic_xors.
std::uint64_t total_area_xors(std::uint64_t mem_bits, std::uint64_t logic_xors);

// Full report. logic_xors < 0 selects the variant's default constant.
// latency_iterations scales the latency (1 = a single block sweep).
CostReport cost_report(std::uint64_t r, std::uint64_t w, std::uint64_t L, bool layered,
                       std::int64_t logic_xors = -1, std::uint32_t latency_iterations = 1);

}  // namespace bikebf
