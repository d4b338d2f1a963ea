#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace hooley {

// Ceilings for every brute-force scan in the library. All counts are in
// "points visited" (box volume, residue tuples, enumerated tuples).
struct Budget {
  std::uint64_t max_points = 10'000'000;     // residue box scans, period scans
  std::uint64_t max_box = 10'000'000;        // integer boxes in sifted and mean-value sums
  std::uint64_t max_enum = 1'000'000;        // s-tuples enumerated by E_R
  std::uint64_t max_x = 100'000'000;         // Delta sums and V-counts
  std::uint64_t segment_size = 1u << 22;     // FactorTable segment length
  unsigned threads = 0;                      // 0 = hardware concurrency

  static Budget small();
  static Budget medium();
  static Budget large();
  static Budget preset(std::string_view name);  // throws PreconditionError
  std::string name = "medium";
};

unsigned resolve_threads(unsigned requested);

}  // namespace hooley
