#pragma once

// One row per checked inequality or identity. lhs/rhs are printed exactly
// when they are integers or rationals, otherwise to 17 significant digits.

#include <cstddef>
#include <string>
#include <vector>

namespace hooley {

struct CheckResult {
  std::string check;
  std::string instance;
  std::string lhs;
  std::string rhs;
  double ratio = 0.0;
  bool pass = false;
};

struct CheckReport {
  std::vector<CheckResult> rows;

  bool pass() const noexcept {
    for (const auto& r : rows)
      if (!r.pass) return false;
    return true;
  }
  std::size_t failures() const noexcept {
    std::size_t n = 0;
    for (const auto& r : rows) n += !r.pass;
    return n;
  }
  double max_ratio() const noexcept {
    double m = 0.0;
    for (const auto& r : rows)
      if (r.ratio > m) m = r.ratio;
    return m;
  }
  void append(const CheckReport& o) { rows.insert(rows.end(), o.rows.begin(), o.rows.end()); }
};

}  // namespace hooley
