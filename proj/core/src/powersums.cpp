#include "hooley/powersums.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <thread>

#include "hooley/delta.hpp"
#include "hooley/error.hpp"

namespace hooley {

namespace {

std::string join(std::span<const u64> v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + ")";
}

std::string join(std::span<const unsigned> v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + ")";
}

std::string real_str(double v) {
  std::ostringstream o;
  o.precision(17);
  o << v;
  return o.str();
}

mpz_class to_mpz(u128 v) {
  mpz_class hi(std::to_string(static_cast<u64>(v >> 64)));
  mpz_class lo(std::to_string(static_cast<u64>(v)));
  mpz_class r;
  mpz_mul_2exp(r.get_mpz_t(), hi.get_mpz_t(), 64);
  return r + lo;
}

double to_double(u128 v) { return static_cast<double>(static_cast<long double>(v)); }

// c m^l, or lim + 1 when that exceeds lim.
u64 bounded_term(u64 c, u64 m, unsigned l, u64 lim) {
  u128 acc = c;
  for (unsigned i = 0; i < l; ++i) {
    acc *= m;
    if (acc > lim) return lim + 1;
  }
  return static_cast<u64>(acc);
}

// Coordinates by decreasing exponent: the smallest exponent comes last and is
// solved in closed form.
std::vector<std::size_t> search_order(const PowerSystem& sys) {
  std::vector<std::size_t> idx(sys.c().size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return sys.l()[a] > sys.l()[b]; });
  return idx;
}

// Counts m with sum c_j m_j^l_j <= x, stopping once the count passes cap.
u64 lattice_count_capped(u64 x, const PowerSystem& sys, u64 cap) {
  auto order = search_order(sys);
  const std::size_t k = order.size();
  std::vector<u64> min_rest(k + 1, 0);
  for (std::size_t i = k; i-- > 0;) min_rest[i] = min_rest[i + 1] + sys.c()[order[i]];
  if (x < min_rest[0]) return 0;
  u64 count = 0;
  auto rec = [&](auto&& self, std::size_t i, u64 rem) -> bool {
    u64 c = sys.c()[order[i]];
    unsigned l = sys.l()[order[i]];
    if (i + 1 == k) {
      count += iroot(rem / c, l);
      return count <= cap;
    }
    u64 room = rem - min_rest[i + 1];
    for (u64 m = 1;; ++m) {
      u64 term = bounded_term(c, m, l, room);
      if (term > room) break;
      if (!self(self, i + 1, rem - term)) return false;
    }
    return true;
  };
  rec(rec, 0, x);
  return count;
}

struct TailTable {
  std::vector<u64> value;  // sorted, distinct
  std::vector<u64> mult;
  std::vector<u64> p1;     // inclusive prefix sums of mult
  std::vector<u128> p2;    // inclusive prefix sums of mult^2

  // sum of mult (resp. mult^2) over values <= y
  u64 P1(u64 y) const {
    auto it = std::upper_bound(value.begin(), value.end(), y);
    return it == value.begin() ? 0 : p1[it - value.begin() - 1];
  }
  u128 P2(u64 y) const {
    auto it = std::upper_bound(value.begin(), value.end(), y);
    return it == value.begin() ? 0 : p2[it - value.begin() - 1];
  }
};

TailTable build_tail(const PowerSystem& sys, u64 lim) {
  std::vector<u64> vals;
  const unsigned t = sys.t();
  if (t == 0) {
    vals.push_back(0);
  } else {
    std::vector<u64> min_rest(t + 2, 0);
    for (unsigned j = t; j >= 1; --j) min_rest[j] = min_rest[j + 1] + sys.c()[j];
    auto rec = [&](auto&& self, unsigned j, u64 acc) -> void {
      if (j > t) {
        vals.push_back(acc);
        return;
      }
      u64 room = lim - acc - min_rest[j + 1];
      for (u64 m = 1;; ++m) {
        u64 term = bounded_term(sys.c()[j], m, sys.l()[j], room);
        if (term > room) break;
        self(self, j + 1, acc + term);
      }
    };
    if (lim >= min_rest[1]) rec(rec, 1, 0);
  }
  std::sort(vals.begin(), vals.end());
  TailTable tt;
  for (std::size_t i = 0; i < vals.size();) {
    std::size_t j = i;
    while (j < vals.size() && vals[j] == vals[i]) ++j;
    tt.value.push_back(vals[i]);
    tt.mult.push_back(j - i);
    i = j;
  }
  u64 s1 = 0;
  u128 s2 = 0;
  for (u64 m : tt.mult) {
    s1 += m;
    s2 += static_cast<u128>(m) * m;
    tt.p1.push_back(s1);
    tt.p2.push_back(s2);
  }
  return tt;
}

struct Moments {
  u64 V0 = 0;
  u64 V1 = 0;
  u128 V2 = 0;
};

struct ShardResult {
  std::vector<Moments> at_checkpoint;  // cumulative within the shard
  Moments total;
};

template <class Count>
void fill_shard(u64 lo, u64 hi, std::span<const u64> heads, const TailTable& tail, std::span<const u64> cps,
                std::vector<Count>& buf, ShardResult& out) {
  buf.assign(hi - lo + 1, 0);
  const u64 vmin = tail.value.front();
  const u64 vmax = tail.value.back();
  for (u64 a : heads) {
    if (a + vmin > hi) break;
    if (a + vmax < lo) continue;
    auto it = std::lower_bound(tail.value.begin(), tail.value.end(), lo > a ? lo - a : 0);
    for (std::size_t i = it - tail.value.begin(); i < tail.value.size(); ++i) {
      u64 n = a + tail.value[i];
      if (n > hi) break;
      buf[n - lo] += static_cast<Count>(tail.mult[i]);
    }
  }
  Moments acc;
  std::size_t ci = 0;
  for (u64 off = 0; off < buf.size(); ++off) {
    u64 r = buf[off];
    acc.V0 += r != 0;
    acc.V1 += r;
    acc.V2 += static_cast<u128>(r) * r;
    while (ci < cps.size() && cps[ci] == lo + off) {
      out.at_checkpoint.push_back(acc);
      ++ci;
    }
  }
  out.total = acc;
}

void add(Moments& a, const Moments& b) {
  a.V0 += b.V0;
  a.V1 += b.V1;
  a.V2 += b.V2;
}

unsigned run_parameter(std::span<const unsigned> l) {
  const std::size_t t = l.size() - 1;
  unsigned s = 1;
  for (std::size_t j = 2; j <= t - 1; ++j)
    if (l[t - j + 1] == l[t]) s = static_cast<unsigned>(j);
    else break;
  return s;
}

void check_tuple(std::span<const unsigned> l, const char* what) {
  if (l.size() < 3) throw PreconditionError(std::string(what) + ": needs t >= 2, got l = " + join(l));
  for (std::size_t j = 0; j < l.size(); ++j) {
    if (l[j] == 0) throw PreconditionError(std::string(what) + ": exponents must be >= 1");
    if (j && l[j] < l[j - 1]) throw PreconditionError(std::string(what) + ": l must be nondecreasing, got " + join(l));
  }
}

}  // namespace

std::string u128_to_string(u128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v) {
    s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

PowerSystem::PowerSystem(std::vector<u64> c, std::vector<unsigned> l) : c_(std::move(c)), l_(std::move(l)) {
  if (c_.empty() || c_.size() != l_.size())
    throw PreconditionError("PowerSystem: c and l must be nonempty and of equal length");
  for (std::size_t j = 0; j < c_.size(); ++j) {
    if (c_[j] == 0 || l_[j] == 0) throw PreconditionError("PowerSystem: entries must be >= 1");
    if (j && l_[j] < l_[j - 1]) throw PreconditionError("PowerSystem: l must be nondecreasing, got " + join(l_));
  }
}

mpq_class PowerSystem::delta() const {
  mpq_class d = 0;
  for (std::size_t j = 1; j < l_.size(); ++j) d += mpq_class(1, l_[j]);
  d.canonicalize();
  return d;
}

PowerSystem PowerSystem::tail() const {
  if (t() == 0) throw PreconditionError("PowerSystem::tail: needs t >= 1");
  return PowerSystem({c_.begin() + 1, c_.end()}, {l_.begin() + 1, l_.end()});
}

std::string PowerSystem::to_string() const { return "c=" + join(c_) + " l=" + join(l_); }

u64 rep_count(u64 n, const PowerSystem& sys) {
  auto order = search_order(sys);
  const std::size_t k = order.size();
  std::vector<u64> min_rest(k + 1, 0);
  for (std::size_t i = k; i-- > 0;) min_rest[i] = min_rest[i + 1] + sys.c()[order[i]];
  if (n < min_rest[0]) return 0;
  u64 count = 0;
  auto rec = [&](auto&& self, std::size_t i, u64 rem) -> void {
    u64 c = sys.c()[order[i]];
    unsigned l = sys.l()[order[i]];
    if (i + 1 == k) {
      if (rem % c) return;
      u64 q = rem / c;
      u64 m = iroot(q, l);
      if (m >= 1 && bounded_term(1, m, l, q) == q) ++count;
      return;
    }
    u64 room = rem - min_rest[i + 1];
    for (u64 m = 1;; ++m) {
      u64 term = bounded_term(c, m, l, room);
      if (term > room) break;
      self(self, i + 1, rem - term);
    }
  };
  rec(rec, 0, n);
  return count;
}

u64 lattice_count(u64 x, const PowerSystem& sys) {
  return lattice_count_capped(x, sys, std::numeric_limits<u64>::max());
}

std::vector<VRecord> v_counts(u64 x, const PowerSystem& sys, const VCountOptions& opts, const Budget& budget) {
  if (x == 0) throw DomainError("v_counts: x must be >= 1");
  if (opts.shard_len == 0) throw PreconditionError("v_counts: shard_len must be >= 1");
  const u64 limit = budget.max_x;
  if (x > limit || lattice_count_capped(x, sys, limit) > limit) {
    u64 lo = 0, hi = std::min(x, limit);
    while (lo < hi) {
      u64 mid = lo + (hi - lo + 1) / 2;
      if (lattice_count_capped(mid, sys, limit) <= limit) lo = mid;
      else hi = mid - 1;
    }
    throw BudgetError("v_counts: x=" + std::to_string(x) + " for " + sys.to_string() +
                          " exceeds budget max_x = " + std::to_string(limit) + " (x and V_1(x)); largest feasible x is " +
                          std::to_string(lo),
                      "x<=" + std::to_string(lo));
  }

  std::vector<u64> cps;
  for (u64 cp : opts.checkpoints)
    if (cp >= 1 && cp < x) cps.push_back(cp);
  cps.push_back(x);
  std::sort(cps.begin(), cps.end());
  cps.erase(std::unique(cps.begin(), cps.end()), cps.end());

  std::vector<VRecord> out(cps.size());
  for (std::size_t i = 0; i < cps.size(); ++i) out[i].x = cps[i];
  const u64 c0 = sys.c()[0];
  const unsigned l0 = sys.l()[0];
  if (x < c0) return out;

  TailTable tail = build_tail(sys, x - c0);
  if (tail.value.empty()) return out;
  std::vector<u64> heads;
  const u64 head_room = x - tail.value.front();
  for (u64 m = 1;; ++m) {
    u64 a = bounded_term(c0, m, l0, head_room);
    if (a > head_room) break;
    heads.push_back(a);
  }

  const u64 n_shards = (x - 1) / opts.shard_len + 1;
  std::vector<ShardResult> shards(n_shards);
  const bool narrow = tail.p1.back() <= std::numeric_limits<std::uint32_t>::max();
  std::atomic<u64> next{0};
  auto worker = [&] {
    std::vector<std::uint32_t> buf32;
    std::vector<u64> buf64;
    for (u64 k = next++; k < n_shards; k = next++) {
      u64 lo = 1 + k * opts.shard_len;
      u64 hi = std::min(x, lo + opts.shard_len - 1);
      auto b = std::lower_bound(cps.begin(), cps.end(), lo);
      auto e = std::upper_bound(cps.begin(), cps.end(), hi);
      auto mine = std::span<const u64>(cps).subspan(static_cast<std::size_t>(b - cps.begin()),
                                                     static_cast<std::size_t>(e - b));
      if (narrow) fill_shard(lo, hi, heads, tail, mine, buf32, shards[k]);
      else fill_shard(lo, hi, heads, tail, mine, buf64, shards[k]);
    }
  };
  unsigned nt = static_cast<unsigned>(
      std::min<u64>(opts.threads ? opts.threads : resolve_threads(budget.threads), n_shards));
  if (nt <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < nt; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  Moments run;
  std::size_t ci = 0;
  for (const auto& sh : shards) {
    for (const auto& m : sh.at_checkpoint) {
      Moments cur = run;
      add(cur, m);
      out[ci].V0 = cur.V0;
      out[ci].V1 = cur.V1;
      out[ci].V2 = cur.V2;
      ++ci;
    }
    add(run, sh.total);
  }
  if (ci != out.size()) throw AssertionFailure("v_counts: checkpoint bookkeeping mismatch");

  for (auto& rec : out) {
    u128 eq = 0;
    u64 v1 = 0;
    for (u64 a : heads) {
      if (a + tail.value.front() > rec.x) break;
      eq += tail.P2(rec.x - a);
      v1 += tail.P1(rec.x - a);
    }
    if (v1 != rec.V1) throw AssertionFailure("v_counts: V_1 from shards disagrees with the head/tail count at x=" +
                                             std::to_string(rec.x));
    rec.V2_eq = eq;
    rec.V2_neq = rec.V2 - eq;
  }
  return out;
}

VRecord v_counts(u64 x, const PowerSystem& sys, const Budget& budget) {
  return v_counts(x, sys, VCountOptions{}, budget).back();
}

CheckReport check_cs_and_split(const VRecord& rec) {
  CheckReport rep;
  const std::string inst = "x=" + std::to_string(rec.x);
  const mpz_class v0(std::to_string(rec.V0)), v1(std::to_string(rec.V1));
  const mpz_class v2 = to_mpz(rec.V2), eq = to_mpz(rec.V2_eq), neq = to_mpz(rec.V2_neq);
  auto ratio = [](const mpz_class& a, const mpz_class& b) { return b == 0 ? 0.0 : a.get_d() / b.get_d(); };

  mpz_class lhs = v1 * v1, rhs = v0 * v2;
  rep.rows.push_back({"cauchy_schwarz", inst, lhs.get_str(), rhs.get_str(), ratio(lhs, rhs), lhs <= rhs});
  mpz_class sum = eq + neq;
  rep.rows.push_back({"v2_split", inst, v2.get_str(), sum.get_str(), ratio(v2, sum), v2 == sum});
  rep.rows.push_back({"v0_le_v1", inst, v0.get_str(), v1.get_str(), ratio(v0, v1), v0 <= v1});
  rep.rows.push_back({"v1_le_v2", inst, v1.get_str(), v2.get_str(), ratio(v1, v2), v1 <= v2});
  rep.rows.push_back({"v1_le_v2eq", inst, v1.get_str(), eq.get_str(), ratio(v1, eq), v1 <= eq});
  rep.rows.push_back({"v0_le_x", inst, v0.get_str(), std::to_string(rec.x),
                      static_cast<double>(rec.V0) / static_cast<double>(rec.x), rec.V0 <= rec.x});
  return rep;
}

CheckReport check_prop52(u64 x, const PowerSystem& sys, const Budget& budget) {
  if (sys.t() < 1) throw PreconditionError("check_prop52: needs t >= 1");
  VRecord full = v_counts(x, sys, budget);
  VRecord trunc = v_counts(x, sys.tail(), budget);
  const u64 c0 = sys.c()[0];
  const unsigned l0 = sys.l()[0];
  mpz_class lhs = to_mpz(full.V2_eq), v2 = to_mpz(trunc.V2);
  mpz_class lp, rp;
  mpz_pow_ui(lp.get_mpz_t(), lhs.get_mpz_t(), l0);
  mpz_pow_ui(rp.get_mpz_t(), v2.get_mpz_t(), l0);
  bool pass = mpz_class(lp * mpz_class(std::to_string(c0))) <= mpz_class(rp * mpz_class(std::to_string(x)));
  double rhs = std::pow(static_cast<double>(x) / static_cast<double>(c0), 1.0 / l0) * to_double(trunc.V2);
  CheckReport rep;
  rep.rows.push_back({"prop52", "x=" + std::to_string(x) + " " + sys.to_string(), lhs.get_str(), real_str(rhs),
                      rhs == 0.0 ? 0.0 : to_double(full.V2_eq) / rhs, pass});
  return rep;
}

AdmissibilityReport admissible(std::span<const unsigned> l) {
  check_tuple(l, "admissible");
  AdmissibilityReport r;
  r.l.assign(l.begin(), l.end());
  const std::size_t t = l.size() - 1;
  r.s = run_parameter(l);

  r.l0_is_2 = l[0] == 2;
  if (!r.l0_is_2) r.reasons.push_back("l_0 = " + std::to_string(l[0]) + " ≠ 2");
  r.l1_in_3_4 = l[1] == 3 || l[1] == 4;
  if (!r.l1_in_3_4) r.reasons.push_back("l_1 = " + std::to_string(l[1]) + " ∉ {3,4}");

  // tail[r] = sum_{j>=r} 1/l_j
  std::vector<mpq_class> tail(t + 2, mpq_class(0));
  for (std::size_t j = t; j >= 1; --j) {
    tail[j] = tail[j + 1] + mpq_class(1, l[j]);
    tail[j].canonicalize();
  }
  r.sum_is_half = tail[1] == mpq_class(1, 2);
  if (!r.sum_is_half) r.reasons.push_back("sum " + tail[1].get_str() + " ≠ 1/2");

  r.cond_i = r.s >= 1 && r.s <= 3;
  if (!r.cond_i) r.reasons.push_back("(i) s = " + std::to_string(r.s) + " > 3");
  r.cond_ii = r.s != 3 || l[t] >= 16;
  if (!r.cond_ii) r.reasons.push_back("(ii) s = 3 but l_t = " + std::to_string(l[t]) + " < 16");
  r.cond_iii = true;
  for (std::size_t rr = 1; rr + r.s <= t + 1; ++rr) {
    mpq_class bound(1, l[rr - 1]);
    bound.canonicalize();
    if (tail[rr] > bound) {
      r.cond_iii = false;
      r.reasons.push_back("(iii) fails at r = " + std::to_string(rr) + ": sum_{j>=" + std::to_string(rr) +
                          "} 1/l_j = " + tail[rr].get_str() + " > 1/l_" + std::to_string(rr - 1) + " = " +
                          bound.get_str());
      break;
    }
  }
  r.admissible = r.l0_is_2 && r.l1_in_3_4 && r.sum_is_half && r.cond_i && r.cond_ii && r.cond_iii;
  return r;
}

std::vector<unsigned> extend(std::span<const unsigned> l, ExtendMode mode) {
  check_tuple(l, "extend");
  const unsigned lt = l.back();
  std::vector<unsigned> out(l.begin(), l.end() - 1);
  if (mode == ExtendMode::plus) {
    unsigned s = run_parameter(l);
    if (s != 1) throw PreconditionError("extend plus: needs s = 1, got s = " + std::to_string(s));
    out.insert(out.end(), 2, 2 * lt);
  } else {
    if (lt < 6) throw PreconditionError("extend star: needs l_t >= 6, got l_t = " + std::to_string(lt));
    out.insert(out.end(), 3, 3 * lt);
  }
  return out;
}

GrowthTable growth_table(const PowerSystem& sys, std::vector<u64> grid, const Budget& budget) {
  if (grid.empty()) throw PreconditionError("growth_table: empty grid");
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  if (grid.front() < 3) throw PreconditionError("growth_table: grid points must be >= 3");
  const u64 xmax = grid.back();

  VCountOptions vo;
  vo.checkpoints = grid;
  auto recs = v_counts(xmax, sys, vo, budget);

  MeanSumOptions mo;
  mo.checkpoints = grid;
  mo.segment_size = budget.segment_size;
  mo.max_x = budget.max_x;
  mo.threads = resolve_threads(budget.threads);
  auto sums = delta_mean_sums(xmax, mo);
  if (sums.size() != recs.size()) throw AssertionFailure("growth_table: checkpoint rows disagree");

  const double two_delta = 2.0 * sys.delta().get_d();
  GrowthTable tab;
  for (std::size_t i = 0; i < recs.size(); ++i) {
    GrowthRow row;
    row.v = recs[i];
    row.frakS = sums[i].frakS;
    const double x = static_cast<double>(row.v.x);
    const double v0 = static_cast<double>(row.v.V0);
    row.r1 = v0 * row.frakS / x;
    row.r2 = v0 * std::pow(std::log(std::log(x)), 2.5) / x;
    row.r3 = to_double(row.v.V2_neq) / (std::pow(x, two_delta) * row.frakS);
    const std::string inst = "x=" + std::to_string(row.v.x);
    tab.checks.rows.push_back({"v0_le_x", inst, std::to_string(row.v.V0), std::to_string(row.v.x), v0 / x,
                               row.v.V0 <= row.v.x});
    if (i > 0) {
      u64 prev = tab.rows.back().v.V0;
      tab.checks.rows.push_back({"v0_monotone", inst, std::to_string(prev), std::to_string(row.v.V0),
                                 row.v.V0 ? static_cast<double>(prev) / v0 : 0.0, prev <= row.v.V0});
    }
    tab.rows.push_back(row);
  }
  return tab;
}

std::string growth_csv(const GrowthTable& table) {
  std::ostringstream o;
  o.precision(17);
  o << "x,V0,V1,V2,V2neq,frakS,r1,r2,r3\n";
  for (const auto& r : table.rows)
    o << r.v.x << ',' << r.v.V0 << ',' << r.v.V1 << ',' << u128_to_string(r.v.V2) << ','
      << u128_to_string(r.v.V2_neq) << ',' << r.frakS << ',' << r.r1 << ',' << r.r2 << ',' << r.r3 << '\n';
  return o.str();
}

}  // namespace hooley
