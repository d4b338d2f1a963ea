#include <gtest/gtest.h>

#include <map>
#include <random>

#include "hooley/error.hpp"
#include "hooley/powersums.hpp"

using namespace hooley;

namespace {

using Tuple = std::vector<unsigned>;

const std::vector<Tuple> kListed = {
    {2, 3, 6},          {2, 4, 4},           {2, 3, 7, 42},       {2, 3, 8, 24},      {2, 3, 9, 18},
    {2, 3, 10, 15},     {2, 3, 12, 12},      {2, 4, 8, 8},        {2, 3, 7, 84, 84},  {2, 3, 8, 48, 48},
    {2, 3, 18, 18, 18}, {2, 4, 8, 16, 16},   {2, 3, 12, 24, 24},  {2, 3, 12, 36, 36, 36},
    {2, 4, 8, 24, 24, 24}, {2, 4, 8, 16, 32, 32},
};

PowerSystem unit_system(const Tuple& l) { return PowerSystem(std::vector<u64>(l.size(), 1), l); }

u64 pw(u64 m, unsigned l) {
  u64 r = 1;
  while (l--) r *= m;
  return r;
}

// Every tuple with c_j m_j^l_j <= x by an odometer in index order; returns
// value -> count.
std::map<u64, u64> odometer(u64 x, const PowerSystem& sys) {
  const std::size_t k = sys.c().size();
  std::map<u64, u64> out;
  std::vector<u64> m(k, 1);
  while (true) {
    u64 v = 0;
    bool over = false;
    for (std::size_t j = 0; j < k && !over; ++j) {
      v += sys.c()[j] * pw(m[j], sys.l()[j]);
      over = v > x;
    }
    if (!over) {
      ++out[v];
      ++m[k - 1];
      continue;
    }
    // carry: reset the last coordinates that overflowed
    std::size_t j = k - 1;
    while (true) {
      m[j] = 1;
      if (j == 0) return out;
      --j;
      ++m[j];
      u64 base = 0;
      for (std::size_t i = 0; i < k; ++i) base += sys.c()[i] * pw(m[i], sys.l()[i]);
      if (base <= x) break;
    }
  }
}

// V counts from r(n) over every n <= x, with V2_eq from the tail's own r.
VRecord naive_v(u64 x, const PowerSystem& sys) {
  VRecord v;
  v.x = x;
  for (u64 n = 1; n <= x; ++n) {
    u64 r = rep_count(n, sys);
    v.V0 += r != 0;
    v.V1 += r;
    v.V2 += static_cast<u128>(r) * r;
  }
  if (sys.t() == 0) {
    v.V2_eq = v.V1;
  } else {
    PowerSystem tail = sys.tail();
    std::vector<u128> sq(x + 1, 0);  // sum_{v <= y} r_tail(v)^2
    for (u64 y = 1; y <= x; ++y) {
      u64 r = rep_count(y, tail);
      sq[y] = sq[y - 1] + static_cast<u128>(r) * r;
    }
    for (u64 m0 = 1; sys.c()[0] * pw(m0, sys.l()[0]) <= x; ++m0) v.V2_eq += sq[x - sys.c()[0] * pw(m0, sys.l()[0])];
  }
  v.V2_neq = v.V2 - v.V2_eq;
  return v;
}

void expect_same(const VRecord& a, const VRecord& b, const std::string& what) {
  EXPECT_EQ(a.x, b.x) << what;
  EXPECT_EQ(a.V0, b.V0) << what;
  EXPECT_EQ(a.V1, b.V1) << what;
  EXPECT_EQ(u128_to_string(a.V2), u128_to_string(b.V2)) << what;
  EXPECT_EQ(u128_to_string(a.V2_eq), u128_to_string(b.V2_eq)) << what;
  EXPECT_EQ(u128_to_string(a.V2_neq), u128_to_string(b.V2_neq)) << what;
}

// Small random system: t+1 <= 4 coordinates, c_j <= 3, nondecreasing 2 <= l <= 5.
PowerSystem random_system(std::mt19937_64& rng) {
  std::uniform_int_distribution<unsigned> tdist(0, 3), cdist(1, 3), ldist(2, 5);
  unsigned k = tdist(rng) + 1;
  std::vector<u64> c(k);
  Tuple l(k);
  for (unsigned j = 0; j < k; ++j) {
    c[j] = cdist(rng);
    l[j] = ldist(rng);
  }
  std::sort(l.begin(), l.end());
  return PowerSystem(c, l);
}

}  // namespace

TEST(PowerSystem, Basics) {
  PowerSystem s({1, 1, 1}, {2, 4, 4});
  EXPECT_EQ(s.t(), 2u);
  EXPECT_EQ(s.L(), 4u);
  EXPECT_EQ(s.delta(), mpq_class(1, 2));
  EXPECT_EQ(s.tail().to_string(), "c=(1,1) l=(4,4)");
  EXPECT_THROW(PowerSystem({1, 1}, {3, 2}), PreconditionError);
  EXPECT_THROW(PowerSystem({1, 0}, {2, 2}), PreconditionError);
  EXPECT_THROW(PowerSystem({1}, {2, 2}), PreconditionError);
  EXPECT_THROW(PowerSystem({1}, {2}).tail(), PreconditionError);
}

TEST(RepCount, Examples) {
  EXPECT_EQ(rep_count(1, PowerSystem({1, 1}, {2, 2})), 0u);
  EXPECT_EQ(rep_count(25, PowerSystem({1, 1}, {2, 2})), 2u);
  EXPECT_EQ(rep_count(3, PowerSystem({1, 1, 1}, {2, 4, 4})), 1u);
  EXPECT_EQ(rep_count(50, PowerSystem({1, 1}, {2, 2})), 3u);  // 1+49, 25+25, 49+1
}

TEST(RepCount, MatchesOdometer) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    PowerSystem sys = random_system(rng);
    const u64 x = 1500;
    auto table = odometer(x, sys);
    for (u64 n = 1; n <= x; ++n) {
      auto it = table.find(n);
      ASSERT_EQ(rep_count(n, sys), it == table.end() ? 0u : it->second) << sys.to_string() << " n=" << n;
    }
  }
}

TEST(RepCount, PermutingEqualExponentsKeepsCounts) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<unsigned> cdist(1, 4);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<u64> c = {cdist(rng), cdist(rng), cdist(rng), cdist(rng)};
    Tuple l = {2, 3, 3, 3};
    std::vector<u64> p = c;
    std::shuffle(p.begin() + 1, p.end(), rng);
    PowerSystem a(c, l), b(p, l);
    for (u64 n = 1; n <= 1500; ++n) ASSERT_EQ(rep_count(n, a), rep_count(n, b)) << a.to_string() << " n=" << n;
  }
}

TEST(VCounts, Examples) {
  PowerSystem sq({1, 1}, {2, 2});
  VRecord r8 = v_counts(8, sq);
  EXPECT_EQ(r8.V0, 3u);
  EXPECT_EQ(r8.V1, 4u);
  EXPECT_EQ(u128_to_string(r8.V2), "6");
  EXPECT_EQ(u128_to_string(r8.V2_eq), "4");
  EXPECT_EQ(u128_to_string(r8.V2_neq), "2");

  VRecord r1 = v_counts(1, sq);
  EXPECT_EQ(r1, (VRecord{1, 0, 0, 0, 0, 0}));
  EXPECT_EQ(v_counts(1, PowerSystem({1, 1, 1}, {2, 4, 4})), (VRecord{1, 0, 0, 0, 0, 0}));

  VRecord r4 = v_counts(4, sq);
  EXPECT_EQ(r4.V0, 1u);
  EXPECT_EQ(r4.V1, 1u);
  EXPECT_EQ(u128_to_string(r4.V2), "1");
  EXPECT_THROW(v_counts(0, sq), DomainError);
}

TEST(VCounts, MatchesNaiveOracleOnListedSystems) {
  for (const auto& l : kListed) {
    PowerSystem sys = unit_system(l);
    for (u64 x : {1ull, 7ull, 100ull, 2500ull, 10000ull}) expect_same(v_counts(x, sys), naive_v(x, sys), sys.to_string());
  }
  for (const auto& l : {Tuple{2, 4, 4}, Tuple{2, 3, 6}}) {
    PowerSystem sys = unit_system(l);
    expect_same(v_counts(100000, sys), naive_v(100000, sys), sys.to_string());
  }
}

TEST(VCounts, MatchesNaiveOracleOnRandomSystems) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    PowerSystem sys = random_system(rng);
    expect_same(v_counts(2000, sys), naive_v(2000, sys), sys.to_string());
  }
}

TEST(VCounts, ShardsCheckpointsAndThreadsAgree) {
  PowerSystem sys({1, 2, 1}, {2, 3, 3});
  std::vector<u64> cps = {1, 5, 99, 100, 101, 777, 778, 5000, 40000};
  VCountOptions o;
  o.checkpoints = cps;
  o.shard_len = 777;
  o.threads = 3;
  auto rows = v_counts(50000, sys, o);
  ASSERT_EQ(rows.size(), cps.size() + 1);
  for (const auto& r : rows) expect_same(r, v_counts(r.x, sys), "x=" + std::to_string(r.x));
  VCountOptions o1 = o;
  o1.threads = 1;
  o1.shard_len = 1;
  auto rows1 = v_counts(3000, sys, o1);
  expect_same(rows1.back(), v_counts(3000, sys), "shard_len=1");
}

TEST(VCounts, V1EqualsLatticeCountInTwoOrders) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    PowerSystem sys = random_system(rng);
    const u64 x = 5000;
    u64 forward = 0;
    for (const auto& [v, m] : odometer(x, sys)) forward += m;
    EXPECT_EQ(lattice_count(x, sys), forward) << sys.to_string();
    EXPECT_EQ(v_counts(x, sys).V1, forward) << sys.to_string();
  }
}

TEST(VCounts, SplitAndCauchySchwarzProperties) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    PowerSystem sys = random_system(rng);
    for (u64 x : {10ull, 999ull, 8000ull}) {
      VRecord r = v_counts(x, sys);
      CheckReport rep = check_cs_and_split(r);
      EXPECT_TRUE(rep.pass()) << sys.to_string() << " x=" << x;
      EXPECT_GE(r.V2_eq, static_cast<u128>(r.V1));
    }
  }
}

TEST(VCounts, BudgetReportsLargestFeasibleX) {
  Budget b = Budget::small();
  PowerSystem sq({1, 1}, {2, 2});
  try {
    v_counts(2'000'000, sq, b);
    FAIL();
  } catch (const BudgetError& e) {
    EXPECT_EQ(e.hint(), "x<=1000000");
  }
  // V_1 grows like x^2 / 2 for two linear terms
  PowerSystem lin({1, 1}, {1, 1});
  try {
    v_counts(1'000'000, lin, b);
    FAIL();
  } catch (const BudgetError& e) {
    u64 feasible = std::stoull(e.hint().substr(3));
    EXPECT_LE(lattice_count(feasible, lin), b.max_x);
    EXPECT_GT(lattice_count(feasible + 1, lin), b.max_x);
    EXPECT_NO_THROW(v_counts(feasible, lin, b));
  }
}

TEST(CheckCs, Examples) {
  auto r = check_cs_and_split(VRecord{8, 3, 4, 6, 4, 2});
  EXPECT_TRUE(r.pass());
  EXPECT_EQ(r.rows[0].lhs, "16");
  EXPECT_EQ(r.rows[0].rhs, "18");
  EXPECT_TRUE(check_cs_and_split(VRecord{1, 0, 0, 0, 0, 0}).pass());
  auto t = check_cs_and_split(VRecord{4, 1, 1, 1, 1, 0});
  EXPECT_TRUE(t.pass());
  EXPECT_EQ(t.rows[0].lhs, t.rows[0].rhs);
  EXPECT_FALSE(check_cs_and_split(VRecord{8, 3, 4, 6, 4, 1}).pass());
  EXPECT_FALSE(check_cs_and_split(VRecord{8, 1, 4, 6, 4, 2}).pass());
}

TEST(Prop52, Examples) {
  auto r = check_prop52(8, PowerSystem({1, 1}, {2, 2}));
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_EQ(r.rows[0].lhs, "4");
  EXPECT_NEAR(std::stod(r.rows[0].rhs), std::sqrt(8.0) * 2, 1e-12);
  EXPECT_TRUE(r.pass());
  EXPECT_TRUE(check_prop52(1, PowerSystem({1, 1}, {2, 2})).pass());
  EXPECT_TRUE(check_prop52(100, PowerSystem({1, 1, 1}, {2, 4, 4})).pass());
  EXPECT_THROW(check_prop52(10, PowerSystem({1}, {2})), PreconditionError);
}

TEST(Prop52, ExactDecisionAgainstIndependentCounts) {
  // (x/c0)^(1/l0) V2_tail compared in exact integers from naive counts
  for (const auto& l : {Tuple{2, 4, 4}, Tuple{2, 3, 6}, Tuple{2, 3, 8, 24}}) {
    PowerSystem sys = unit_system(l);
    for (u64 x : {50ull, 1000ull, 5000ull}) {
      VRecord full = naive_v(x, sys), tail = naive_v(x, sys.tail());
      mpz_class lhs(u128_to_string(full.V2_eq)), v2(u128_to_string(tail.V2));
      bool expect = lhs * lhs <= mpz_class(std::to_string(x)) * v2 * v2;
      EXPECT_EQ(check_prop52(x, sys).pass(), expect) << sys.to_string() << " x=" << x;
    }
  }
}

TEST(Admissible, ListedTuplesPass) {
  for (const auto& l : kListed) {
    auto r = admissible(l);
    EXPECT_TRUE(r.admissible) << ::testing::PrintToString(l) << " " << ::testing::PrintToString(r.reasons);
    EXPECT_TRUE(r.reasons.empty());
  }
  EXPECT_EQ(admissible(Tuple{2, 4, 4}).s, 1u);
  EXPECT_EQ(admissible(Tuple{2, 3, 12, 12}).s, 2u);
  EXPECT_EQ(admissible(Tuple{2, 3, 18, 18, 18}).s, 3u);
}

TEST(Admissible, DocumentedFailures) {
  auto a = admissible(Tuple{2, 3, 6, 6});
  EXPECT_FALSE(a.admissible);
  EXPECT_FALSE(a.sum_is_half);
  // 2/3 > 1/l_0 also breaks (iii) at r = 1
  ASSERT_EQ(a.reasons.size(), 2u);
  EXPECT_EQ(a.reasons[0], "sum 2/3 ≠ 1/2");
  EXPECT_FALSE(a.cond_iii);

  auto b = admissible(Tuple{2, 4, 12, 12, 12});
  EXPECT_EQ(b.s, 3u);
  EXPECT_TRUE(b.sum_is_half);
  EXPECT_FALSE(b.cond_ii);
  EXPECT_FALSE(b.admissible);
  ASSERT_EQ(b.reasons.size(), 1u);
  EXPECT_EQ(b.reasons[0], "(ii) s = 3 but l_t = 12 < 16");

  auto c = admissible(Tuple{3, 3, 6});
  EXPECT_FALSE(c.l0_is_2);
  auto d = admissible(Tuple{2, 5, 5, 10});
  EXPECT_FALSE(d.l1_in_3_4);
  // r = 3: 1/18 + 3/54 = 1/9 > 1/18
  auto e = admissible(Tuple{2, 3, 18, 18, 54, 54, 54});
  EXPECT_TRUE(e.sum_is_half);
  EXPECT_FALSE(e.cond_iii);
  EXPECT_FALSE(e.admissible);

  EXPECT_THROW(admissible(Tuple{2, 4}), PreconditionError);
  EXPECT_THROW(admissible(Tuple{2, 6, 4}), PreconditionError);
}

TEST(Admissible, SumMatchesBruteRational) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<unsigned> ld(2, 40), td(2, 5);
  for (int trial = 0; trial < 500; ++trial) {
    Tuple l(td(rng) + 1);
    for (auto& v : l) v = ld(rng);
    std::sort(l.begin(), l.end());
    // sum_{j>=1} 1/l_j == 1/2  <=>  2 prod_{j>=1} l_j == sum_j prod_{i!=j} l_i
    mpz_class prod = 1, num = 0;
    for (std::size_t j = 1; j < l.size(); ++j) prod *= l[j];
    for (std::size_t j = 1; j < l.size(); ++j) num += prod / l[j];
    EXPECT_EQ(admissible(l).sum_is_half, 2 * num == prod) << ::testing::PrintToString(l);
  }
}

TEST(Extend, Examples) {
  EXPECT_EQ(extend(Tuple{2, 3, 6}, ExtendMode::plus), (Tuple{2, 3, 12, 12}));
  EXPECT_EQ(extend(Tuple{2, 3, 6}, ExtendMode::star), (Tuple{2, 3, 18, 18, 18}));
  EXPECT_THROW(extend(Tuple{2, 4, 4}, ExtendMode::star), PreconditionError);
  EXPECT_THROW(extend(Tuple{2, 3, 12, 12}, ExtendMode::plus), PreconditionError);
}

TEST(Extend, PreservesSumAndAdmissibilityFromRunOneTuples) {
  for (const auto& l : kListed) {
    auto base = admissible(l);
    for (auto mode : {ExtendMode::plus, ExtendMode::star}) {
      if (base.s != 1) continue;
      if (mode == ExtendMode::star && l.back() < 6) continue;
      Tuple e = extend(l, mode);
      auto r = admissible(e);
      EXPECT_TRUE(r.sum_is_half);
      EXPECT_TRUE(r.admissible) << ::testing::PrintToString(e) << " " << ::testing::PrintToString(r.reasons);
    }
  }
  // outside s = 1 the star construction can leave the admissible set
  Tuple e = extend(Tuple{2, 3, 18, 18, 18}, ExtendMode::star);
  EXPECT_EQ(e, (Tuple{2, 3, 18, 18, 54, 54, 54}));
  EXPECT_FALSE(admissible(e).admissible);
}

TEST(Growth, SmallGridAndCsv) {
  auto tab = growth_table(PowerSystem({1, 1}, {2, 2}), {8});
  ASSERT_EQ(tab.rows.size(), 1u);
  EXPECT_EQ(tab.rows[0].v.V0, 3u);
  EXPECT_TRUE(tab.checks.pass());
  std::string csv = growth_csv(tab);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "x,V0,V1,V2,V2neq,frakS,r1,r2,r3");
  EXPECT_EQ(csv.substr(csv.find('\n') + 1, 11), "8,3,4,6,2,1");
  EXPECT_THROW(growth_table(PowerSystem({1, 1}, {2, 2}), {2}), PreconditionError);
  EXPECT_THROW(growth_table(PowerSystem({1, 1}, {2, 2}), {}), PreconditionError);
}

TEST(Growth, MonotoneAcrossGrid) {
  PowerSystem sys({1, 1, 1}, {2, 4, 4});
  auto tab = growth_table(sys, {100000, 1000, 10000});
  ASSERT_EQ(tab.rows.size(), 3u);
  EXPECT_TRUE(tab.checks.pass());
  for (std::size_t i = 1; i < tab.rows.size(); ++i) {
    EXPECT_LT(tab.rows[i - 1].v.x, tab.rows[i].v.x);
    EXPECT_LE(tab.rows[i - 1].v.V0, tab.rows[i].v.V0);
  }
  for (const auto& r : tab.rows) {
    expect_same(r.v, v_counts(r.v.x, sys), "grid");
    EXPECT_TRUE(std::isfinite(r.r1) && std::isfinite(r.r2) && std::isfinite(r.r3));
    EXPECT_GT(r.r1, 0.0);
  }
}
