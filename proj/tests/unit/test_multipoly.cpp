#include <gtest/gtest.h>

#include <random>

#include "hooley/error.hpp"
#include "hooley/multipoly.hpp"

using namespace hooley;

namespace {

// Exact value by schoolbook Horner-free expansion, then reduced mod m.
u64 eval_mod_oracle(const MultiPoly& T, const std::vector<i64>& pt, u64 m) {
  mpz_class v = poly_eval(T, pt);
  mpz_class r;
  mpz_class mz(std::to_string(m));
  mpz_fdiv_r(r.get_mpz_t(), v.get_mpz_t(), mz.get_mpz_t());
  return std::stoull(r.get_str());
}

MultiPoly random_poly(std::mt19937_64& rng, unsigned nvars) {
  MultiPoly p(nvars);
  std::uniform_int_distribution<int> nterms(1, 6), ex(0, 4), co(-50, 50);
  const int n = nterms(rng);
  for (int i = 0; i < n; ++i) {
    Exponents e(nvars);
    for (auto& x : e) x = ex(rng);
    p.add_term(e, co(rng));
  }
  if (p.is_zero()) p.add_term(Exponents(nvars, 0), 1);
  return p;
}

}  // namespace

TEST(MultiPoly, EvalModExamples) {
  const auto xy = MultiPoly::parse("x1 x2");
  const std::vector<i64> p34{3, 4};
  EXPECT_EQ(poly_eval_mod(xy, p34, 5), 2u);
  const auto sq = MultiPoly::parse("x1^2 - 1");
  const std::vector<i64> p7{7};
  EXPECT_EQ(poly_eval_mod(sq, p7, 8), 0u);
  EXPECT_EQ(poly_eval_mod(sq, p7, 1), 0u);
  EXPECT_EQ(poly_eval_mod(xy, p34, 1), 0u);
  EXPECT_THROW(poly_eval_mod(sq, p7, 0), DomainError);
}

TEST(MultiPoly, EvalModNegativeAndHugeModulus) {
  const auto T = MultiPoly::parse("-3 x1^5 x2 + 7 x2^3 - 11");
  const u64 m = (1ull << 62) + 135;
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<i64> d(-(1ll << 40), 1ll << 40);
  for (int i = 0; i < 200; ++i) {
    const std::vector<i64> pt{d(rng), d(rng)};
    EXPECT_EQ(poly_eval_mod(T, pt, m), eval_mod_oracle(T, pt, m));
    EXPECT_EQ(poly_eval_mod(T, pt, 97), eval_mod_oracle(T, pt, 97));
  }
}

TEST(MultiPoly, InspectExamples) {
  auto a = poly_inspect(MultiPoly::parse("2 x1 + 4 x2"));
  EXPECT_EQ(a.degree, 1u);
  EXPECT_EQ(a.content, 2);
  EXPECT_FALSE(a.primitive);
  auto b = poly_inspect(MultiPoly::parse("x1^3 x2 - 1"));
  EXPECT_EQ(b.degree, 4u);
  EXPECT_EQ(b.content, 1);
  EXPECT_TRUE(b.primitive);
  auto c = poly_inspect(MultiPoly::parse("6"));
  EXPECT_EQ(c.degree, 0u);
  EXPECT_EQ(c.content, 6);
  EXPECT_FALSE(c.primitive);
  EXPECT_THROW(poly_inspect(MultiPoly(2)), DomainError);
  EXPECT_THROW(poly_inspect(MultiPoly::parse("x1 - x1")), DomainError);
}

TEST(MultiPoly, ParsePrintRoundTrip) {
  const auto p = MultiPoly::parse("-x2 + 3*X1^2 x2 - 5 + x1 x2 + 2 x1^2 x2");
  EXPECT_EQ(p.to_string(), "5 x1^2 x2 + x1 x2 - x2 - 5");
  EXPECT_EQ(MultiPoly::parse(p.to_string()), p);
  EXPECT_EQ(MultiPoly::parse("-x1^4 + x2^4").to_string(), "-x1^4 + x2^4");
  EXPECT_EQ(MultiPoly(3).to_string(), "0");
  EXPECT_EQ(MultiPoly::parse("x1", 3).nvars(), 3u);
  EXPECT_THROW(MultiPoly::parse("x4", 3), PreconditionError);
  EXPECT_THROW(MultiPoly::parse("x17"), PreconditionError);
  EXPECT_THROW(MultiPoly::parse("x1 +"), PreconditionError);
  EXPECT_THROW(MultiPoly::parse(""), PreconditionError);
  EXPECT_THROW(MultiPoly::parse("x1 ^"), PreconditionError);

  std::mt19937_64 rng(11);
  for (int i = 0; i < 100; ++i) {
    const auto q = random_poly(rng, 3);
    EXPECT_EQ(MultiPoly::parse(q.to_string(), 3), q) << q.to_string();
  }
}

TEST(MultiPoly, Arithmetic) {
  const auto x = MultiPoly::variable(1, 0);
  const auto one = MultiPoly::constant(1, 1);
  EXPECT_EQ((x - one) * (x + one), MultiPoly::parse("x1^2 - 1"));
  EXPECT_EQ((x + one).pow(3), MultiPoly::parse("x1^3 + 3 x1^2 + 3 x1 + 1"));
  EXPECT_EQ((x + one).pow(0), one);
  EXPECT_TRUE((x - x).is_zero());
  EXPECT_THROW(x + MultiPoly::variable(2, 0), PreconditionError);
  EXPECT_EQ(MultiPoly::parse("x1^2 x2^5 + x1").degree_in(1), 5u);
  EXPECT_EQ(MultiPoly::parse("3 x1 - 17").max_abs_coefficient(), 17);
}

TEST(MultiPoly, ModularEvaluatorMatchesDirect) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto T = random_poly(rng, 3);
    for (u64 m : {1ull, 2ull, 12ull, 97ull, (1ull << 40) + 15}) {
      const u64 size = std::min<u64>(m, 50);
      ModularEvaluator ev(T, m, size);
      std::uniform_int_distribution<u64> r(0, size - 1);
      for (int i = 0; i < 30; ++i) {
        const std::vector<u64> res{r(rng), r(rng), r(rng)};
        const std::vector<i64> pt{i64(res[0]), i64(res[1]), i64(res[2])};
        EXPECT_EQ(ev(res), poly_eval_mod(T, pt, m));
      }
    }
  }
}

TEST(MultiPoly, CrtConsistencyProperty) {
  std::mt19937_64 rng(19);
  std::uniform_int_distribution<i64> pd(-1000, 1000);
  std::uniform_int_distribution<u64> md(1, 5000);
  for (int i = 0; i < 300; ++i) {
    const auto T = random_poly(rng, 2);
    u64 m1 = md(rng), m2 = md(rng);
    while (gcd_u64(m1, m2) != 1) m2 = md(rng);
    const std::vector<i64> pt{pd(rng), pd(rng)};
    const u64 big = poly_eval_mod(T, pt, m1 * m2);
    EXPECT_EQ(big % m1, poly_eval_mod(T, pt, m1));
    EXPECT_EQ(big % m2, poly_eval_mod(T, pt, m2));
  }
}

TEST(MultiPoly, ContentScalesProperty) {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> ad(-40, 40);
  for (int i = 0; i < 200; ++i) {
    const auto T = random_poly(rng, 3);
    int a = ad(rng);
    if (a == 0) a = 1;
    EXPECT_EQ((T * mpz_class(a)).content(), std::abs(a) * T.content());
  }
}

TEST(FactoredSystem, BuildPowerSystemExamples) {
  const std::vector<u64> c11{1, 1};
  const std::vector<unsigned> l22{2, 2};
  auto s = build_power_system_poly(c11, l22);
  EXPECT_EQ(s.k(), 1u);
  EXPECT_EQ(s.r(), 1u);
  EXPECT_EQ(s.gamma, (std::vector<std::vector<unsigned>>{{1}}));
  EXPECT_EQ(s.Qs[0], MultiPoly::parse("x1^2 + x2^2 - x3^2 - x4^2", 4));
  EXPECT_EQ(s.degree(), 2u);

  const std::vector<u64> c24{2, 4};
  const std::vector<unsigned> l33{3, 3};
  auto s2 = build_power_system_poly(c24, l33);
  EXPECT_EQ(s2.Qs[0], MultiPoly::parse("x1^3 + 2 x2^3 - x3^3 - 2 x4^3", 4));

  const std::vector<u64> c1{1};
  const std::vector<unsigned> l4{4};
  auto s3 = build_power_system_poly(c1, l4);
  EXPECT_EQ(s3.Qs[0], MultiPoly::parse("x1^4 - x2^4", 2));
  EXPECT_EQ(s3.degree(), 4u);

  const std::vector<u64> empty;
  const std::vector<unsigned> lempty;
  EXPECT_THROW(build_power_system_poly(empty, lempty), PreconditionError);
  EXPECT_THROW(build_power_system_poly(c11, l4), PreconditionError);
}

TEST(FactoredSystem, VerifyExamples) {
  const auto x = MultiPoly::variable(1, 0);
  const auto one = MultiPoly::constant(1, 1);
  const auto two = MultiPoly::constant(1, 2);
  FactoredSystem a({x * (x + two)}, {x, x + two}, {{1, 1}});
  auto rep = verify_factored_form(a);
  EXPECT_TRUE(rep.pass);
  EXPECT_EQ(rep.irreducibility, "asserted by caller");

  FactoredSystem b({x * x - one}, {x - one, x + one}, {{1, 1}});
  EXPECT_TRUE(verify_factored_form(b).pass);

  FactoredSystem c({x * x - one}, {x - one}, {{2}});
  try {
    verify_factored_form(c);
    FAIL() << "expected mismatch";
  } catch (const MismatchError& e) {
    EXPECT_EQ(e.where(), "j=1");
  }

  // second Q_j wrong
  FactoredSystem d({x, x + one}, {x, x + two}, {{1, 0}, {0, 1}});
  try {
    verify_factored_form(d);
    FAIL() << "expected mismatch";
  } catch (const MismatchError& e) {
    EXPECT_EQ(e.where(), "j=2");
  }

  // non-primitive Q_1
  FactoredSystem e({two * x}, {two * x}, {{1}});
  EXPECT_THROW(verify_factored_form(e), MismatchError);

  EXPECT_THROW(FactoredSystem({x}, {x}, {{1, 1}}), PreconditionError);
}

TEST(FactoredSystem, PowerSystemsVerifyProperty) {
  std::mt19937_64 rng(29);
  std::uniform_int_distribution<u64> cd(1, 30);
  std::uniform_int_distribution<unsigned> ld(1, 9), td(1, 6);
  for (int i = 0; i < 60; ++i) {
    const unsigned t = td(rng);
    std::vector<u64> c(t);
    std::vector<unsigned> l(t);
    for (auto& v : c) v = cd(rng);
    for (auto& v : l) v = ld(rng);
    auto sys = build_power_system_poly(c, l);
    EXPECT_TRUE(verify_factored_form(sys).pass);
    EXPECT_EQ(sys.nvars(), 2 * t);
    EXPECT_EQ(sys.degree(), *std::max_element(l.begin(), l.end()));
  }
}
