#include "hooley/multipoly.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

#include "hooley/error.hpp"

namespace hooley {

namespace {

unsigned total_degree(const Exponents& e) { return std::accumulate(e.begin(), e.end(), 0u); }

void check_nvars(unsigned nvars) {
  if (nvars > kMaxVariables) {
    throw PreconditionError("MultiPoly: at most " + std::to_string(kMaxVariables) + " variables");
  }
}

}  // namespace

bool GradedLexGreater::operator()(const Exponents& a, const Exponents& b) const {
  const unsigned da = total_degree(a), db = total_degree(b);
  if (da != db) return da > db;
  return a > b;
}

MultiPoly::MultiPoly(unsigned nvars) : nvars_(nvars) { check_nvars(nvars); }

MultiPoly MultiPoly::constant(unsigned nvars, const mpz_class& c) {
  MultiPoly p(nvars);
  p.add_term(Exponents(nvars, 0), c);
  return p;
}

MultiPoly MultiPoly::variable(unsigned nvars, unsigned index) {
  if (index >= nvars) throw PreconditionError("MultiPoly::variable: index out of range");
  Exponents e(nvars, 0);
  e[index] = 1;
  return monomial(std::move(e), 1);
}

MultiPoly MultiPoly::monomial(Exponents exps, const mpz_class& c) {
  MultiPoly p(static_cast<unsigned>(exps.size()));
  p.add_term(exps, c);
  return p;
}

void MultiPoly::add_term(const Exponents& exps, const mpz_class& c) {
  if (exps.size() != nvars_) throw PreconditionError("MultiPoly: exponent vector length mismatch");
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(exps, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

void MultiPoly::check_same_arity(const MultiPoly& o) const {
  if (o.nvars_ != nvars_) {
    throw PreconditionError("MultiPoly: variable counts differ (" + std::to_string(nvars_) + " vs " +
                            std::to_string(o.nvars_) + ")");
  }
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
  check_same_arity(o);
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& o) {
  check_same_arity(o);
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

MultiPoly& MultiPoly::operator*=(const mpz_class& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, coef] : terms_) coef *= c;
  return *this;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
  a.check_same_arity(b);
  MultiPoly out(a.nvars_);
  Exponents e(a.nvars_);
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      for (unsigned i = 0; i < a.nvars_; ++i) e[i] = ea[i] + eb[i];
      out.add_term(e, ca * cb);
    }
  }
  return out;
}

MultiPoly MultiPoly::pow(unsigned e) const {
  MultiPoly result = constant(nvars_, 1);
  MultiPoly base = *this;
  while (e) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return result;
}

unsigned MultiPoly::degree() const {
  if (is_zero()) throw DomainError("degree of the zero polynomial is undefined");
  return total_degree(terms_.begin()->first);
}

unsigned MultiPoly::degree_in(unsigned var) const {
  unsigned d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e.at(var));
  return d;
}

mpz_class MultiPoly::content() const {
  if (is_zero()) throw DomainError("content of the zero polynomial is undefined");
  mpz_class g = 0;
  for (const auto& [e, c] : terms_) g = gcd(g, c);
  return abs(g);
}

mpz_class MultiPoly::max_abs_coefficient() const {
  mpz_class m = 0;
  for (const auto& [e, c] : terms_) m = std::max<mpz_class>(m, abs(c));
  return m;
}

std::string MultiPoly::to_string() const {
  if (is_zero()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    const bool neg = c < 0;
    if (first) {
      if (neg) out << "-";
    } else {
      out << (neg ? " - " : " + ");
    }
    first = false;
    const mpz_class mag = abs(c);
    const bool has_vars = total_degree(e) > 0;
    bool wrote = false;
    if (mag != 1 || !has_vars) {
      out << mag.get_str();
      wrote = true;
    }
    for (unsigned i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (wrote) out << " ";
      out << "x" << (i + 1);
      if (e[i] > 1) out << "^" << e[i];
      wrote = true;
    }
  }
  return out.str();
}

namespace {

class PolyParser {
 public:
  explicit PolyParser(std::string_view s) : s_(s) {}

  struct RawTerm {
    mpz_class coef;
    std::vector<std::pair<unsigned, std::uint32_t>> factors;  // (1-based var, exp)
  };

  std::vector<RawTerm> parse() {
    std::vector<RawTerm> terms;
    skip_ws();
    if (pos_ == s_.size()) fail("empty polynomial");
    int sign = 1;
    if (peek() == '+' || peek() == '-') {
      sign = take() == '-' ? -1 : 1;
    }
    terms.push_back(term(sign));
    while (true) {
      skip_ws();
      if (pos_ == s_.size()) break;
      const char op = take();
      if (op != '+' && op != '-') fail(std::string("expected '+' or '-' but found '") + op + "'");
      terms.push_back(term(op == '-' ? -1 : 1));
    }
    return terms;
  }

 private:
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  char take() { return s_[pos_++]; }
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw PreconditionError("polynomial parse error at offset " + std::to_string(pos_) + ": " + msg);
  }
  std::string digits() {
    std::string d;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) d += s_[pos_++];
    return d;
  }

  RawTerm term(int sign) {
    RawTerm t;
    t.coef = sign;
    skip_ws();
    bool any = false;
    if (std::isdigit(static_cast<unsigned char>(peek()))) {
      t.coef *= mpz_class(digits());
      any = true;
    }
    while (true) {
      skip_ws();
      if (peek() == '*') {
        ++pos_;
        skip_ws();
      }
      if (peek() != 'x' && peek() != 'X') break;
      ++pos_;
      const std::string idx = digits();
      if (idx.empty()) fail("variable needs an index, e.g. x1");
      const unsigned long var = std::stoul(idx);
      if (var < 1 || var > kMaxVariables) fail("variable index out of range: x" + idx);
      std::uint32_t e = 1;
      skip_ws();
      if (peek() == '^') {
        ++pos_;
        skip_ws();
        const std::string ed = digits();
        if (ed.empty()) fail("exponent expected after '^'");
        e = static_cast<std::uint32_t>(std::stoul(ed));
      }
      t.factors.emplace_back(static_cast<unsigned>(var), e);
      any = true;
    }
    if (!any) fail("empty term");
    return t;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

MultiPoly MultiPoly::parse(std::string_view text, unsigned nvars) {
  auto raw = PolyParser(text).parse();
  unsigned seen = 0;
  for (const auto& t : raw)
    for (auto [v, e] : t.factors) seen = std::max(seen, v);
  if (nvars == 0) nvars = std::max(seen, 1u);
  if (seen > nvars) {
    throw PreconditionError("polynomial uses x" + std::to_string(seen) + " but only " + std::to_string(nvars) +
                            " variables were declared");
  }
  MultiPoly p(nvars);
  for (const auto& t : raw) {
    Exponents e(nvars, 0);
    for (auto [v, ex] : t.factors) e[v - 1] += ex;
    p.add_term(e, t.coef);
  }
  return p;
}

PolyInspection poly_inspect(const MultiPoly& T) {
  const mpz_class c = T.content();  // throws on zero
  return {T.degree(), c, c == 1};
}

u64 poly_eval_mod(const MultiPoly& T, std::span<const i64> point, u64 m) {
  if (m == 0) throw DomainError("poly_eval_mod: modulus must be >= 1");
  if (point.size() != T.nvars()) throw PreconditionError("poly_eval_mod: point has wrong dimension");
  if (m == 1) return 0;
  std::vector<u64> residues(point.size());
  for (std::size_t i = 0; i < point.size(); ++i) residues[i] = reduce_signed(point[i], m);
  const mpz_class mz(std::to_string(m));
  u64 acc = 0;
  for (const auto& [e, c] : T.terms()) {
    mpz_class cr;
    mpz_fdiv_r(cr.get_mpz_t(), c.get_mpz_t(), mz.get_mpz_t());
    u64 term = std::stoull(cr.get_str());
    for (std::size_t i = 0; i < e.size() && term != 0; ++i) {
      if (e[i]) term = mulmod(term, powmod(residues[i], e[i], m), m);
    }
    acc += term;
    if (acc >= m || acc < term) acc -= m;
  }
  return acc;
}

mpz_class poly_eval(const MultiPoly& T, std::span<const i64> point) {
  if (point.size() != T.nvars()) throw PreconditionError("poly_eval: point has wrong dimension");
  mpz_class acc = 0;
  for (const auto& [e, c] : T.terms()) {
    mpz_class term = c;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (!e[i]) continue;
      mpz_class pw;
      mpz_class base(std::to_string(point[i]));
      mpz_pow_ui(pw.get_mpz_t(), base.get_mpz_t(), e[i]);
      term *= pw;
    }
    acc += term;
  }
  return acc;
}

ModularEvaluator::ModularEvaluator(const MultiPoly& T, u64 m, u64 table_size) : m_(m) {
  if (m == 0) throw DomainError("ModularEvaluator: modulus must be >= 1");
  const mpz_class mz(std::to_string(m));
  std::map<std::pair<unsigned, std::uint32_t>, std::size_t> row_index;
  for (const auto& [e, c] : T.terms()) {
    for (unsigned v = 0; v < e.size(); ++v) {
      if (e[v] && !row_index.count({v, e[v]})) {
        row_index[{v, e[v]}] = rows_.size();
        std::vector<u64> row(table_size);
        for (u64 x = 0; x < table_size; ++x) row[x] = powmod(x % m, e[v], m);
        rows_.push_back(std::move(row));
      }
    }
  }
  for (const auto& [e, c] : T.terms()) {
    mpz_class cr;
    mpz_fdiv_r(cr.get_mpz_t(), c.get_mpz_t(), mz.get_mpz_t());
    Term term{std::stoull(cr.get_str()), {}};
    if (term.coef == 0) continue;
    for (unsigned v = 0; v < e.size(); ++v) {
      if (e[v]) term.factors.emplace_back(v, rows_[row_index.at({v, e[v]})].data());
    }
    terms_.push_back(std::move(term));
  }
}

u64 ModularEvaluator::operator()(std::span<const u64> residues) const {
  u64 acc = 0;
  if (m_ <= 0xffffffffull) {
    for (const auto& t : terms_) {
      u64 v = t.coef;
      for (const auto& [var, row] : t.factors) v = v * row[residues[var]] % m_;
      acc += v;
      if (acc >= m_) acc -= m_;
    }
    return acc;
  }
  for (const auto& t : terms_) {
    u64 v = t.coef;
    for (const auto& [var, row] : t.factors) v = mulmod(v, row[residues[var]], m_);
    acc += v;
    if (acc >= m_ || acc < v) acc -= m_;
  }
  return acc;
}

ExactEvaluator::ExactEvaluator(const MultiPoly& T) : T_(&T) {
  for (const auto& [e, c] : T.terms()) {
    if (!c.fits_slong_p()) small_ = false;
    Term term{small_ ? static_cast<i128>(c.get_si()) : 0, {}};
    for (unsigned v = 0; v < e.size(); ++v)
      if (e[v]) term.factors.emplace_back(v, e[v]);
    terms_.push_back(std::move(term));
  }
}

bool ExactEvaluator::eval_small(std::span<const i64> pt, i128& out) const {
  i128 acc = 0;
  for (const auto& t : terms_) {
    i128 v = t.coef;
    for (auto [var, e] : t.factors) {
      for (std::uint32_t k = 0; k < e; ++k)
        if (__builtin_mul_overflow(v, static_cast<i128>(pt[var]), &v)) return false;
    }
    if (__builtin_add_overflow(acc, v, &acc)) return false;
  }
  out = acc;
  return true;
}

bool ExactEvaluator::eval(std::span<const i64> pt, i128& small, mpz_class& big) const {
  if (small_ && eval_small(pt, small)) return true;
  big = poly_eval(*T_, pt);
  return false;
}

mpz_class ExactEvaluator::operator()(std::span<const i64> pt) const {
  i128 small;
  mpz_class big;
  if (!eval(pt, small, big)) return big;
  const bool neg = small < 0;
  u128 mag = neg ? -static_cast<u128>(small) : static_cast<u128>(small);
  mpz_class out = static_cast<unsigned long>(mag >> 64);
  out <<= 64;
  out += static_cast<unsigned long>(mag & 0xffffffffffffffffull);
  return neg ? mpz_class(-out) : out;
}

FactoredSystem::FactoredSystem(std::vector<MultiPoly> qs, std::vector<MultiPoly> rs,
                               std::vector<std::vector<unsigned>> g)
    : Qs(std::move(qs)), Rs(std::move(rs)), gamma(std::move(g)) {
  if (Qs.empty() || Rs.empty()) throw PreconditionError("FactoredSystem: need at least one Q_j and one R_h");
  if (gamma.size() != Qs.size()) throw PreconditionError("FactoredSystem: gamma must have k rows");
  for (const auto& row : gamma)
    if (row.size() != Rs.size()) throw PreconditionError("FactoredSystem: gamma rows must have r entries");
  const unsigned t = Qs.front().nvars();
  for (const auto& q : Qs)
    if (q.nvars() != t) throw PreconditionError("FactoredSystem: Q_j variable counts differ");
  for (const auto& r : Rs)
    if (r.nvars() != t) throw PreconditionError("FactoredSystem: R_h variable counts differ from Q_j");
}

unsigned FactoredSystem::nvars() const { return Qs.empty() ? 0 : Qs.front().nvars(); }

std::vector<unsigned> FactoredSystem::gamma_h() const {
  std::vector<unsigned> out(r(), 0);
  for (const auto& row : gamma)
    for (std::size_t h = 0; h < row.size(); ++h) out[h] += row[h];
  return out;
}

unsigned FactoredSystem::degree() const {
  unsigned g = 0;
  for (const auto& q : Qs) g += q.degree();
  return g;
}

MultiPoly FactoredSystem::product() const {
  MultiPoly q = MultiPoly::constant(nvars(), 1);
  for (const auto& qj : Qs) q = q * qj;
  return q;
}

VerificationReport verify_factored_form(const FactoredSystem& sys) {
  VerificationReport rep;
  const unsigned t = sys.nvars();
  for (std::size_t j = 0; j < sys.k(); ++j) {
    MultiPoly expected = MultiPoly::constant(t, 1);
    for (std::size_t h = 0; h < sys.r(); ++h) expected = expected * sys.Rs[h].pow(sys.gamma[j][h]);
    if (!(expected == sys.Qs[j])) {
      throw MismatchError("Q_" + std::to_string(j + 1) + " = " + sys.Qs[j].to_string() +
                              " differs from prod_h R_h^gamma_jh = " + expected.to_string(),
                          "j=" + std::to_string(j + 1));
    }
    if (!sys.Qs[j].is_zero() && !sys.Qs[j].primitive()) {
      throw MismatchError("Q_" + std::to_string(j + 1) + " is not primitive (content " +
                              sys.Qs[j].content().get_str() + ")",
                          "j=" + std::to_string(j + 1));
    }
  }
  rep.checks.push_back("Q_j = prod_h R_h^gamma_jh for every j");
  rep.checks.push_back("every Q_j primitive");

  const auto gh = sys.gamma_h();
  MultiPoly rhs = MultiPoly::constant(t, 1);
  for (std::size_t h = 0; h < sys.r(); ++h) {
    if (gh[h] == 0) {
      throw MismatchError("R_" + std::to_string(h + 1) + " has gamma_h = 0", "h=" + std::to_string(h + 1));
    }
    rhs = rhs * sys.Rs[h].pow(gh[h]);
  }
  const MultiPoly lhs = sys.product();
  if (!(lhs == rhs)) throw MismatchError("prod_j Q_j differs from prod_h R_h^gamma_h", "h=*");
  rep.checks.push_back("prod_j Q_j = prod_h R_h^gamma_h");

  unsigned weighted = 0;
  for (std::size_t h = 0; h < sys.r(); ++h) weighted += gh[h] * sys.Rs[h].degree();
  if (weighted != lhs.degree()) {
    throw MismatchError("sum_h gamma_h deg R_h = " + std::to_string(weighted) + " but deg Q = " +
                            std::to_string(lhs.degree()),
                        "h=*");
  }
  rep.checks.push_back("sum_h gamma_h deg R_h = g");
  rep.pass = true;
  return rep;
}

FactoredSystem build_power_system_poly(std::span<const u64> c, std::span<const unsigned> l) {
  if (c.empty() || c.size() != l.size()) {
    throw PreconditionError("build_power_system_poly: c and l must be nonempty and equally long");
  }
  if (2 * c.size() > kMaxVariables) throw PreconditionError("build_power_system_poly: too many variables");
  u64 g = 0;
  for (std::size_t j = 0; j < c.size(); ++j) {
    if (c[j] < 1 || l[j] < 1) throw PreconditionError("build_power_system_poly: entries must be >= 1");
    g = std::gcd(g, c[j]);
  }
  const unsigned t = static_cast<unsigned>(c.size());
  MultiPoly q(2 * t);
  for (unsigned j = 0; j < t; ++j) {
    const mpz_class cj(std::to_string(c[j] / g));
    Exponents ex(2 * t, 0), ey(2 * t, 0);
    ex[j] = l[j];
    ey[t + j] = l[j];
    q.add_term(ex, cj);
    q.add_term(ey, -cj);
  }
  return FactoredSystem({q}, {q}, {{1}});
}

}  // namespace hooley
