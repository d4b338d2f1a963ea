#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "hooley/congruence.hpp"
#include "hooley/delta.hpp"
#include "hooley/error.hpp"
#include "hooley/factor_table.hpp"
#include "hooley/meanvalue.hpp"
#include "hooley/powersums.hpp"
#include "powersum/cli.hpp"

#ifndef POWERSUM_VERSION
#define POWERSUM_VERSION "unknown"
#endif

namespace powersum {

using namespace hooley;
namespace fs = std::filesystem;

std::uint64_t parse_count(std::string_view text) {
  // digits[.digits][e|E digits], exact
  std::size_t i = 0;
  std::string mant;
  int frac = 0;
  bool dot = false;
  for (; i < text.size() && (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == '.'); ++i) {
    if (text[i] == '.') {
      if (dot) break;
      dot = true;
    } else {
      mant += text[i];
      frac += dot;
    }
  }
  int exp = 0;
  if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    ++i;
    std::size_t start = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) exp = exp * 10 + (text[i++] - '0');
    if (i == start) mant.clear();
  }
  if (mant.empty() || i != text.size())
    throw PreconditionError("expected a nonnegative integer (e.g. 1000 or 1e6), got '" + std::string(text) + "'");
  exp -= frac;
  while (exp < 0 && !mant.empty() && mant.back() == '0') mant.pop_back(), ++exp;
  if (exp < 0) throw PreconditionError("'" + std::string(text) + "' is not an integer");
  u128 v = 0;
  for (char ch : mant) {
    v = v * 10 + static_cast<unsigned>(ch - '0');
    if (v > std::numeric_limits<u64>::max()) throw PreconditionError("'" + std::string(text) + "' is out of range");
  }
  for (int k = 0; k < exp; ++k) {
    v *= 10;
    if (v > std::numeric_limits<u64>::max()) throw PreconditionError("'" + std::string(text) + "' is out of range");
  }
  return static_cast<u64>(v);
}

namespace {

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = text.find(sep, start);
    out.emplace_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

std::vector<u64> parse_u64_list(std::string_view text) {
  std::vector<u64> v;
  for (const auto& s : split(text, ',')) v.push_back(parse_count(s));
  return v;
}

std::vector<i64> parse_i64_list(std::string_view text) {
  std::vector<i64> v;
  for (const auto& s : split(text, ',')) {
    bool neg = !s.empty() && s[0] == '-';
    u64 m = parse_count(neg ? std::string_view(s).substr(1) : std::string_view(s));
    if (m > static_cast<u64>(std::numeric_limits<i64>::max())) throw PreconditionError("'" + s + "' is out of range");
    v.push_back(neg ? -static_cast<i64>(m) : static_cast<i64>(m));
  }
  return v;
}

std::vector<unsigned> parse_exponents(std::string_view text) {
  std::vector<unsigned> v;
  for (u64 x : parse_u64_list(text)) {
    if (x > 1000) throw PreconditionError("exponent " + std::to_string(x) + " too large");
    v.push_back(static_cast<unsigned>(x));
  }
  return v;
}

// "1,0;0,1" -> rows
std::vector<std::vector<unsigned>> parse_matrix(std::string_view text) {
  std::vector<std::vector<unsigned>> m;
  for (const auto& row : split(text, ';')) m.push_back(parse_exponents(row));
  return m;
}

std::vector<std::vector<unsigned>> identity_matrix(std::size_t n) {
  std::vector<std::vector<unsigned>> m(n, std::vector<unsigned>(n, 0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

std::string join_list(const auto& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

std::string real17(double v) {
  std::ostringstream o;
  o.precision(17);
  o << v;
  return o.str();
}

std::string utc_now() {
  auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string fnv1a_hex(std::string_view s) {
  const std::uint64_t h = fnv1a64({reinterpret_cast<const std::uint8_t*>(s.data()), s.size()});
  std::ostringstream o;
  o << std::hex << std::setw(16) << std::setfill('0') << h;
  return o.str();
}

MultiArithmeticFunction pick_function(const std::string& name, unsigned k) {
  if (name == "delta") return k == 1 ? MultiArithmeticFunction::delta() : MultiArithmeticFunction::delta_product(k);
  if (name == "one") return MultiArithmeticFunction::constant(k, 1.0);
  if (name == "tau") return MultiArithmeticFunction::divisor_count(k);
  if (name == "id") {
    if (k != 1) throw PreconditionError("--F id needs a single factor");
    return MultiArithmeticFunction::identity();
  }
  throw PreconditionError("unknown function '" + name + "' (expected delta|one|tau|id)");
}

RhoMethod pick_method(const std::string& m) {
  if (m == "auto") return RhoMethod::automatic;
  if (m == "bruteforce") return RhoMethod::bruteforce;
  if (m == "crt") return RhoMethod::crt;
  throw PreconditionError("unknown method '" + m + "' (expected auto|bruteforce|crt)");
}

std::vector<MultiPoly> parse_polys(const std::vector<std::string>& texts) {
  unsigned nv = 0;
  for (const auto& t : texts) nv = std::max(nv, MultiPoly::parse(t).nvars());
  std::vector<MultiPoly> out;
  for (const auto& t : texts) out.push_back(MultiPoly::parse(t, std::max(nv, 1u)));
  return out;
}

struct Session {
  std::ostream& out;
  std::ostream& err;
  Budget budget;
  std::string out_path;
  std::string cache_dir;
  RunManifest manifest;

  // Primary text output: stdout, plus the --out file when given.
  void emit(const std::string& text) {
    out << text;
    if (!out_path.empty()) {
      fs::path p(out_path);
      if (p.has_parent_path()) fs::create_directories(p.parent_path());
      std::ofstream f(p);
      if (!f) throw std::runtime_error("cannot write " + out_path);
      f << text;
      manifest.outputs.push_back(out_path);
    }
  }

  // Report output: JSON lines to --out (or stdout), summary to stdout.
  int report(const CheckReport& rep) {
    std::size_t failed = emit_report(rep, out_path, out);
    if (!out_path.empty()) manifest.outputs.push_back(out_path);
    return failed ? kAssertion : kOk;
  }

  // Cached text outputs, keyed by the canonical inputs.
  template <class Compute>
  int cached(const std::string& kind, Compute compute) {
    if (cache_dir.empty()) {
      auto [text, code] = compute();
      emit(text);
      return code;
    }
    fs::path file = fs::path(cache_dir) / (kind + "-" + manifest.input_hash + ".csv");
    fs::path status = file;
    status += ".status";
    if (fs::exists(file) && fs::exists(status)) {
      std::ifstream f(file), s(status);
      std::stringstream buf;
      buf << f.rdbuf();
      int code = kOk;
      s >> code;
      err << "cache hit: " << file.string() << '\n';
      emit(buf.str());
      return code;
    }
    auto [text, code] = compute();
    fs::create_directories(cache_dir);
    std::ofstream(file) << text;
    std::ofstream(status) << code << '\n';
    emit(text);
    return code;
  }
};

std::vector<u64> x_values(const std::string& x, const std::string& grid) {
  if (!grid.empty()) return parse_grid(grid);
  if (x.empty()) throw PreconditionError("one of --x or --grid is required");
  return {parse_count(x)};
}

PowerSystem power_system(const std::string& c, const std::string& l) {
  auto lv = parse_exponents(l);
  std::vector<u64> cv = c.empty() ? std::vector<u64>(lv.size(), 1) : parse_u64_list(c);
  return PowerSystem(cv, lv);
}

}  // namespace

std::vector<std::uint64_t> parse_grid(std::string_view text) {
  auto parts = split(text, ':');
  if (parts.size() < 3 || parts.size() > 4)
    throw PreconditionError("grid must be lo:hi:log|lin[:n], got '" + std::string(text) + "'");
  const u64 lo = parse_count(parts[0]), hi = parse_count(parts[1]);
  if (lo == 0 || lo > hi) throw PreconditionError("grid needs 1 <= lo <= hi");
  const std::string& kind = parts[2];
  if (kind != "log" && kind != "lin") throw PreconditionError("grid spacing must be log or lin, got '" + kind + "'");
  std::vector<u64> g;
  if (parts.size() == 4) {
    const u64 n = parse_count(parts[3]);
    if (n < 1) throw PreconditionError("grid needs n >= 1");
    for (u64 i = 0; i < n; ++i) {
      if (n == 1) {
        g.push_back(hi);
        break;
      }
      if (kind == "lin") {
        g.push_back(lo + static_cast<u64>((static_cast<u128>(hi - lo) * i) / (n - 1)));
      } else {
        long double r = std::log(static_cast<long double>(hi) / lo) * i / (n - 1);
        g.push_back(i + 1 == n ? hi : static_cast<u64>(std::llround(lo * std::exp(r))));
      }
    }
  } else if (kind == "log") {
    for (u128 v = lo; v <= hi; v *= 10) g.push_back(static_cast<u64>(v));
    if (g.back() != hi) g.push_back(hi);
  } else {
    const u64 n = 10;
    for (u64 i = 0; i < n; ++i) g.push_back(lo + static_cast<u64>((static_cast<u128>(hi - lo) * i) / (n - 1)));
  }
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  return g;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Divisor concentration, polynomial congruences and sums of powers", "powersum"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string budget_name = "medium", out_path, cache_dir;
  unsigned threads = 0;
  app.add_option("--budget", budget_name, "budget preset: small|medium|large")->check(CLI::IsMember({"small", "medium", "large"}));
  app.add_option("--threads", threads, "worker threads (0 = all cores)");
  app.add_option("--out", out_path, "output file; a manifest is written next to it");
  app.add_option("--cache-dir", cache_dir, "cache directory (default: $POWERSUM_CACHE_DIR)");

  // delta
  auto* s_delta = app.add_subcommand("delta", "Delta(n), or the count in (e^u, e^(u+1)] with --u");
  std::string n_text;
  std::optional<double> u;
  s_delta->add_option("n", n_text, "n >= 1")->required();
  s_delta->add_option("--u", u, "window start (log scale)");

  // means
  auto* s_means = app.add_subcommand("means", "S(x) and frakS(x)");
  std::string x_text, grid_text;
  bool reference = false;
  s_means->add_option("--x", x_text, "upper limit");
  s_means->add_option("--grid", grid_text, "lo:hi:log|lin[:n]");
  s_means->add_flag("--reference", reference, "cross-check against the divisor-sieve route");

  // rho
  auto* s_rho = app.add_subcommand("rho", "rho^+_T(s), or a bound check with --check");
  std::vector<std::string> polys;
  std::string s_text, method = "auto", check, c_text, l_text;
  u64 p_max = 53;
  unsigned nu_max = 3;
  s_rho->add_option("--poly", polys, "polynomial, e.g. 'x1^2 + x2^2 + 1'");
  s_rho->add_option("--s", s_text, "modulus");
  s_rho->add_option("--method", method, "auto|bruteforce|crt");
  s_rho->add_option("--check", check, "sz|stewart|korobov")->check(CLI::IsMember({"sz", "stewart", "korobov"}));
  s_rho->add_option("--p-max", p_max, "largest prime for --check");
  s_rho->add_option("--nu-max", nu_max, "largest exponent for --check stewart");
  s_rho->add_option("--c", c_text, "coefficients for --check korobov");
  s_rho->add_option("--l", l_text, "exponents for --check korobov");

  // rhosharp
  auto* s_sharp = app.add_subcommand("rhosharp", "rho^#_R(s) over the period K(s)");
  bool density = false;
  s_sharp->add_option("--poly", polys, "R_h, repeat per factor")->required();
  s_sharp->add_option("--s", s_text, "moduli s_1,...,s_r")->required();
  s_sharp->add_option("--method", method, "auto|bruteforce|crt");
  s_sharp->add_flag("--density", density, "check the density identity against a period scan");

  // esum
  auto* s_esum = app.add_subcommand("esum", "E_R(v)");
  std::string fname = "delta", gamma_text, v_text, order = "by_product";
  bool table = false;
  s_esum->add_option("--poly", polys, "R_h, repeat per factor")->required();
  s_esum->add_option("--F", fname, "delta|one|tau|id");
  s_esum->add_option("--gamma", gamma_text, "k x r exponent matrix, rows split by ';' (default identity)");
  s_esum->add_option("--v", v_text, "v >= 1")->required();
  s_esum->add_option("--order", order, "by_product|lexicographic");
  s_esum->add_flag("--table", table, "print E_R(1..v)");

  // sift
  auto* s_sift = app.add_subcommand("sift", "sifted count in a box");
  std::vector<std::string> qs, rs;
  std::string a_text, y_text;
  u64 z = 2;
  s_sift->add_option("--Q", qs, "Q_j, repeat per factor")->required();
  s_sift->add_option("--R", rs, "R_h, repeat per factor (default: the Q_j)");
  s_sift->add_option("--gamma", gamma_text, "k x r exponent matrix (default identity)");
  s_sift->add_option("--a", a_text, "a_1,...,a_r (default all 1)");
  s_sift->add_option("--x", x_text, "box corner x_1,...,x_t")->required();
  s_sift->add_option("--y", y_text, "box sides y_1,...,y_t")->required();
  s_sift->add_option("--z", z, "sieve limit");

  // vcount
  auto* s_v = app.add_subcommand("vcount", "V_0, V_1, V_2 and the V_2 split");
  s_v->add_option("--c", c_text, "c_0,...,c_t (default all 1)");
  s_v->add_option("--l", l_text, "l_0,...,l_t")->required();
  s_v->add_option("--x", x_text, "upper limit");
  s_v->add_option("--grid", grid_text, "lo:hi:log|lin[:n]");

  // admissible
  auto* s_adm = app.add_subcommand("admissible", "conditions on an exponent tuple");
  s_adm->add_option("--l", l_text, "l_0,...,l_t")->required();

  // extend
  auto* s_ext = app.add_subcommand("extend", "plus/star constructions");
  std::string mode = "plus";
  s_ext->add_option("--l", l_text, "l_0,...,l_t")->required();
  s_ext->add_option("--mode", mode, "plus|star")->check(CLI::IsMember({"plus", "star"}));

  // growth
  auto* s_growth = app.add_subcommand("growth", "growth table with monitored ratios");
  s_growth->add_option("--c", c_text, "c_0,...,c_t (default all 1)");
  s_growth->add_option("--l", l_text, "l_0,...,l_t")->required();
  s_growth->add_option("--grid", grid_text, "lo:hi:log|lin[:n]")->required();

  // verify
  auto* s_verify = app.add_subcommand("verify", "invariant panels");
  std::string suite = "core";
  s_verify->add_option("--suite", suite, "core|delta|congruence|meanvalue|powersums");

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  Session ses{out, err, {}, out_path, cache_dir, {}};
  if (ses.cache_dir.empty())
    if (const char* env = std::getenv("POWERSUM_CACHE_DIR")) ses.cache_dir = env;

  auto& man = ses.manifest;
  man.command_line.push_back("powersum");
  man.command_line.insert(man.command_line.end(), args.begin(), args.end());
  man.version = POWERSUM_VERSION;
  man.started = utc_now();
  std::string canonical = sub->get_name();
  for (const CLI::Option* opt : sub->get_options()) {
    if (opt->count() == 0 || opt->get_name() == "--help") continue;
    std::string v;
    for (const auto& r : opt->results()) v += (v.empty() ? "" : " ") + r;
    man.config[opt->get_name()] = v;
    canonical += "|" + opt->get_name() + "=" + v;
  }
  man.input_hash = fnv1a_hex(canonical + "|" + POWERSUM_VERSION);
  man.config["budget"] = budget_name;
  man.config["threads"] = std::to_string(threads);
  if (!ses.cache_dir.empty()) man.config["cache_dir"] = ses.cache_dir;

  int code = kOk;
  try {
    ses.budget = Budget::preset(budget_name);
    ses.budget.threads = threads;
    man.budget = ses.budget;
    const Budget& budget = ses.budget;
    const std::string name = sub->get_name();

    if (name == "delta") {
      const u64 n = parse_count(n_text);
      if (n == 0) throw DomainError("Delta(0) is undefined");
      ses.emit(std::to_string(u ? delta(n, *u) : delta(n)) + "\n");
    } else if (name == "means") {
      auto xs = x_values(x_text, grid_text);
      code = ses.cached("means", [&] {
        MeanSumOptions mo;
        mo.checkpoints = xs;
        mo.max_x = budget.max_x;
        mo.segment_size = budget.segment_size;
        mo.threads = resolve_threads(budget.threads);
        auto rows = delta_mean_sums(xs.back(), mo);
        std::string text = "x,S,frakS,monitor\n";
        CheckReport rep;
        for (const auto& r : rows) {
          text += std::to_string(r.x) + "," + std::to_string(r.S) + "," + real17(r.frakS) + "," +
                  real17(r.x >= 3 ? frak_monitor(r) : 0.0) + "\n";
          if (reference) {
            auto ref = delta_mean_sums_reference(r.x);
            rep.rows.push_back({"S_two_routes", "x=" + std::to_string(r.x), std::to_string(r.S),
                                std::to_string(ref.S), 1.0, r.S == ref.S});
            double rel = r.x > 1 ? std::abs(r.frakS - ref.frakS) / ref.frakS : 0.0;
            rep.rows.push_back({"frakS_two_routes", "x=" + std::to_string(r.x), real17(r.frakS), real17(ref.frakS),
                                rel, rel <= 1e-10});
          }
        }
        if (!rep.pass()) {
          emit_report(rep, {}, err);
          return std::pair{text, int(kAssertion)};
        }
        return std::pair{text, int(kOk)};
      });
    } else if (name == "rho") {
      if (check == "korobov") {
        auto c = parse_u64_list(c_text);
        auto l = parse_exponents(l_text);
        code = ses.report(check_korobov_estimate(c, l, p_max, budget));
      } else {
        if (polys.size() != 1) throw PreconditionError("rho takes exactly one --poly");
        const auto T = MultiPoly::parse(polys[0]);
        if (check == "sz") {
          code = ses.report(check_schwartz_zippel(T, p_max, budget));
        } else if (check == "stewart") {
          code = ses.report(check_stewart_bound(T, p_max, nu_max, budget));
        } else {
          if (s_text.empty()) throw PreconditionError("rho needs --s");
          auto r = rho_plus(T, parse_count(s_text), pick_method(method), budget);
          ses.emit(std::to_string(r.value) + "\n");
        }
      }
    } else if (name == "rhosharp") {
      auto R = parse_polys(polys);
      ModulusVector s(parse_u64_list(s_text));
      if (density) {
        auto d = density_identity_check(R, s, budget);
        CheckReport rep;
        rep.rows.push_back({"density_identity", "s=(" + join_list(s.values()) + ")", d.sharp_density.get_str(),
                            d.period_density.get_str(), 1.0, d.pass});
        code = ses.report(rep);
      } else {
        auto r = rho_sharp(R, s, pick_method(method), budget);
        ses.emit(std::to_string(r.value) + " " + std::to_string(r.period) + "\n");
      }
    } else if (name == "esum") {
      auto R = parse_polys(polys);
      auto gamma = gamma_text.empty() ? identity_matrix(R.size()) : parse_matrix(gamma_text);
      auto Fh = lift(pick_function(fname, static_cast<unsigned>(gamma.size())), gamma);
      EnumerationOrder ord;
      if (order == "by_product") ord = EnumerationOrder::by_product;
      else if (order == "lexicographic") ord = EnumerationOrder::lexicographic;
      else throw PreconditionError("unknown order '" + order + "'");
      const u64 v = parse_count(v_text);
      auto tab = e_sum_table(R, Fh, v, R.front().nvars(), ord, budget);
      std::string text;
      if (table) {
        text = "v,E\n";
        for (std::size_t i = 0; i < tab.size(); ++i) text += std::to_string(i + 1) + "," + real17(tab[i]) + "\n";
      } else {
        text = real17(tab.back()) + "\n";
      }
      ses.emit(text);
    } else if (name == "sift") {
      auto Q = parse_polys(qs);
      auto R = rs.empty() ? Q : parse_polys(rs);
      unsigned nv = std::max(Q.front().nvars(), R.front().nvars());
      for (auto& p : Q) if (p.nvars() != nv) p = MultiPoly::parse(p.to_string(), nv);
      for (auto& p : R) if (p.nvars() != nv) p = MultiPoly::parse(p.to_string(), nv);
      auto gamma = gamma_text.empty() ? identity_matrix(Q.size()) : parse_matrix(gamma_text);
      FactoredSystem sys(Q, R, gamma);
      ModulusVector a(a_text.empty() ? std::vector<u64>(R.size(), 1) : parse_u64_list(a_text));
      auto x = parse_i64_list(x_text);
      auto y = parse_u64_list(y_text);
      auto r = sifted_count(sys, a, x, y, z, budget);
      ses.emit("count,rhs,ratio\n" + std::to_string(r.count) + "," + real17(r.rhs) + "," + real17(r.bound_ratio) + "\n");
    } else if (name == "vcount") {
      auto sys = power_system(c_text, l_text);
      auto xs = x_values(x_text, grid_text);
      code = ses.cached("vcount", [&] {
        VCountOptions vo;
        vo.checkpoints = xs;
        auto recs = v_counts(xs.back(), sys, vo, budget);
        std::string text = "x,V0,V1,V2,V2eq,V2neq\n";
        CheckReport rep;
        for (const auto& r : recs) {
          text += std::to_string(r.x) + "," + std::to_string(r.V0) + "," + std::to_string(r.V1) + "," +
                  u128_to_string(r.V2) + "," + u128_to_string(r.V2_eq) + "," + u128_to_string(r.V2_neq) + "\n";
          rep.append(check_cs_and_split(r));
        }
        if (!rep.pass()) {
          emit_report(rep, {}, err);
          return std::pair{text, int(kAssertion)};
        }
        return std::pair{text, int(kOk)};
      });
    } else if (name == "admissible") {
      auto l = parse_exponents(l_text);
      auto r = admissible(l);
      std::string text = "l=(" + join_list(l) + ") s=" + std::to_string(r.s) + " " +
                         (r.admissible ? "admissible" : "not admissible") + "\n";
      for (const auto& why : r.reasons) text += why + "\n";
      ses.emit(text);
      code = r.admissible ? kOk : kAssertion;
    } else if (name == "extend") {
      auto l = parse_exponents(l_text);
      ses.emit(join_list(extend(l, mode == "plus" ? ExtendMode::plus : ExtendMode::star)) + "\n");
    } else if (name == "growth") {
      auto sys = power_system(c_text, l_text);
      auto xs = parse_grid(grid_text);
      code = ses.cached("growth", [&] {
        auto tab = growth_table(sys, xs, budget);
        if (!tab.checks.pass()) {
          emit_report(tab.checks, {}, err);
          return std::pair{growth_csv(tab), int(kAssertion)};
        }
        return std::pair{growth_csv(tab), int(kOk)};
      });
    } else if (name == "verify") {
      code = ses.report(verify_suite(suite, budget));
    }
  } catch (const BudgetError& e) {
    err << "budget exceeded: " << e.what();
    if (!e.hint().empty()) err << " (try " << e.hint() << ")";
    err << '\n';
    code = kBudget;
  } catch (const AssertionFailure& e) {
    err << "assertion failed: " << e.what() << '\n';
    code = kAssertion;
  } catch (const MismatchError& e) {
    err << "mismatch at " << e.where() << ": " << e.what() << '\n';
    code = kAssertion;
  } catch (const std::invalid_argument& e) {  // PreconditionError and bad numbers
    err << "error: " << e.what() << "\n" << sub->help();
    code = kUsage;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    code = kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    code = kAssertion;
  }

  if (!out_path.empty() && code != kUsage) {
    man.finished = utc_now();
    try {
      write_manifest(man, out_path + ".manifest.json");
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      if (code == kOk) code = kAssertion;
    }
  }
  return code;
}

}  // namespace powersum
