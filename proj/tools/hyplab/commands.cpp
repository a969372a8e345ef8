#include "commands.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

#include "cache.hpp"
#include "hyplab/arith.hpp"
#include "hyplab/errors.hpp"
#include "hyplab/expsum.hpp"
#include "hyplab/hooley.hpp"
#include "hyplab/hyperbola.hpp"
#include "json.hpp"

namespace hyplab::cli {

using json = nlohmann::ordered_json;

ComputeOptions GlobalConfig::compute() const {
  ComputeOptions o;
  o.threads = threads;
  o.work_cap = work_cap;
  return o;
}

std::uint64_t parse_count(const std::string& text) {
  const char* b = text.data();
  const char* e = b + text.size();
  std::uint64_t v = 0;
  if (auto [p, ec] = std::from_chars(b, e, v); ec == std::errc() && p == e) return v;
  double d = 0;
  if (auto [p, ec] = std::from_chars(b, e, d); ec == std::errc() && p == e && d >= 0 && d < 9.2e18 && d == std::floor(d))
    return static_cast<std::uint64_t>(d);
  throw UsageError("expected a non-negative integer, got '" + text + "'");
}

std::vector<std::uint64_t> parse_count_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(parse_count(item));
  return out;
}

namespace {

const std::map<std::string, std::string>& aliases() {
  static const std::map<std::string, std::string> m = {
      {"tau_k", "cor2_tau_k"},         {"tau_sq", "cor3_tau_sq"},          {"tau_cube", "cor3_tau_cube"},
      {"tau_paren_k", "cor4_tau_paren_k"}, {"tau_star_mu_k", "cor5_tau_star_mu_k"}, {"three_omega", "cor6_three_omega"},
      {"lambda_g", "cor7_lambda_g"},   {"log_k", "cor8_log_k"}};
  return m;
}

int default_k(const std::string& family) {
  if (family == "cor2_tau_k") return 4;
  if (family == "cor8_log_k") return 1;
  return 2;
}

std::string csv_value(const Value& v) { return v.to_string(); }
std::string csv_real(double v) { return format_double(v); }
// grid coordinates that are whole numbers print bare
std::string csv_coord(double v) {
  if (v == std::floor(v) && std::abs(v) < 9.0e15) return std::to_string(static_cast<std::int64_t>(v));
  return format_double(v);
}

json json_value(const Value& v) {
  if (!v.is_exact()) return v.to_double();
  const int128 e = v.exact_value();
  if (e >= INT64_MIN && e <= INT64_MAX) return static_cast<std::int64_t>(e);
  return v.to_string();
}

// Window sums go through one code path whether or not a cache is configured,
// so warm, cold and uncached runs agree bit for bit.
Value window_sum(const GlobalConfig& g, const FunctionSpec& F, std::uint64_t x, std::uint64_t y) {
  const ComputeOptions opts = g.compute();
  if (y == 0) return Value::exact(0);
  if (y > opts.segment_cap) return short_sum_bruteforce(F, x, y, opts);
  if (g.cache_dir.empty()) return sieve_range(F, x + 1, x + y, opts).sum();
  const SegmentCache cache(g.cache_dir);
  if (auto t = cache.load(F, x + 1, x + y)) return t->sum();
  const ValueTable t = sieve_range(F, x + 1, x + y, opts);
  cache.store(t);
  return t.sum();
}

void require_range_text(double x, double y) {
  if (const auto v = admissibility_violation(x, y); !v.empty())
    throw PreconditionError("y outside the admissible range x^(1/2) e^(-(log x)^(1/4)/2) <= y <= x e^(-(log x)^(1/4)): " + v);
}

Threshold default_threshold(std::uint64_t x, std::uint64_t y, std::optional<double> requested) {
  if (requested) return Threshold::real(*requested);
  const std::uint64_t lo = std::max(y, (x + y - 1) / y);
  const double t = static_cast<double>(y) * std::exp(std::pow(std::log(static_cast<double>(std::max<std::uint64_t>(x, 2))), 0.25));
  const auto T = static_cast<std::uint64_t>(std::floor(t));
  return Threshold::integer(std::clamp<std::uint64_t>(T, lo, std::max(lo, x)));
}

}  // namespace

CorollaryEntry resolve_entry(const EntryChoice& c) {
  std::string family = c.name;
  if (auto it = aliases().find(family); it != aliases().end()) family = it->second;
  return find_entry(family, c.k != 0 ? c.k : default_k(family));
}

int cmd_shortsum(const GlobalConfig& g, const ShortsumArgs& a, std::ostream& out) {
  const std::uint64_t x = parse_count(a.x), y = parse_count(a.y);
  if (y == 0) throw UsageError("--y must be at least 1");
  std::vector<std::string> methods;
  {
    std::stringstream ss(a.method);
    std::string m;
    while (std::getline(ss, m, ','))
      if (m == "sieve" || m == "hyperbola") methods.push_back(m);
      else throw UsageError("unknown method '" + m + "' (sieve, hyperbola)");
  }
  if (methods.empty()) throw UsageError("--method is empty");

  std::optional<CorollaryEntry> entry;
  FunctionSpec F = FunctionSpec::one(), f = FunctionSpec::one();
  if (!a.what.name.empty()) {
    entry = resolve_entry(a.what);
    F = entry->F;
    f = entry->f;
  } else if (!a.what.spec.empty()) {
    F = FunctionSpec::parse(a.what.spec);
    f = FunctionSpec::convolution(F, FunctionSpec::mobius());
  } else {
    throw UsageError("one of --function, --entry or --spec is required");
  }
  const double xd = static_cast<double>(x), yd = static_cast<double>(y);
  double main = NAN;
  ErrorEnvelope env{NAN, NAN, NAN, NAN, NAN, false};
  if (entry) {
    require_range_text(xd, yd);
    main = theorem1_main_term(entry->hypothesis, xd, yd);
    env = theorem1_envelope(entry->hypothesis, xd, yd, g.epsilon);
  }

  std::vector<std::pair<std::string, Value>> results;
  for (const auto& m : methods) {
    if (m == "sieve") {
      results.emplace_back(m, window_sum(g, F, x, y));
    } else {
      HyperbolaOptions ho;
      ho.compute = g.compute();
      results.emplace_back(m, short_hyperbola(f, FunctionSpec::one(), x, y, default_threshold(x, y, a.T), ho).total);
    }
  }
  for (std::size_t i = 1; i < results.size(); ++i)
    if (!values_agree(results[0].second, results[i].second, 1e-9))
      throw std::logic_error("methods disagree: " + results[0].second.to_string() + " vs " + results[i].second.to_string());

  if (g.format == Format::csv) {
    out << "x,y,method,exact,main,env1,env2,env3\n";
    for (const auto& [m, v] : results)
      out << x << ',' << y << ',' << m << ',' << csv_value(v) << ',' << csv_real(main) << ',' << csv_real(env.first())
          << ',' << csv_real(env.t2) << ',' << csv_real(env.t3) << '\n';
  } else {
    json j;
    j["x"] = x;
    j["y"] = y;
    j["function"] = F.canonical();
    if (entry) {
      j["entry"] = entry->id;
      j["main"] = main;
      j["envelope"] = {{"t1", env.t1}, {"t1_eps", env.t1_eps}, {"t2", env.t2}, {"t3", env.t3}, {"eps_form", env.eps_form}};
    }
    for (const auto& [m, v] : results) j["exact"][m] = json_value(v);
    out << j.dump() << '\n';
  }
  return 0;
}

int cmd_delta(const GlobalConfig& g, const DeltaArgs& a, std::ostream& out) {
  if (a.r < 2 || a.r > 4) throw UsageError("--r must be 2, 3 or 4");
  const std::uint64_t n = parse_count(a.n);
  if (n == 0) throw UsageError("--n must be at least 1");
  const auto d = delta_r(n, a.r, g.compute());
  std::optional<DyadicCheck> l5;
  std::uint64_t N = 0;
  if (a.lemma5_N) {
    N = parse_count(*a.lemma5_N);
    if (N == 0) throw UsageError("--check-lemma5 needs N >= 1");
    l5 = lemma5_check(n, a.r - 1, N, g.compute());
  }
  std::string w;
  for (std::size_t i = 0; i < d.witness.size(); ++i) w += (i ? ";" : "") + csv_real(d.witness[i]);
  if (g.format == Format::csv) {
    out << "n,r,delta,witness,window_lo,window_hi";
    if (l5) out << ",N,dyadic_lhs,dyadic_rhs,holds";
    out << '\n' << n << ',' << a.r << ',' << d.value << ',' << w << ',' << csv_real(std::exp(d.witness[0])) << ','
        << csv_real(std::exp(d.witness[0] + 1.0));
    if (l5) out << ',' << N << ',' << l5->lhs << ',' << csv_real(l5->rhs) << ',' << (l5->holds ? "true" : "false");
    out << '\n';
  } else {
    json j = {{"n", n}, {"r", a.r}, {"delta", d.value}, {"witness", d.witness},
              {"window", {std::exp(d.witness[0]), std::exp(d.witness[0] + 1.0)}}};
    if (l5) j["dyadic_check"] = {{"N", N}, {"r", a.r - 1}, {"lhs", l5->lhs}, {"rhs", l5->rhs}, {"holds", l5->holds}};
    out << j.dump() << '\n';
  }
  return 0;
}

int cmd_verify(const GlobalConfig& g, const VerifyArgs& a, std::ostream& out) {
  if (a.what.name.empty()) throw UsageError("--entry is required");
  const auto entry = resolve_entry(a.what);
  const auto xs = parse_count_list(a.xgrid);
  if (xs.empty()) throw UsageError("--xgrid is empty");
  if (!std::is_sorted(xs.begin(), xs.end()) || std::adjacent_find(xs.begin(), xs.end()) != xs.end())
    throw UsageError("--xgrid must be strictly ascending");
  YRule rule;
  std::vector<std::uint64_t> ys;
  if (a.y_rule == "geomean") rule = YRule::geomean;
  else if (a.y_rule == "endpoints") rule = YRule::endpoints;
  else if (a.y_rule == "list") {
    rule = YRule::explicit_list;
    ys = parse_count_list(a.ys);
    if (ys.empty()) throw UsageError("--y-rule list needs --y");
  } else throw UsageError("unknown --y-rule '" + a.y_rule + "' (geomean, endpoints, list)");

  const auto rep = run_theorem1_experiment(entry, xs, rule, ys, g.epsilon, g.compute(),
                                           [&](const FunctionSpec& F, std::uint64_t x, std::uint64_t y) {
                                             return window_sum(g, F, x, y);
                                           });
  if (g.format == Format::csv) {
    out << "x,y,exact,main,abs_err,env1,env2,env3,norm_err,admissible\n";
    for (const auto& r : rep.rows)
      out << r.x << ',' << r.y << ',' << csv_value(r.exact) << ',' << csv_real(r.main) << ',' << csv_real(r.abs_err) << ','
          << csv_real(r.envelope.first()) << ',' << csv_real(r.envelope.t2) << ',' << csv_real(r.envelope.t3) << ','
          << csv_real(r.norm_err) << ',' << (r.admissible ? "true" : "false") << '\n';
  } else {
    json rows = json::array();
    for (const auto& r : rep.rows)
      rows.push_back({{"x", r.x},
                      {"y", r.y},
                      {"exact", json_value(r.exact)},
                      {"main", r.main},
                      {"abs_err", r.abs_err},
                      {"env1", r.envelope.first()},
                      {"env2", r.envelope.t2},
                      {"env3", r.envelope.t3},
                      {"env1_plain", r.envelope.t1},
                      {"env1_eps", r.envelope.t1_eps},
                      {"norm_err", r.norm_err},
                      {"admissible", r.admissible},
                      {"violation", r.violation},
                      {"T", r.T},
                      {"N", r.N},
                      {"H", r.H}});
    out << json{{"entry", rep.entry.id}, {"epsilon", rep.epsilon}, {"rows", rows}}.dump() << '\n';
  }
  return 0;
}

namespace {

std::vector<Prop1Point> prop1_grid(const std::string& name, int m, const std::optional<std::vector<std::uint64_t>>& Hs) {
  std::vector<Prop1Point> pts{{100, 4, 4, m}};
  const std::vector<std::uint64_t> hs = Hs ? *Hs : std::vector<std::uint64_t>{4, 8, 16, 32, 64};
  std::vector<std::pair<double, std::uint64_t>> zn;
  if (name == "small") zn = {{1e4, 64}, {1e5, 256}, {1e6, 1024}};
  else if (name == "medium") zn = {{1e5, 256}, {1e6, 1024}, {1e7, 4096}, {1e8, 16384}};
  else throw UsageError("unknown --grid '" + name + "' (small, medium)");
  for (auto [z, N] : zn)
    for (auto H : hs)
      if (H >= 4 && H <= N) pts.push_back({z, N, H, m});
  return pts;
}

void write_fit(const GlobalConfig& g, const EnvelopeFit& fit, std::ostream& out) {
  if (g.format == Format::csv) {
    for (const auto& c : fit.coordinates) out << c << ',';
    out << "lhs,envelope,ratio";
    for (const auto& [name, _] : fit.aux) out << ',' << name;
    out << '\n';
    for (std::size_t i = 0; i < fit.size(); ++i) {
      for (double v : fit.grid[i]) out << csv_coord(v) << ',';
      out << csv_real(fit.lhs[i]) << ',' << csv_real(fit.envelope[i]) << ',' << csv_real(fit.ratio(i));
      for (const auto& [_, col] : fit.aux) out << ',' << csv_real(col[i]);
      out << '\n';
    }
    out << "fitted_constant," << csv_real(fit.fitted_constant) << '\n';
  } else {
    json rows = json::array();
    for (std::size_t i = 0; i < fit.size(); ++i) {
      json r;
      for (std::size_t c = 0; c < fit.coordinates.size(); ++c) r[fit.coordinates[c]] = fit.grid[i][c];
      r["lhs"] = fit.lhs[i];
      r["envelope"] = fit.envelope[i];
      r["ratio"] = fit.ratio(i);
      for (const auto& [name, col] : fit.aux) r[name] = col[i];
      rows.push_back(r);
    }
    out << json{{"envelope_id", fit.envelope_id}, {"rows", rows}, {"fitted_constant", fit.fitted_constant}}.dump() << '\n';
  }
}

}  // namespace

int cmd_envelopes(const GlobalConfig& g, const EnvelopesArgs& a, std::ostream& out) {
  std::optional<std::vector<std::uint64_t>> xs, Hs;
  if (a.xs) xs = parse_count_list(*a.xs);
  if (a.Hs) Hs = parse_count_list(*a.Hs);
  if ((xs && xs->empty()) || (Hs && Hs->empty())) throw UsageError("empty grid");
  const auto opts = g.compute();
  if (a.which == "prop1") {
    if (a.m < 1 || a.m > 8) throw UsageError("--m must lie in 1..8");
    const auto pts = prop1_grid(a.grid, a.m, Hs);
    write_fit(g, prop1_envelope_fit(pts, opts), out);
  } else if (a.which == "lemma4") {
    if (a.r < 2 || a.r > 4) throw UsageError("--r must be 2, 3 or 4");
    if (!xs) throw UsageError("--which lemma4 needs --x");
    write_fit(g, lemma4_envelope_fit(a.r, *xs, opts), out);
  } else if (a.which == "psi") {
    if (a.points == 0) throw UsageError("empty grid");
    const auto grid = open_unit_grid(a.points);
    const std::vector<std::uint64_t> hs = Hs ? *Hs : std::vector<std::uint64_t>{4, 16, 64};
    EnvelopeFit all;
    for (auto H : hs) {
      auto f = psi_truncation_error_profile(H, grid);
      if (all.envelope_id.empty()) {
        all = std::move(f);
        continue;
      }
      all.grid.insert(all.grid.end(), f.grid.begin(), f.grid.end());
      all.lhs.insert(all.lhs.end(), f.lhs.begin(), f.lhs.end());
      all.envelope.insert(all.envelope.end(), f.envelope.begin(), f.envelope.end());
      all.fitted_constant = std::max(all.fitted_constant, f.fitted_constant);
    }
    write_fit(g, all, out);
  } else if (a.which == "lemma2") {
    const FunctionSpec f = FunctionSpec::parse(a.spec);
    std::vector<SawtoothPoint> pts;
    const std::vector<std::uint64_t> xv = xs ? *xs : std::vector<std::uint64_t>{100'000, 1'000'000};
    for (auto x : xv)
      for (std::uint64_t y : {10, 30, 100})
        for (std::uint64_t N : {128, 512}) {
          if (N <= y || N > x) continue;
          pts.push_back({N, x, y, std::max<std::uint64_t>(1, 4 * (N / y))});
        }
    if (pts.empty()) throw UsageError("empty grid");
    write_fit(g, sawtooth_remainder_fit(f, pts, opts), out);
  } else {
    throw UsageError("unknown --which '" + a.which + "' (prop1, lemma4, psi, lemma2)");
  }
  return 0;
}

int cmd_selftest(const GlobalConfig& g, std::ostream& out) {
  int failed = 0;
  auto check = [&](const std::string& name, bool ok) {
    out << (ok ? "PASS " : "FAIL ") << name << '\n';
    if (!ok) ++failed;
  };
  const auto opts = g.compute();
  check("short sum of tau over (100, 110] is 56", short_sum_bruteforce(FunctionSpec::tau_m(2), 100, 10, opts).as_int64() == 56);
  check("hyperbola identity at x=100 y=10 T=10",
        short_hyperbola(FunctionSpec::one(), FunctionSpec::one(), 100, 10, Threshold::integer(10)).total.as_int64() == 56);
  check("delta_2(12) = 3", delta_r(12, 2, opts).value == 3);
  check("delta_3(1) = 1", delta_r(1, 3, opts).value == 1);
  check("divisor-proximity sum at z=100 N=4 H=4 is 3.125", std::abs(prop1_lhs(100, 4, 4, 1, opts) - 3.125) < 1e-12);
  const double ee = std::exp(std::exp(std::numbers::e));
  check("eps_2 at e^e^e", std::abs(eps_r(ee, 2) / (31 * std::sqrt(2 / std::numbers::e)) - 1) < 1e-9);
  check("sigma_F(one, 5, 100, 3) = 0.9369", std::abs(sigma_F(FunctionSpec::one(), 5, 100, 3, opts) - 0.9369) < 1e-4);

  std::mt19937_64 rng(g.seed);
  bool agree = true;
  for (int i = 0; i < 20; ++i) {
    const std::uint64_t x = 1000 + rng() % 200'000;
    const std::uint64_t y = 1 + rng() % 2000;
    const std::uint64_t t = std::max(y, (x + y - 1) / y) + rng() % 100;
    if (t > x) continue;
    const auto h = short_hyperbola(FunctionSpec::tau_m(2), FunctionSpec::one(), x, y, Threshold::integer(t));
    agree = agree && h.total == short_sum_bruteforce(FunctionSpec::tau_m(3), x, y, opts);
  }
  check("hyperbola identity on 20 seeded triples", agree);
  return failed == 0 ? 0 : 5;
}

}  // namespace hyplab::cli
