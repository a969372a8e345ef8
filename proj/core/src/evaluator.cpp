#include "hyplab/evaluator.hpp"

#include <array>
#include <cmath>
#include <limits>

#include "hyplab/checked.hpp"
#include "hyplab/errors.hpp"

namespace hyplab {

namespace {

constexpr std::size_t kMaxExponent = 64;

// Values of a prime-independent multiplicative function at p^e.
struct Profile {
  std::array<std::int64_t, kMaxExponent> i{};
  std::array<bool, kMaxExponent> ok{};  // i[e] is exact and fits 64 bits
  std::array<double, kMaxExponent> r{};
};

bool fits64(int128 v) {
  return v <= std::numeric_limits<std::int64_t>::max() &&
         v >= std::numeric_limits<std::int64_t>::min();
}

template <class Fn>
Profile from_formula(Fn&& fn) {
  Profile p;
  for (std::size_t e = 0; e < kMaxExponent; ++e) {
    const int128 v = fn(static_cast<int128>(e));
    p.i[e] = static_cast<std::int64_t>(v);
    p.ok[e] = true;
    p.r[e] = static_cast<double>(v);
  }
  return p;
}

Profile tau_m_profile(int m) {
  Profile p;
  int128 c = 1;
  bool ok = true;
  double cr = 1.0;
  for (std::size_t e = 0; e < kMaxExponent; ++e) {
    if (e > 0) {
      cr = cr * (m - 1 + static_cast<double>(e)) / static_cast<double>(e);
      if (ok) {
        int128 t;
        if (__builtin_mul_overflow(c, static_cast<int128>(m - 1 + e), &t)) {
          ok = false;
        } else {
          c = t / static_cast<int128>(e);
          ok = fits64(c);
        }
      }
    }
    p.ok[e] = ok;
    p.i[e] = ok ? static_cast<std::int64_t>(c) : 0;
    p.r[e] = ok ? static_cast<double>(c) : cr;
  }
  return p;
}

Profile profile_of(const FunctionSpec& s) {
  switch (s.kind()) {
    case FunctionKind::one:
      return from_formula([](int128) { return int128{1}; });
    case FunctionKind::identity_at_1:
      return from_formula([](int128 e) { return int128{e == 0 ? 1 : 0}; });
    case FunctionKind::mobius:
      return from_formula([](int128 e) { return int128{e == 0 ? 1 : (e == 1 ? -1 : 0)}; });
    case FunctionKind::mu_k: {
      const int k = s.param();
      return from_formula([k](int128 e) { return int128{e < k ? 1 : 0}; });
    }
    case FunctionKind::tau_m:
      return tau_m_profile(s.param());
    case FunctionKind::tau_paren_k: {
      const int k = s.param();
      return from_formula([k](int128 e) { return (e < k - 1 ? e : int128{k - 1}) + 1; });
    }
    case FunctionKind::two_pow_omega:
      return from_formula([](int128 e) { return int128{e == 0 ? 1 : 2}; });
    case FunctionKind::three_pow_omega:
      return from_formula([](int128 e) { return int128{e == 0 ? 1 : 3}; });
    case FunctionKind::tau_of_power: {
      const int j = s.param();
      return from_formula([j](int128 e) { return j * e + 1; });
    }
    case FunctionKind::dirichlet_inverse: {
      const Profile g = profile_of(s.left());
      Profile p;
      const double g0 = g.r[0];
      const bool integral = s.exact();  // then g(1) = +-1
      bool ok = integral;
      for (std::size_t e = 0; e < kMaxExponent; ++e) {
        double acc_r = 0.0;
        int128 acc_i = 0;
        for (std::size_t j = 1; j <= e; ++j) {
          acc_r += g.r[j] * p.r[e - j];
          if (ok) {
            int128 t;
            if (!g.ok[j] || !p.ok[e - j] ||
                __builtin_mul_overflow(static_cast<int128>(g.i[j]),
                                       static_cast<int128>(p.i[e - j]), &t) ||
                __builtin_add_overflow(acc_i, t, &acc_i))
              ok = false;
          }
        }
        if (e == 0) {
          p.r[0] = 1.0 / g0;
          p.i[0] = integral ? g.i[0] : 0;
          p.ok[0] = integral;
          continue;
        }
        p.r[e] = -acc_r / g0;
        const int128 v = -acc_i * (integral ? g.i[0] : 0);
        ok = ok && fits64(v);
        p.ok[e] = ok;
        p.i[e] = ok ? static_cast<std::int64_t>(v) : 0;
      }
      return p;
    }
    case FunctionKind::convolution:
    case FunctionKind::pointwise_product: {
      const bool conv = s.kind() == FunctionKind::convolution;
      const Profile a = profile_of(s.left());
      const Profile b = profile_of(s.right());
      Profile p;
      for (std::size_t e = 0; e < kMaxExponent; ++e) {
        double acc_r = 0.0;
        int128 acc_i = 0;
        bool ok = true;
        const std::size_t j0 = conv ? 0 : e;
        for (std::size_t j = j0; j <= e; ++j) {
          const std::size_t k = conv ? e - j : e;
          acc_r += a.r[j] * b.r[k];
          int128 t;
          if (!a.ok[j] || !b.ok[k] ||
              __builtin_mul_overflow(static_cast<int128>(a.i[j]), static_cast<int128>(b.i[k]),
                                     &t) ||
              __builtin_add_overflow(acc_i, t, &acc_i))
            ok = false;
        }
        p.r[e] = acc_r;
        p.ok[e] = ok && fits64(acc_i);
        p.i[e] = p.ok[e] ? static_cast<std::int64_t>(acc_i) : 0;
      }
      return p;
    }
    default:
      throw InvalidSpecError(s.canonical() + " is not exponent-determined");
  }
}

// Scalar arithmetic for the two evaluation paths.
inline std::int64_t mul(std::int64_t a, std::int64_t b) { return checked::mul(a, b); }
inline double mul(double a, double b) { return a * b; }
inline std::int64_t add(std::int64_t a, std::int64_t b) { return checked::add(a, b); }
inline double add(double a, double b) { return a + b; }

}  // namespace

enum class Op { profile, log_pow, conv, mul, inverse };

struct Evaluator::Node {
  Op op = Op::profile;
  int power = 0;
  Profile prof;
  double at_one = 1.0;   // inverse: g(1)
  std::int64_t at_one_int = 1;
  std::unique_ptr<Node> a;
  std::unique_ptr<Node> b;

  template <class T>
  T prof_at(std::uint32_t e) const;
};

template <>
std::int64_t Evaluator::Node::prof_at<std::int64_t>(std::uint32_t e) const {
  if (!prof.ok[e]) checked::overflow("evaluation at a prime power");
  return prof.i[e];
}

template <>
double Evaluator::Node::prof_at<double>(std::uint32_t e) const {
  return prof.r[e];
}

namespace {

using Node = Evaluator::Node;

std::unique_ptr<Node> compile(const FunctionSpec& s) {
  auto n = std::make_unique<Node>();
  if (s.exponent_only()) {
    n->op = Op::profile;
    n->prof = profile_of(s);
    return n;
  }
  switch (s.kind()) {
    case FunctionKind::log_pow:
      n->op = Op::log_pow;
      n->power = s.param();
      return n;
    case FunctionKind::lambda_k:
      return compile(FunctionSpec::convolution(FunctionSpec::mobius(),
                                               FunctionSpec::log_pow(s.param())));
    case FunctionKind::lambda_attached: {
      const FunctionSpec& g = s.left();
      return compile(FunctionSpec::convolution(
          FunctionSpec::pointwise_product(g, FunctionSpec::log_pow(1)),
          FunctionSpec::dirichlet_inverse(g)));
    }
    case FunctionKind::dirichlet_inverse:
      n->op = Op::inverse;
      n->at_one = s.left().value_at_one();
      n->at_one_int = static_cast<std::int64_t>(n->at_one);
      n->a = compile(s.left());
      return n;
    case FunctionKind::convolution:
    case FunctionKind::pointwise_product:
      n->op = s.kind() == FunctionKind::convolution ? Op::conv : Op::mul;
      n->a = compile(s.left());
      n->b = compile(s.right());
      return n;
    default:
      throw InvalidSpecError("cannot compile " + s.canonical());
  }
}

template <class T>
std::vector<T> lattice(const Node& n, const DivisorLattice& L);

template <class T>
std::vector<T> expand_profile(const Node& n, const DivisorLattice& L) {
  std::vector<T> v(L.size());
  v[0] = T(1);
  const Factorization& f = L.factorization();
  std::size_t block = 1;
  for (std::size_t i = 0; i < f.size(); ++i) {
    for (std::uint32_t a = 1; a <= f[i].exponent; ++a) {
      const T pa = n.prof_at<T>(a);
      const std::size_t off = a * block;
      for (std::size_t j = 0; j < block; ++j) v[off + j] = mul(v[j], pa);
    }
    block *= f[i].exponent + 1;
  }
  return v;
}

template <class T>
std::vector<T> log_lattice(const Node& n, const DivisorLattice& L) {
  if constexpr (std::is_same_v<T, std::int64_t>) {
    throw InvalidSpecError("log powers have no exact integer path");
  } else {
    std::vector<double> v(L.size());
    for (std::size_t i = 0; i < L.size(); ++i)
      v[i] = std::pow(std::log(static_cast<double>(L.divisor(i))), n.power);
    return v;
  }
}

template <class T>
std::vector<T> inverse_lattice(const Node& n, const DivisorLattice& L) {
  const std::vector<T> g = lattice<T>(*n.a, L);
  std::vector<T> inv(L.size());
  if constexpr (std::is_same_v<T, std::int64_t>) {
    // Exact path only exists for g(1) = +-1, where 1/g(1) = g(1).
    const std::int64_t g1 = n.at_one_int;
    inv[0] = g1;
    for (std::size_t d = 1; d < L.size(); ++d) {
      std::int64_t acc = 0;
      L.for_each_divisor_of(d, [&](std::size_t e, std::size_t q) {
        if (e != 0) acc = add(acc, mul(g[e], inv[q]));
      });
      inv[d] = mul(-g1, acc);
    }
  } else {
    const double scale = 1.0 / n.at_one;
    inv[0] = scale;
    for (std::size_t d = 1; d < L.size(); ++d) {
      double acc = 0.0;
      L.for_each_divisor_of(d, [&](std::size_t e, std::size_t q) {
        if (e != 0) acc += g[e] * inv[q];
      });
      inv[d] = -scale * acc;
    }
  }
  return inv;
}

template <class T>
std::vector<T> lattice(const Node& n, const DivisorLattice& L) {
  switch (n.op) {
    case Op::profile:
      return expand_profile<T>(n, L);
    case Op::log_pow:
      return log_lattice<T>(n, L);
    case Op::mul: {
      std::vector<T> a = lattice<T>(*n.a, L);
      const std::vector<T> b = lattice<T>(*n.b, L);
      for (std::size_t i = 0; i < a.size(); ++i) a[i] = mul(a[i], b[i]);
      return a;
    }
    case Op::conv: {
      const std::vector<T> a = lattice<T>(*n.a, L);
      const std::vector<T> b = lattice<T>(*n.b, L);
      std::vector<T> c(L.size());
      for (std::size_t d = 0; d < L.size(); ++d) {
        T acc = T(0);
        L.for_each_divisor_of(d, [&](std::size_t e, std::size_t q) {
          acc = add(acc, mul(a[e], b[q]));
        });
        c[d] = acc;
      }
      return c;
    }
    case Op::inverse:
      return inverse_lattice<T>(n, L);
  }
  return {};
}

template <class T>
T top_value(const Node& n, const Factorization& f) {
  switch (n.op) {
    case Op::profile: {
      T v = T(1);
      for (const PrimePower& pp : f.parts()) v = mul(v, n.prof_at<T>(pp.exponent));
      return v;
    }
    case Op::log_pow:
      if constexpr (std::is_same_v<T, std::int64_t>) {
        throw InvalidSpecError("log powers have no exact integer path");
      } else {
        return std::pow(std::log(static_cast<double>(f.n())), n.power);
      }
    case Op::mul:
      return mul(top_value<T>(*n.a, f), top_value<T>(*n.b, f));
    case Op::conv: {
      const DivisorLattice L(f);
      const std::vector<T> a = lattice<T>(*n.a, L);
      const std::vector<T> b = lattice<T>(*n.b, L);
      const std::size_t last = L.last();
      T acc = T(0);
      for (std::size_t i = 0; i <= last; ++i) acc = add(acc, mul(a[i], b[last - i]));
      return acc;
    }
    case Op::inverse: {
      const DivisorLattice L(f);
      return inverse_lattice<T>(n, L)[L.last()];
    }
  }
  return T(0);
}

}  // namespace

Evaluator::Evaluator(const FunctionSpec& spec) : spec_(spec), root_(compile(spec)) {}
Evaluator::~Evaluator() = default;
Evaluator::Evaluator(Evaluator&&) noexcept = default;
Evaluator& Evaluator::operator=(Evaluator&&) noexcept = default;

std::int64_t Evaluator::integer_at(const Factorization& f) const {
  if (!exact()) throw InvalidSpecError(spec_.canonical() + " is real-valued");
  return top_value<std::int64_t>(*root_, f);
}

double Evaluator::real_at(const Factorization& f) const {
  if (exact()) return static_cast<double>(integer_at(f));
  return top_value<double>(*root_, f);
}

std::vector<std::int64_t> Evaluator::integer_lattice(const DivisorLattice& L) const {
  if (!exact()) throw InvalidSpecError(spec_.canonical() + " is real-valued");
  return lattice<std::int64_t>(*root_, L);
}

std::vector<double> Evaluator::real_lattice(const DivisorLattice& L) const {
  return lattice<double>(*root_, L);
}

}  // namespace hyplab
