#include "hyplab/asymptotics.hpp"

#include <cmath>
#include <numbers>

#include "hyplab/arith.hpp"
#include "hyplab/errors.hpp"

namespace hyplab {

namespace {

const double kEe = std::exp(std::numbers::e);

void require_large(const char* op, double x) {
  if (!(x > kEe)) throw DomainError(std::string(op) + ": x > e^e required");
}

std::string fmt(double v) { return format_double(v); }

}  // namespace

double eps_r(double x, int r) {
  require_large("eps_r", x);
  if (r < 2) throw PreconditionError("eps_r: r >= 2 violated");
  const double ll = std::log(std::log(x));
  const double lll = std::log(ll);
  return std::sqrt(r * lll / ll) * (r - 1 + 30.0 / lll);
}

void HypothesisData::validate() const {
  if (s < 0) throw InvalidSpecError("hypothesis: s >= 0 violated");
  if (m < 1) throw InvalidSpecError("hypothesis: m >= 1 violated");
  if (!(kappa >= 0.0 && kappa < 1.0)) throw InvalidSpecError("hypothesis: kappa in [0, 1) violated");
  if (!(beta >= 0.0)) throw InvalidSpecError("hypothesis: beta >= 0 violated");
  if (!(delta >= 0.0)) throw InvalidSpecError("hypothesis: delta >= 0 violated");
  if (!(A > 0.0)) throw InvalidSpecError("hypothesis: A > 0 violated");
  if (a.size() != static_cast<std::size_t>(s) + 1) throw InvalidSpecError("hypothesis: need coefficients a_0..a_s");
  if (!a.back() || *a.back() == std::complex<double>(0.0)) throw InvalidSpecError("hypothesis: a_s must be nonzero");
}

std::complex<double> HypothesisData::leading() const {
  validate();
  return *a.back();
}

double theorem1_main_term(const HypothesisData& h, double x, double y) {
  require_large("theorem1_main_term", x);
  if (!(y >= 0.0)) throw DomainError("theorem1_main_term: y >= 0 required");
  if (y == 0.0) return 0.0;
  return y * h.leading().real() * std::pow(std::log(x), h.s + 1) / (h.s + 1);
}

AdmissibleRange admissible_y_range(double x) {
  require_large("admissible_y_range", x);
  const double q = std::pow(std::log(x), 0.25);
  return {std::sqrt(x) * std::exp(-q / 2.0), x * std::exp(-q)};
}

std::string admissibility_violation(double x, double y) {
  if (!(x > kEe)) return "x > e^e violated";
  const auto r = admissible_y_range(x);
  if (y < r.y_min) return "y >= x^(1/2) e^(-(log x)^(1/4)/2) = " + fmt(r.y_min) + " violated";
  if (y > r.y_max) return "y <= x e^(-(log x)^(1/4)) = " + fmt(r.y_max) + " violated";
  return {};
}

ErrorEnvelope theorem1_envelope(const HypothesisData& h, double x, double y, double epsilon) {
  h.validate();
  if (!(epsilon > 0.0 && epsilon <= 0.5)) throw PreconditionError("theorem1_envelope: epsilon in (0, 1/2] violated");
  if (const auto v = admissibility_violation(x, y); !v.empty())
    throw PreconditionError("theorem1_envelope: admissible range " + v);
  const double L = std::log(x), q = std::pow(L, 0.25);
  ErrorEnvelope e;
  e.t1 = x * std::pow(y, h.kappa - 1.0) * std::exp((h.kappa - 1.0) * q) * std::pow(L, h.beta);
  const double ke = h.kappa - 1.0 + epsilon;
  e.t1_eps = x * std::pow(y, ke) * std::exp(ke * q);
  e.t2_exponent = std::max<double>(h.s, h.delta + h.m - 0.5 + eps_r(x, h.m + 1));
  e.t2 = y * std::pow(L, e.t2_exponent);
  e.t3 = std::pow(x, epsilon);
  e.eps_form = h.kappa_plus_eps;
  return e;
}

CrudeEnvelope remark_envelope(const HypothesisData& h, double x, double y, double epsilon) {
  h.validate();
  if (!(epsilon > 0.0 && epsilon <= 0.5)) throw PreconditionError("remark_envelope: epsilon in (0, 1/2] violated");
  if (!(x > 1.0)) throw DomainError("remark_envelope: x > 1 required");
  if (y < std::sqrt(x)) throw PreconditionError("remark_envelope: y >= x^(1/2) violated");
  if (y > x) throw PreconditionError("remark_envelope: y <= x violated");
  const double L = std::log(x);
  return {x * std::pow(y, h.kappa - 1.0) * std::pow(L, h.beta),
          y * std::pow(L, std::max<double>(h.s, h.delta + h.m - 1.0)), std::pow(x, epsilon)};
}

double Residual::ratio() const { return std::abs(residual) / envelope; }

Residual eq5_S1(const FunctionSpec& f, const HypothesisData& h, double T, const ComputeOptions& opts) {
  if (!(T >= 2.0)) throw PreconditionError("eq5_S1: T >= 2 violated");
  if (T > static_cast<double>(kMaxArgument)) throw PreconditionError("eq5_S1: T exceeds 2^63");
  const auto D = static_cast<std::uint64_t>(std::floor(T));
  if (D > opts.segment_cap) throw ResourceError("eq5_S1: floor(T) exceeds the segment cap");
  const ValueTable t = sieve_range(f, 1, D, opts);
  OrderedSum s;
  for (std::uint64_t d = 1; d <= D; ++d) s.add(t.value_of(d).to_double() / static_cast<double>(d));
  Residual r;
  r.value = s.total();
  const double lt = std::log(T);
  r.prediction = h.leading().real() * std::pow(lt, h.s + 1) / (h.s + 1);
  r.residual = r.value - r.prediction;
  r.envelope = std::pow(lt, h.s);
  return r;
}

Residual eq6_S3(const FunctionSpec& f, const HypothesisData& h, std::uint64_t x, std::uint64_t y,
                const Threshold& T, const HyperbolaOptions& opts) {
  const auto dec = short_hyperbola(f, FunctionSpec::one(), x, y, T, opts);
  Residual r;
  r.value = dec.term_k.to_double();
  const double L = std::log(static_cast<double>(x)), lt = std::log(T.to_double());
  const double as = h.leading().real();
  r.prediction = static_cast<double>(y) * as / (h.s + 1) * (std::pow(L, h.s + 1) - std::pow(lt, h.s + 1));
  r.residual = r.value - r.prediction;
  r.envelope = static_cast<double>(y) * std::pow(L, h.s) +
               static_cast<double>(x) * std::pow(T.to_double(), h.kappa - 1.0) * std::pow(L, h.beta);
  return r;
}

Residual log_power_sum_check(double x, double z, int j) {
  if (!(z >= 1.0)) throw PreconditionError("log_power_sum_check: z >= 1 violated");
  if (!(z <= x)) throw PreconditionError("log_power_sum_check: z <= x violated");
  if (j < 0 || j > 6) throw PreconditionError("log_power_sum_check: j in 0..6 violated");
  if (z > 4e9) throw ResourceError("log_power_sum_check: z above 4e9");
  const auto K = static_cast<std::uint64_t>(std::floor(z));
  const double lx = std::log(x);
  OrderedSum s;
  for (std::uint64_t k = 1; k <= K; ++k) {
    const double kd = static_cast<double>(k);
    s.add(std::pow(lx - std::log(kd), j) / kd);
  }
  Residual r;
  r.value = s.total();
  r.prediction = (std::pow(lx, j + 1) - std::pow(std::log(x / z), j + 1)) / (j + 1);
  r.residual = r.value - r.prediction;
  r.envelope = std::pow(lx, j);
  return r;
}

double zeta(int k) {
  if (k < 2) throw DomainError("zeta: k >= 2 required");
  if (k == 2) return std::numbers::pi * std::numbers::pi / 6.0;
  // direct sum to M plus the Euler-Maclaurin tail
  constexpr int M = 1000;
  long double s = 0;
  for (int n = M; n >= 1; --n) s += std::pow(static_cast<long double>(n), -k);
  const long double m = M;
  s += std::pow(m, 1 - k) / (k - 1) - std::pow(m, -k) / 2 + k * std::pow(m, -k - 1) / 12;
  return static_cast<double>(s);
}

}  // namespace hyplab
