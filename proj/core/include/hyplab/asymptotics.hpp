#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hyplab/function_spec.hpp"
#include "hyplab/hyperbola.hpp"
#include "hyplab/parallel.hpp"

namespace hyplab {

/// sqrt(r lll(x) / ll(x)) (r - 1 + 30 / lll(x)) with ll = log log, lll = log log log.
/// DomainError unless x > e^e.
double eps_r(double x, int r);

/// Long-sum data of f: sum_{n<=z} f(n) = z P_s(log z) + O(z^kappa (log ez)^beta),
/// |f(n)| <= A tau_m(n) (log n)^delta.
struct HypothesisData {
  int s = 0;
  int m = 1;
  double kappa = 0.0;
  double beta = 0.0;
  double delta = 0.0;
  double A = 1.0;
  /// a_0 .. a_s; lower coefficients may be unknown.
  std::vector<std::optional<std::complex<double>>> a;
  /// The long-sum error is z^{kappa + eps} rather than z^kappa (log z)^beta.
  bool kappa_plus_eps = false;

  /// Throws InvalidSpecError when an invariant fails.
  void validate() const;
  std::complex<double> leading() const;
};

/// y Re(a_s) (log x)^{s+1} / (s+1). Requires x > e^e and y >= 0.
double theorem1_main_term(const HypothesisData& h, double x, double y);

struct AdmissibleRange {
  double y_min;
  double y_max;
};

/// [x^{1/2} e^{-(log x)^{1/4}/2}, x e^{-(log x)^{1/4}}]. DomainError unless x > e^e.
AdmissibleRange admissible_y_range(double x);

/// Empty when y is admissible for x, else the violated bound in words.
std::string admissibility_violation(double x, double y);

struct ErrorEnvelope {
  double t1 = 0.0;      // x y^{k-1} e^{(k-1) L^{1/4}} L^beta
  double t1_eps = 0.0;  // x y^{k-1+eps} e^{(k-1+eps) L^{1/4}}
  double t2 = 0.0;      // y L^{t2_exponent}
  double t3 = 0.0;      // x^eps
  double t2_exponent = 0.0;
  bool eps_form = false;  // t1_eps is the one that applies
  double first() const { return eps_form ? t1_eps : t1; }
  double total() const { return first() + t2 + t3; }
};

/// Unit-constant error terms. PreconditionError naming the bound when y is
/// outside the admissible range; epsilon must lie in (0, 1/2].
ErrorEnvelope theorem1_envelope(const HypothesisData& h, double x, double y, double epsilon);

struct CrudeEnvelope {
  double t1, t2, t3;
  double total() const { return t1 + t2 + t3; }
};

/// x y^{k-1} L^beta + y L^{max(s, delta+m-1)} + x^eps, valid for x^{1/2} <= y <= x.
CrudeEnvelope remark_envelope(const HypothesisData& h, double x, double y, double epsilon);

struct Residual {
  double value = 0.0;
  double prediction = 0.0;
  double residual = 0.0;
  double envelope = 0.0;
  double ratio() const;  // |residual| / envelope
};

/// sum_{d<=T} f(d)/d against a_s (log T)^{s+1}/(s+1), envelope (log T)^s.
/// Requires T >= 2.
Residual eq5_S1(const FunctionSpec& f, const HypothesisData& h, double T, const ComputeOptions& opts = {});

/// sum_{k<=x/T} sum_{x/k<d<=(x+y)/k} f(d) against
/// y a_s ((log x)^{s+1} - (log T)^{s+1})/(s+1), envelope y L^s + x T^{k-1} L^beta.
Residual eq6_S3(const FunctionSpec& f, const HypothesisData& h, std::uint64_t x, std::uint64_t y,
                const Threshold& T, const HyperbolaOptions& opts = {});

/// sum_{k<=z} (1/k) log(x/k)^j against ((log x)^{j+1} - log(x/z)^{j+1})/(j+1),
/// envelope (log x)^j. Requires 1 <= z <= x and 0 <= j <= 6.
Residual log_power_sum_check(double x, double z, int j);

/// Riemann zeta at integer k >= 2.
double zeta(int k);

}  // namespace hyplab
