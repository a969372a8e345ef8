#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "hyplab/asymptotics.hpp"
#include "hyplab/function_spec.hpp"
#include "hyplab/value.hpp"

namespace hyplab {

enum class EntryFamily {
  tau_k,           // F = tau_k
  tau_sq,          // F = tau^2
  tau_cube,        // F = tau(n^3)
  tau_paren_k,     // F = tau_(k)
  tau_star_mu_k,   // F = tau * mu_k
  three_omega,     // F = 3^omega
  lambda_g,        // F = Lambda_g * (g * 1)
  log_k,           // F = Lambda_k * tau * log^k
};

struct CorollaryEntry {
  std::string id;    // e.g. "cor2_tau_k(4)"
  EntryFamily family;
  int k = 0;         // family parameter, 0 when there is none
  FunctionSpec F;
  FunctionSpec f;    // F = f * 1
  HypothesisData hypothesis;
  /// Leading coefficient of the short-sum main term, a_s / (s + 1).
  double main_constant = 0.0;
  /// Both readings of t1 are reported; this marks the entry where the two
  /// differ in how the eps is attached.
  bool dual_envelope = false;
};

CorollaryEntry cor2_tau_k(int k);
CorollaryEntry cor3_tau_sq();
CorollaryEntry cor3_tau_cube();
CorollaryEntry cor4_tau_paren_k(int k);
CorollaryEntry cor5_tau_star_mu_k(int k);
CorollaryEntry cor6_three_omega();
/// g = mu^2 is the only instance with known constants (a = 1/zeta(2), kappa 1/2, beta 0).
CorollaryEntry cor7_lambda_g(const FunctionSpec& g, double a, double kappa, double beta);
CorollaryEntry cor7_lambda_mu2();
CorollaryEntry cor8_log_k(int k);

/// One instance per family with default parameters.
std::vector<CorollaryEntry> default_registry();
/// Family names accepted by find_entry.
std::vector<std::string> registry_names();
/// Looks up a family by name ("cor2_tau_k", ...) with parameter k where it
/// applies. InvalidSpecError for unknown names.
CorollaryEntry find_entry(const std::string& name, int k);

enum class EulerConstant {
  three_omega_A,  // prod_p (1 - 1/p)^2 (1 + 2/p)
  tau_cube_CF,    // A / 6
};

struct EulerProduct {
  double partial;
  double tail_bound;  // |full - partial| <= tail_bound
};

/// Product over primes p <= P. Requires P >= 2.
EulerProduct euler_product(EulerConstant c, std::uint64_t P);

/// B = A (2 gamma - 1 + 6 sum_p (p-1) log p / (p^2 (p+2))), primes up to P.
double three_omega_B(std::uint64_t P);

enum class YRule { geomean, endpoints, explicit_list };

struct ExperimentRow {
  std::uint64_t x = 0;
  std::uint64_t y = 0;
  Value exact;
  double main = 0.0;
  double abs_err = 0.0;
  ErrorEnvelope envelope;
  double norm_err = 0.0;  // abs_err / t2
  bool admissible = false;
  std::string violation;  // why not admissible
  // proof-path metadata
  double T = 0.0;
  std::uint64_t N = 0;
  std::uint64_t H = 0;
};

struct ExperimentReport {
  CorollaryEntry entry;
  double epsilon = 0.1;
  std::vector<ExperimentRow> rows;  // sorted by x then y
};

/// Exact sum_{x < n <= x + y} F(n). Lets a caller route window sums through
/// its own storage; the default is short_sum_bruteforce.
using WindowSummer = std::function<Value(const FunctionSpec& F, std::uint64_t x, std::uint64_t y)>;

/// Rows for every x in x_grid. geomean takes floor of the geometric mean of
/// the admissible range; endpoints adds ceil(1.05 y_min) and floor(0.95 y_max);
/// explicit_list pairs every x with every y in `ys`.
ExperimentReport run_theorem1_experiment(const CorollaryEntry& entry, std::span<const std::uint64_t> x_grid,
                                         YRule rule, std::span<const std::uint64_t> ys = {},
                                         double epsilon = 0.1, const ComputeOptions& opts = {},
                                         const WindowSummer& window_sum = {});

}  // namespace hyplab
