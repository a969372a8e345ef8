#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hyplab/function_spec.hpp"
#include "hyplab/parallel.hpp"

namespace hyplab {

/// Measured implied constant: lhs compared pointwise against an envelope
/// with unit constant, fitted_constant = max |lhs| / envelope.
struct EnvelopeFit {
  std::string envelope_id;
  std::vector<std::string> coordinates;  // names of the grid columns
  std::vector<std::vector<double>> grid;
  std::vector<double> lhs;
  std::vector<double> envelope;
  double fitted_constant = 0.0;
  /// Side columns reported with the fit but not used by it.
  std::vector<std::pair<std::string, std::vector<double>>> aux;

  std::size_t size() const noexcept { return lhs.size(); }
  double ratio(std::size_t i) const { return std::abs(lhs[i]) / envelope[i]; }
};

/// Builds a fit; every envelope value must be finite and > 0.
EnvelopeFit make_envelope_fit(std::string id, std::vector<std::string> coordinates,
                              std::vector<std::vector<double>> grid, std::vector<double> lhs,
                              std::vector<double> envelope);

/// -sum_{h=1}^{H} sin(2 pi h t) / (pi h), the truncated Fourier series of psi.
double truncated_psi(double t, std::uint64_t H);

/// |psi(t) - truncated_psi(t, H)| against min(1, 1/(H ||t||)). Every grid
/// point must be at least 1e-6 away from an integer.
EnvelopeFit psi_truncation_error_profile(std::uint64_t H, std::span<const double> t_grid);

/// count points (i + 1/2) / count, i < count: a grid in (0, 1) that avoids
/// the jump points.
std::vector<double> open_unit_grid(std::size_t count);

struct SawtoothSplit {
  double integral_term = 0.0;
  double remainder = 0.0;
  double sigma = 0.0;  // sigma_F(f, N, x, y), computed separately
};

/// Splits sigma_F into the truncated-series integral (closed form per
/// (h, n), both signs of h) and the truncation remainder
///   sum f(n) [(psi - P_H)((x+y)/n) - (psi - P_H)(x/n)].
/// The two parts are evaluated independently of each other and of sigma.
/// Requires y < N <= x and H >= 1.
SawtoothSplit lemma2_decomposition(const FunctionSpec& f, std::uint64_t N, std::uint64_t x,
                                 std::uint64_t y, std::uint64_t H, const ComputeOptions& opts = {});

struct SawtoothPoint {
  std::uint64_t N, x, y, H;
};

/// |remainder| against max over integers z in [x, x+y] of
/// sum_{N<n<=2N} |f(n)| min(1, 1/(H ||z/n||)).
EnvelopeFit sawtooth_remainder_fit(const FunctionSpec& f, std::span<const SawtoothPoint> points,
                                 const ComputeOptions& opts = {});

/// sum_{N<n<=2N} tau_m(n) min(1, 1/(H ||z/n||)), a zero distance counting
/// as 1. Integral z is reduced exactly. Requires 4 <= H <= N <= z.
double prop1_lhs(double z, std::uint64_t N, std::uint64_t H, int m, const ComputeOptions& opts = {});

struct Prop1Point {
  double z;
  std::uint64_t N, H;
  int m;
};

/// Fit against N H^{-1} log H (log N)^{m-1} (log z)^{eps_{m+1}(z)};
/// z^0.1 and z^0.4 reported as aux columns. Requires z > e^e.
EnvelopeFit prop1_envelope_fit(std::span<const Prop1Point> points, const ComputeOptions& opts = {});

/// sum_{n<=x} Delta_r(n)/n against (log x)^{1 + eps_r(x)}.
EnvelopeFit lemma4_envelope_fit(int r, std::span<const std::uint64_t> x_grid,
                                const ComputeOptions& opts = {});

}  // namespace hyplab
