#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "hyplab/factorization.hpp"
#include "hyplab/function_spec.hpp"
#include "hyplab/value.hpp"

namespace hyplab {

/// A FunctionSpec compiled for repeated evaluation from factorizations.
///
/// Prime-independent multiplicative specs are reduced to a table of values
/// at p^e, e < 64. Everything else is evaluated on the divisor lattice of n,
/// with lambda_k rewritten as mu * log^k and Lambda_g as (g log) * g^{*-1}.
/// Thread-safe after construction.
class Evaluator {
 public:
  explicit Evaluator(const FunctionSpec& spec);
  ~Evaluator();
  Evaluator(Evaluator&&) noexcept;
  Evaluator& operator=(Evaluator&&) noexcept;

  const FunctionSpec& spec() const noexcept { return spec_; }
  bool exact() const noexcept { return spec_.exact(); }

  /// Exact value. Throws ArithmeticOverflow if it does not fit in 64 bits.
  /// Precondition: exact().
  std::int64_t integer_at(const Factorization& f) const;

  double real_at(const Factorization& f) const;

  Value at(const Factorization& f) const {
    return exact() ? Value::exact(integer_at(f)) : Value::real(real_at(f));
  }

  /// Values at every divisor of f.n(), indexed as in DivisorLattice.
  std::vector<std::int64_t> integer_lattice(const DivisorLattice& lattice) const;
  std::vector<double> real_lattice(const DivisorLattice& lattice) const;

  struct Node;

 private:
  FunctionSpec spec_;
  std::unique_ptr<Node> root_;
};

}  // namespace hyplab
