#pragma once

#include <vector>

#include "bbgky/tensor.hpp"

namespace bbgky {

// Components f_1..f_{n_max} on labels (1,...,n) plus a complex scalar f_0.
// Components above n_max are zero.
class OperatorSequence {
 public:
  OperatorSequence() = default;
  OperatorSequence(int d, int n_max);

  int d() const { return d_; }
  int n_max() const { return n_max_; }

  Complex scalar() const { return scalar_; }
  void set_scalar(Complex v) { scalar_ = v; }

  // Component n on labels (1..n); n in 1..n_max.
  const ParticleOperator& operator[](int n) const;
  ParticleOperator& operator[](int n);
  void set(int n, const Matrix& m);

  // Component n placed on the given labels (zero when n > n_max).
  ParticleOperator on(const LabelSet& labels) const;

  // Tensor product of components over disjoint blocks, on their union.
  ParticleOperator product_on(const std::vector<LabelSet>& blocks) const;

  double max_symmetry_error() const;
  double max_hermiticity_error() const;

  OperatorSequence& operator+=(const OperatorSequence& other);
  OperatorSequence& operator-=(const OperatorSequence& other);
  OperatorSequence& operator*=(Complex s);

 private:
  int d_ = 2;
  int n_max_ = 0;
  Complex scalar_{0.0, 0.0};
  std::vector<ParticleOperator> parts_;
};

OperatorSequence operator+(OperatorSequence a, const OperatorSequence& b);
OperatorSequence operator-(OperatorSequence a, const OperatorSequence& b);

// Largest component-wise entry difference, scalar included.
double max_abs_diff(const OperatorSequence& a, const OperatorSequence& b);

// Sequence with only the one-particle component set.
OperatorSequence chaos_sequence(const ParticleOperator& f1, int n_max);

}  // namespace bbgky
