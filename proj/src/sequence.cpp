#include "bbgky/sequence.hpp"

#include <algorithm>
#include <string>

namespace bbgky {

OperatorSequence::OperatorSequence(int d, int n_max) : d_(d), n_max_(n_max) {
  if (n_max < 0) throw DomainError("n_max must be nonnegative");
  for (int n = 1; n <= n_max; ++n) parts_.push_back(ParticleOperator::zero(d, label_range(1, n)));
}

const ParticleOperator& OperatorSequence::operator[](int n) const {
  if (n < 1 || n > n_max_)
    throw std::out_of_range("component " + std::to_string(n) + " outside 1.." +
                            std::to_string(n_max_));
  return parts_[n - 1];
}

ParticleOperator& OperatorSequence::operator[](int n) {
  if (n < 1 || n > n_max_)
    throw std::out_of_range("component " + std::to_string(n) + " outside 1.." +
                            std::to_string(n_max_));
  return parts_[n - 1];
}

void OperatorSequence::set(int n, const Matrix& m) {
  (*this)[n] = ParticleOperator(d_, label_range(1, n), m);
}

ParticleOperator OperatorSequence::on(const LabelSet& labels) const {
  const int n = static_cast<int>(labels.size());
  if (n == 0) throw DomainError("component 0 is a scalar");
  if (n > n_max_) return ParticleOperator::zero(d_, labels);
  return parts_[n - 1].relabeled(labels);
}

ParticleOperator OperatorSequence::product_on(const std::vector<LabelSet>& blocks) const {
  std::vector<ParticleOperator> factors;
  factors.reserve(blocks.size());
  for (const auto& b : blocks) factors.push_back(on(b));
  return tensor_product(factors);
}

double OperatorSequence::max_symmetry_error() const {
  double e = 0.0;
  for (const auto& p : parts_) e = std::max(e, permutation_symmetry_error(p));
  return e;
}

double OperatorSequence::max_hermiticity_error() const {
  double e = 0.0;
  for (const auto& p : parts_) e = std::max(e, hermiticity_error(p.matrix()));
  return e;
}

OperatorSequence& OperatorSequence::operator+=(const OperatorSequence& other) {
  if (other.n_max_ != n_max_ || other.d_ != d_) throw DomainError("sequence shapes differ");
  scalar_ += other.scalar_;
  for (int n = 1; n <= n_max_; ++n) parts_[n - 1] += other.parts_[n - 1];
  return *this;
}

OperatorSequence& OperatorSequence::operator-=(const OperatorSequence& other) {
  if (other.n_max_ != n_max_ || other.d_ != d_) throw DomainError("sequence shapes differ");
  scalar_ -= other.scalar_;
  for (int n = 1; n <= n_max_; ++n) parts_[n - 1] -= other.parts_[n - 1];
  return *this;
}

OperatorSequence& OperatorSequence::operator*=(Complex s) {
  scalar_ *= s;
  for (auto& p : parts_) p *= s;
  return *this;
}

OperatorSequence operator+(OperatorSequence a, const OperatorSequence& b) { return a += b; }
OperatorSequence operator-(OperatorSequence a, const OperatorSequence& b) { return a -= b; }

double max_abs_diff(const OperatorSequence& a, const OperatorSequence& b) {
  if (a.n_max() != b.n_max()) throw DomainError("sequence shapes differ");
  double e = std::abs(a.scalar() - b.scalar());
  for (int n = 1; n <= a.n_max(); ++n) e = std::max(e, max_abs_diff(a[n], b[n]));
  return e;
}

OperatorSequence chaos_sequence(const ParticleOperator& f1, int n_max) {
  OperatorSequence s(f1.d(), n_max);
  if (n_max >= 1) s.set(1, f1.matrix());
  return s;
}

}  // namespace bbgky
