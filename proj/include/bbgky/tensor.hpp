#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace bbgky {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Sorted list of distinct positive particle labels.
using LabelSet = std::vector<int>;

class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Validates and returns a canonical label set (throws DomainError on
// duplicates or non-positive labels; input need not be sorted).
LabelSet make_label_set(std::vector<int> labels);
LabelSet label_range(int first, int last);  // {first, ..., last}
LabelSet label_union(const LabelSet& a, const LabelSet& b);
LabelSet label_difference(const LabelSet& a, const LabelSet& b);
bool label_subset(const LabelSet& sub, const LabelSet& super);
bool labels_disjoint(const LabelSet& a, const LabelSet& b);

std::size_t ipow(std::size_t base, std::size_t exp);

// Square matrix acting on the tensor product of per-particle spaces of
// dimension d, one factor per label in ascending label order. The first
// label is the most significant digit of the row/column index.
class ParticleOperator {
 public:
  ParticleOperator() = default;
  ParticleOperator(int d, LabelSet labels, Matrix matrix);

  static ParticleOperator identity(int d, const LabelSet& labels);
  static ParticleOperator zero(int d, const LabelSet& labels);

  int d() const { return d_; }
  const LabelSet& labels() const { return labels_; }
  std::size_t particles() const { return labels_.size(); }
  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }
  const Matrix& matrix() const { return matrix_; }
  Matrix& matrix() { return matrix_; }

  // Same matrix attached to another label set of equal size.
  ParticleOperator relabeled(const LabelSet& labels) const;

  Complex trace() const { return matrix_.trace(); }
  ParticleOperator adjoint() const;

  ParticleOperator& operator+=(const ParticleOperator& other);
  ParticleOperator& operator-=(const ParticleOperator& other);
  ParticleOperator& operator*=(Complex scale);

 private:
  int d_ = 2;
  LabelSet labels_;
  Matrix matrix_;
};

ParticleOperator operator+(ParticleOperator a, const ParticleOperator& b);
ParticleOperator operator-(ParticleOperator a, const ParticleOperator& b);
ParticleOperator operator*(Complex scale, ParticleOperator a);
ParticleOperator operator*(double scale, ParticleOperator a);

// a ⊗ b on disjoint label sets, factors placed in canonical order.
ParticleOperator tensor_product(const ParticleOperator& a, const ParticleOperator& b);
ParticleOperator tensor_product(const std::vector<ParticleOperator>& factors);

// op ⊗ identity on target \ op.labels.
ParticleOperator embed(const ParticleOperator& op, const LabelSet& target);

// Traces out every factor not in keep.
ParticleOperator partial_trace(const ParticleOperator& op, const LabelSet& keep);

double trace_norm(const ParticleOperator& op);
double trace_norm(const Matrix& m);

// Largest absolute entry of a - b; labels must agree.
double max_abs_diff(const ParticleOperator& a, const ParticleOperator& b);
double hermiticity_error(const Matrix& m);
double min_eigenvalue(const ParticleOperator& op);

// e^{-i t H / hbar} through the Hermitian eigendecomposition of H.
ParticleOperator unitary_propagator(const ParticleOperator& h, double t, double hbar);

// U f U^dagger for U acting on the labels of f.
ParticleOperator conjugate(const Matrix& u, const ParticleOperator& f);

// Matrix of the factor permutation sending slot k to slot perm[k] on n
// particles of dimension d.
Matrix permutation_matrix(int d, const std::vector<int>& perm);

// (1/n!) sum_pi (sign)^{|pi|} p_pi on n particles.
Matrix symmetrizer(int d, std::size_t n, int sign);
ParticleOperator symmetrize(const ParticleOperator& op, int sign);

// p_pi f p_pi^{-1} averaged over all permutations of the factors.
ParticleOperator permutation_average(const ParticleOperator& op);
// max over transpositions of |p f p^{-1} - f|.
double permutation_symmetry_error(const ParticleOperator& op);

// Applies a local matrix acting on the factors named by local_labels
// (subset of op.labels, canonical order) from the left or the right.
// Cost is linear in the number of entries of op.
ParticleOperator apply_local_left(const Matrix& local, const LabelSet& local_labels,
                                  const ParticleOperator& op);
ParticleOperator apply_local_right(const ParticleOperator& op, const Matrix& local,
                                   const LabelSet& local_labels);

}  // namespace bbgky
