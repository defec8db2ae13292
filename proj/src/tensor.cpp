#include "bbgky/tensor.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace bbgky {

namespace {

std::string describe(const LabelSet& labels) {
  std::string out = "{";
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(labels[i]);
  }
  return out + "}";
}

std::vector<std::size_t> positions_of(const LabelSet& full, const LabelSet& sub) {
  std::vector<std::size_t> pos;
  pos.reserve(sub.size());
  for (int l : sub) {
    auto it = std::lower_bound(full.begin(), full.end(), l);
    if (it == full.end() || *it != l)
      throw DomainError("label " + std::to_string(l) + " not contained in " + describe(full));
    pos.push_back(static_cast<std::size_t>(it - full.begin()));
  }
  return pos;
}

// For each full index, the index restricted to the factors in sub and the
// index restricted to the remaining factors.
struct IndexSplit {
  std::vector<std::size_t> sub;
  std::vector<std::size_t> rest;
};

IndexSplit split_indices(int d, const LabelSet& full, const LabelSet& sub) {
  const std::size_t m = full.size();
  const std::size_t dim = ipow(d, m);
  std::vector<char> in_sub(m, 0);
  for (std::size_t p : positions_of(full, sub)) in_sub[p] = 1;

  IndexSplit s;
  s.sub.resize(dim);
  s.rest.resize(dim);
  for (std::size_t r = 0; r < dim; ++r) {
    std::size_t a = 0, b = 0, rem = r;
    std::size_t stride = dim;
    for (std::size_t p = 0; p < m; ++p) {
      stride /= d;
      const std::size_t digit = rem / stride;
      rem %= stride;
      if (in_sub[p])
        a = a * d + digit;
      else
        b = b * d + digit;
    }
    s.sub[r] = a;
    s.rest[r] = b;
  }
  return s;
}

// Offsets of the local factors and of the complementary factors inside a
// full index, used to address op entries slot by slot.
struct SlotOffsets {
  std::vector<std::size_t> local;
  std::vector<std::size_t> base;
};

SlotOffsets slot_offsets(int d, const LabelSet& full, const LabelSet& local_labels) {
  const std::size_t m = full.size();
  std::vector<std::size_t> stride(m);
  std::size_t s = 1;
  for (std::size_t p = m; p-- > 0;) {
    stride[p] = s;
    s *= d;
  }
  std::vector<std::size_t> loc_pos = positions_of(full, local_labels);
  std::vector<std::size_t> rest_pos;
  for (std::size_t p = 0; p < m; ++p)
    if (std::find(loc_pos.begin(), loc_pos.end(), p) == loc_pos.end()) rest_pos.push_back(p);

  auto offsets = [&](const std::vector<std::size_t>& pos) {
    const std::size_t n = ipow(d, pos.size());
    std::vector<std::size_t> out(n);
    for (std::size_t q = 0; q < n; ++q) {
      std::size_t rem = q, off = 0;
      for (std::size_t j = pos.size(); j-- > 0;) {
        off += (rem % d) * stride[pos[j]];
        rem /= d;
      }
      out[q] = off;
    }
    return out;
  };
  return {offsets(loc_pos), offsets(rest_pos)};
}

int permutation_sign(const std::vector<int>& perm) {
  int inversions = 0;
  for (std::size_t i = 0; i < perm.size(); ++i)
    for (std::size_t j = i + 1; j < perm.size(); ++j)
      if (perm[i] > perm[j]) ++inversions;
  return (inversions % 2) ? -1 : 1;
}

void require_same_shape(const ParticleOperator& a, const ParticleOperator& b) {
  if (a.labels() != b.labels() || a.d() != b.d())
    throw DomainError("operator labels differ: " + describe(a.labels()) + " vs " +
                      describe(b.labels()));
}

}  // namespace

std::size_t ipow(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  while (exp--) r *= base;
  return r;
}

LabelSet make_label_set(std::vector<int> labels) {
  std::sort(labels.begin(), labels.end());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] <= 0) throw DomainError("labels must be positive integers");
    if (i && labels[i] == labels[i - 1])
      throw DomainError("duplicate label " + std::to_string(labels[i]));
  }
  return labels;
}

LabelSet label_range(int first, int last) {
  LabelSet out;
  for (int l = first; l <= last; ++l) out.push_back(l);
  return out;
}

LabelSet label_union(const LabelSet& a, const LabelSet& b) {
  LabelSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

LabelSet label_difference(const LabelSet& a, const LabelSet& b) {
  LabelSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool label_subset(const LabelSet& sub, const LabelSet& super) {
  return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
}

bool labels_disjoint(const LabelSet& a, const LabelSet& b) {
  LabelSet common;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
  return common.empty();
}

ParticleOperator::ParticleOperator(int d, LabelSet labels, Matrix matrix)
    : d_(d), labels_(std::move(labels)), matrix_(std::move(matrix)) {
  if (d_ < 1) throw DomainError("per-particle dimension must be positive");
  if (!std::is_sorted(labels_.begin(), labels_.end()) ||
      std::adjacent_find(labels_.begin(), labels_.end()) != labels_.end())
    throw DomainError("labels must be strictly increasing: " + describe(labels_));
  const auto dim = static_cast<Eigen::Index>(ipow(d_, labels_.size()));
  if (matrix_.rows() != dim || matrix_.cols() != dim)
    throw DomainError("matrix dimension does not match d^|labels| for " + describe(labels_));
}

ParticleOperator ParticleOperator::identity(int d, const LabelSet& labels) {
  const auto dim = static_cast<Eigen::Index>(ipow(d, labels.size()));
  return ParticleOperator(d, labels, Matrix::Identity(dim, dim));
}

ParticleOperator ParticleOperator::zero(int d, const LabelSet& labels) {
  const auto dim = static_cast<Eigen::Index>(ipow(d, labels.size()));
  return ParticleOperator(d, labels, Matrix::Zero(dim, dim));
}

ParticleOperator ParticleOperator::relabeled(const LabelSet& labels) const {
  if (labels.size() != labels_.size())
    throw DomainError("relabeling must preserve the particle count");
  return ParticleOperator(d_, labels, matrix_);
}

ParticleOperator ParticleOperator::adjoint() const {
  return ParticleOperator(d_, labels_, matrix_.adjoint());
}

ParticleOperator& ParticleOperator::operator+=(const ParticleOperator& other) {
  require_same_shape(*this, other);
  matrix_ += other.matrix_;
  return *this;
}

ParticleOperator& ParticleOperator::operator-=(const ParticleOperator& other) {
  require_same_shape(*this, other);
  matrix_ -= other.matrix_;
  return *this;
}

ParticleOperator& ParticleOperator::operator*=(Complex scale) {
  matrix_ *= scale;
  return *this;
}

ParticleOperator operator+(ParticleOperator a, const ParticleOperator& b) { return a += b; }
ParticleOperator operator-(ParticleOperator a, const ParticleOperator& b) { return a -= b; }
ParticleOperator operator*(Complex scale, ParticleOperator a) { return a *= scale; }
ParticleOperator operator*(double scale, ParticleOperator a) { return a *= Complex(scale, 0.0); }

ParticleOperator tensor_product(const ParticleOperator& a, const ParticleOperator& b) {
  if (a.d() != b.d()) throw DomainError("tensor factors have different dimensions");
  if (!labels_disjoint(a.labels(), b.labels()))
    throw DomainError("tensor factors share labels: " + describe(a.labels()) + " and " +
                      describe(b.labels()));
  if (a.labels().empty()) return a.matrix()(0, 0) * b;
  if (b.labels().empty()) return b.matrix()(0, 0) * a;

  const LabelSet full = label_union(a.labels(), b.labels());
  const IndexSplit s = split_indices(a.d(), full, a.labels());
  const std::size_t dim = s.sub.size();
  Matrix out(dim, dim);
  const Matrix& ma = a.matrix();
  const Matrix& mb = b.matrix();
  for (std::size_t c = 0; c < dim; ++c)
    for (std::size_t r = 0; r < dim; ++r)
      out(r, c) = ma(s.sub[r], s.sub[c]) * mb(s.rest[r], s.rest[c]);
  return ParticleOperator(a.d(), full, std::move(out));
}

ParticleOperator tensor_product(const std::vector<ParticleOperator>& factors) {
  if (factors.empty()) throw DomainError("empty tensor product");
  ParticleOperator out = factors.front();
  for (std::size_t i = 1; i < factors.size(); ++i) out = tensor_product(out, factors[i]);
  return out;
}

ParticleOperator embed(const ParticleOperator& op, const LabelSet& target) {
  if (!label_subset(op.labels(), target))
    throw DomainError("cannot embed " + describe(op.labels()) + " into " + describe(target));
  if (op.labels().size() == target.size()) return op;

  const IndexSplit s = split_indices(op.d(), target, op.labels());
  const std::size_t dim = s.sub.size();
  Matrix out = Matrix::Zero(dim, dim);
  const Matrix& m = op.matrix();
  for (std::size_t c = 0; c < dim; ++c)
    for (std::size_t r = 0; r < dim; ++r)
      if (s.rest[r] == s.rest[c]) out(r, c) = m(s.sub[r], s.sub[c]);
  return ParticleOperator(op.d(), target, std::move(out));
}

ParticleOperator partial_trace(const ParticleOperator& op, const LabelSet& keep) {
  if (!label_subset(keep, op.labels()))
    throw DomainError("kept labels " + describe(keep) + " not contained in " +
                      describe(op.labels()));
  if (keep.size() == op.labels().size()) return op;

  const IndexSplit s = split_indices(op.d(), op.labels(), keep);
  const std::size_t kdim = ipow(op.d(), keep.size());
  const std::size_t dim = s.sub.size();
  Matrix out = Matrix::Zero(kdim, kdim);
  const Matrix& m = op.matrix();
  for (std::size_t c = 0; c < dim; ++c)
    for (std::size_t r = 0; r < dim; ++r)
      if (s.rest[r] == s.rest[c]) out(s.sub[r], s.sub[c]) += m(r, c);
  return ParticleOperator(op.d(), keep, std::move(out));
}

double trace_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  if (m.rows() <= 16) {
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues().sum();
  }
  Eigen::BDCSVD<Matrix> svd(m);
  return svd.singularValues().sum();
}

double trace_norm(const ParticleOperator& op) { return trace_norm(op.matrix()); }

double max_abs_diff(const ParticleOperator& a, const ParticleOperator& b) {
  require_same_shape(a, b);
  return (a.matrix() - b.matrix()).cwiseAbs().maxCoeff();
}

double hermiticity_error(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double min_eigenvalue(const ParticleOperator& op) {
  const Matrix h = 0.5 * (op.matrix() + op.matrix().adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

ParticleOperator unitary_propagator(const ParticleOperator& h, double t, double hbar) {
  if (!(hbar > 0.0)) throw PreconditionError("hbar must be positive");
  const double scale = std::max(1.0, h.matrix().cwiseAbs().maxCoeff());
  if (hermiticity_error(h.matrix()) > 1e-10 * scale)
    throw PreconditionError("propagator requires a Hermitian generator");
  Eigen::SelfAdjointEigenSolver<Matrix> es(h.matrix());
  const Eigen::VectorXd& e = es.eigenvalues();
  Vector phases(e.size());
  for (Eigen::Index k = 0; k < e.size(); ++k)
    phases(k) = std::exp(Complex(0.0, -e(k) * t / hbar));
  const Matrix& v = es.eigenvectors();
  return ParticleOperator(h.d(), h.labels(), v * phases.asDiagonal() * v.adjoint());
}

ParticleOperator conjugate(const Matrix& u, const ParticleOperator& f) {
  if (u.rows() != static_cast<Eigen::Index>(f.dim()))
    throw DomainError("conjugating unitary has the wrong dimension");
  return ParticleOperator(f.d(), f.labels(), u * f.matrix() * u.adjoint());
}

Matrix permutation_matrix(int d, const std::vector<int>& perm) {
  const std::size_t n = perm.size();
  const std::size_t dim = ipow(d, n);
  Matrix p = Matrix::Zero(dim, dim);
  std::vector<std::size_t> digits(n), moved(n);
  for (std::size_t x = 0; x < dim; ++x) {
    std::size_t rem = x;
    for (std::size_t k = n; k-- > 0;) {
      digits[k] = rem % d;
      rem /= d;
    }
    for (std::size_t k = 0; k < n; ++k) moved[perm[k]] = digits[k];
    std::size_t y = 0;
    for (std::size_t k = 0; k < n; ++k) y = y * d + moved[k];
    p(y, x) = 1.0;
  }
  return p;
}

Matrix symmetrizer(int d, std::size_t n, int sign) {
  if (sign != 1 && sign != -1) throw DomainError("symmetrizer sign must be +1 or -1");
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  const std::size_t dim = ipow(d, n);
  Matrix s = Matrix::Zero(dim, dim);
  double count = 0.0;
  do {
    const double w = (sign < 0) ? permutation_sign(perm) : 1.0;
    s += w * permutation_matrix(d, perm);
    count += 1.0;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return s / count;
}

ParticleOperator symmetrize(const ParticleOperator& op, int sign) {
  const Matrix s = symmetrizer(op.d(), op.particles(), sign);
  return ParticleOperator(op.d(), op.labels(), s * op.matrix() * s);
}

ParticleOperator permutation_average(const ParticleOperator& op) {
  const std::size_t n = op.particles();
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Matrix acc = Matrix::Zero(op.dim(), op.dim());
  double count = 0.0;
  do {
    const Matrix p = permutation_matrix(op.d(), perm);
    acc += p * op.matrix() * p.transpose();
    count += 1.0;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return ParticleOperator(op.d(), op.labels(), acc / count);
}

double permutation_symmetry_error(const ParticleOperator& op) {
  const std::size_t n = op.particles();
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      std::vector<int> perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      std::swap(perm[i], perm[j]);
      const Matrix p = permutation_matrix(op.d(), perm);
      worst = std::max(worst, (p * op.matrix() * p.transpose() - op.matrix()).cwiseAbs().maxCoeff());
    }
  return worst;
}

ParticleOperator apply_local_left(const Matrix& local, const LabelSet& local_labels,
                                  const ParticleOperator& op) {
  const SlotOffsets so = slot_offsets(op.d(), op.labels(), local_labels);
  const auto k = static_cast<Eigen::Index>(so.local.size());
  if (local.rows() != k || local.cols() != k)
    throw DomainError("local operator dimension does not match its labels");
  const Matrix& x = op.matrix();
  const auto dim = x.cols();
  Matrix out(x.rows(), dim);
  Matrix block(k, dim);
  for (std::size_t base : so.base) {
    for (Eigen::Index q = 0; q < k; ++q) block.row(q) = x.row(base + so.local[q]);
    const Matrix mixed = local * block;
    for (Eigen::Index p = 0; p < k; ++p) out.row(base + so.local[p]) = mixed.row(p);
  }
  return ParticleOperator(op.d(), op.labels(), std::move(out));
}

ParticleOperator apply_local_right(const ParticleOperator& op, const Matrix& local,
                                   const LabelSet& local_labels) {
  const SlotOffsets so = slot_offsets(op.d(), op.labels(), local_labels);
  const auto k = static_cast<Eigen::Index>(so.local.size());
  if (local.rows() != k || local.cols() != k)
    throw DomainError("local operator dimension does not match its labels");
  const Matrix& x = op.matrix();
  const auto dim = x.rows();
  Matrix out(dim, x.cols());
  Matrix block(dim, k);
  for (std::size_t base : so.base) {
    for (Eigen::Index q = 0; q < k; ++q) block.col(q) = x.col(base + so.local[q]);
    const Matrix mixed = block * local;
    for (Eigen::Index p = 0; p < k; ++p) out.col(base + so.local[p]) = mixed.col(p);
  }
  return ParticleOperator(op.d(), op.labels(), std::move(out));
}

}  // namespace bbgky
