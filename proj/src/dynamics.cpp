#include "bbgky/dynamics.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>

#include "bbgky/partitions.hpp"

namespace bbgky {

namespace {

void check_square(const Matrix& m, Eigen::Index dim, const std::string& field) {
  if (m.rows() != dim || m.cols() != dim)
    throw DomainError(field + " must be a " + std::to_string(dim) + "x" + std::to_string(dim) +
                      " matrix");
  if (!m.allFinite()) throw DomainError(field + " has non-finite entries");
}

void check_hermitian(const Matrix& m, const std::string& field) {
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if (hermiticity_error(m) > 1e-12 * scale) throw DomainError(field + " must be Hermitian");
}

double swap_error(const Matrix& phi, int d) {
  const Matrix p = permutation_matrix(d, {1, 0});
  return (p * phi * p.transpose() - phi).cwiseAbs().maxCoeff();
}

// All k-element subsets of labels in lexicographic order.
std::vector<LabelSet> subsets(const LabelSet& labels, std::size_t k) {
  std::vector<LabelSet> out;
  if (k > labels.size()) return out;
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    LabelSet s;
    for (std::size_t i : idx) s.push_back(labels[i]);
    out.push_back(std::move(s));
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == labels.size() - k + i - 1) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

}  // namespace

void HamiltonianSpec::validate() const {
  if (d < 1) throw DomainError("d must be positive");
  if (!(hbar > 0.0) || !std::isfinite(hbar)) throw DomainError("hbar must be a positive number");
  check_square(K, d, "kinetic");
  check_hermitian(K, "kinetic");
  check_square(Phi, d * d, "potential");
  check_hermitian(Phi, "potential");
  const double scale = std::max(1.0, Phi.cwiseAbs().maxCoeff());
  if (swap_error(Phi, d) > 1e-12 * scale)
    throw DomainError("potential must be symmetric under exchange of the two particles");
  for (const auto& [k, m] : PhiK) {
    const std::string field = "potential_k[" + std::to_string(k) + "]";
    if (k < 3) throw DomainError(field + ": k-body terms need k >= 3");
    check_square(m, static_cast<Eigen::Index>(ipow(d, k)), field);
    check_hermitian(m, field);
    ParticleOperator op(d, label_range(1, k), m);
    if (permutation_symmetry_error(op) > 1e-12 * std::max(1.0, m.cwiseAbs().maxCoeff()))
      throw DomainError(field + " must be permutation symmetric");
  }
}

LiouvillianMode LiouvillianMode::interaction(int i1, int i2) {
  return {Kind::Interaction, make_label_set({i1, i2})};
}

LiouvillianMode LiouvillianMode::interaction_k(LabelSet labels) {
  LabelSet l = make_label_set(std::move(labels));
  if (l.size() < 2) throw DomainError("interaction needs at least two labels");
  return {Kind::Interaction, l};
}

ParticleOperator interaction_potential(const HamiltonianSpec& spec, const LabelSet& labels) {
  if (labels.size() == 2) return ParticleOperator(spec.d, labels, spec.Phi);
  auto it = spec.PhiK.find(static_cast<int>(labels.size()));
  if (it == spec.PhiK.end()) return ParticleOperator::zero(spec.d, labels);
  return ParticleOperator(spec.d, labels, it->second);
}

ParticleOperator build_hamiltonian(const HamiltonianSpec& spec, const LabelSet& labels) {
  if (labels.empty()) throw DomainError("Hamiltonian needs at least one particle");
  ParticleOperator h = ParticleOperator::zero(spec.d, labels);
  for (int i : labels) h += embed(ParticleOperator(spec.d, {i}, spec.K), labels);
  for (const auto& pair : subsets(labels, 2))
    h += embed(ParticleOperator(spec.d, pair, spec.Phi), labels);
  for (const auto& [k, m] : spec.PhiK)
    for (const auto& group : subsets(labels, static_cast<std::size_t>(k)))
      h += embed(ParticleOperator(spec.d, group, m), labels);
  return h;
}

ParticleOperator liouvillian(const HamiltonianSpec& spec, const ParticleOperator& f,
                             const LiouvillianMode& mode) {
  const Complex minus_i_over_hbar(0.0, -1.0 / spec.hbar);
  switch (mode.kind) {
    case LiouvillianMode::Kind::Full: {
      if (f.labels().empty()) return ParticleOperator::zero(f.d(), f.labels());
      const Matrix h = build_hamiltonian(spec, f.labels()).matrix();
      return ParticleOperator(f.d(), f.labels(),
                              minus_i_over_hbar * (h * f.matrix() - f.matrix() * h));
    }
    case LiouvillianMode::Kind::Kinetic:
    case LiouvillianMode::Kind::Interaction: {
      if (!label_subset(mode.labels, f.labels()))
        throw DomainError("generator labels are not carried by the operand");
      const Matrix a = (mode.kind == LiouvillianMode::Kind::Kinetic)
                           ? spec.K
                           : interaction_potential(spec, mode.labels).matrix();
      ParticleOperator out = apply_local_left(a, mode.labels, f);
      out -= apply_local_right(f, a, mode.labels);
      out *= minus_i_over_hbar;
      return out;
    }
  }
  throw DomainError("unknown generator mode");
}

Dynamics::Dynamics(HamiltonianSpec spec) : spec_(std::move(spec)) { spec_.validate(); }

const Spectrum& Dynamics::spectrum(std::size_t n) const {
  // Caller holds mutex_.
  auto it = spectra_.find(n);
  if (it != spectra_.end()) return *it->second;
  const ParticleOperator h = build_hamiltonian(spec_, label_range(1, static_cast<int>(n)));
  Eigen::SelfAdjointEigenSolver<Matrix> es(h.matrix());
  auto s = std::make_unique<Spectrum>();
  s->energies = es.eigenvalues();
  s->vectors = es.eigenvectors();
  return *spectra_.emplace(n, std::move(s)).first->second;
}

std::shared_ptr<const Matrix> Dynamics::propagator(std::size_t n, double t) const {
  std::lock_guard<std::mutex> lock(mutex_);
  const auto key = std::make_pair(n, t);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  const Spectrum& s = spectrum(n);
  Vector phases(s.energies.size());
  for (Eigen::Index k = 0; k < phases.size(); ++k)
    phases(k) = std::exp(Complex(0.0, -s.energies(k) * t / spec_.hbar));
  auto u = std::make_shared<const Matrix>(s.vectors * phases.asDiagonal() * s.vectors.adjoint());
  cache_.emplace(key, u);
  return u;
}

std::shared_ptr<const Matrix> Dynamics::free_propagator(double t) const {
  // Cached under particle count 0, which never names an interacting group.
  std::lock_guard<std::mutex> lock(mutex_);
  const auto key = std::make_pair(std::size_t{0}, t);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  const ParticleOperator k(spec_.d, {1}, spec_.K);
  auto u = std::make_shared<const Matrix>(unitary_propagator(k, t, spec_.hbar).matrix());
  cache_.emplace(key, u);
  return u;
}

Matrix Dynamics::block_propagator(const std::vector<LabelSet>& blocks, const LabelSet& full,
                                  double t) const {
  std::vector<ParticleOperator> factors;
  LabelSet covered;
  for (const auto& b : blocks) {
    factors.emplace_back(spec_.d, b, *propagator(b.size(), t));
    covered = label_union(covered, b);
  }
  const LabelSet rest = label_difference(full, covered);
  if (!rest.empty()) factors.push_back(ParticleOperator::identity(spec_.d, rest));
  if (factors.size() == 1) return factors.front().matrix();
  return tensor_product(factors).matrix();
}

Matrix Dynamics::block_scattering(const std::vector<LabelSet>& blocks, const LabelSet& full,
                                  double t) const {
  const Matrix& back = *free_propagator(-t);
  std::vector<ParticleOperator> factors;
  LabelSet covered;
  for (const auto& b : blocks) {
    std::vector<ParticleOperator> frees;
    for (int i : b) frees.emplace_back(spec_.d, LabelSet{i}, back);
    const Matrix w = *propagator(b.size(), t) * tensor_product(frees).matrix();
    factors.emplace_back(spec_.d, b, w);
    covered = label_union(covered, b);
  }
  const LabelSet rest = label_difference(full, covered);
  if (!rest.empty()) factors.push_back(ParticleOperator::identity(spec_.d, rest));
  if (factors.size() == 1) return factors.front().matrix();
  return tensor_product(factors).matrix();
}

std::size_t Dynamics::cached_propagators() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return cache_.size();
}

void Dynamics::clear_cache() const {
  std::lock_guard<std::mutex> lock(mutex_);
  cache_.clear();
}

ParticleOperator evolve_group(const Dynamics& dyn, const ParticleOperator& f, double t) {
  if (f.labels().empty()) return f;
  return conjugate(*dyn.propagator(f.particles(), t), f);
}

ParticleOperator scattering_operator(const Dynamics& dyn, const ParticleOperator& f, double t) {
  if (f.labels().empty()) return f;
  return conjugate(dyn.block_scattering({f.labels()}, f.labels(), t), f);
}

ParticleOperator free_evolve(const Dynamics& dyn, const ParticleOperator& f, double t) {
  const Matrix& u = *dyn.free_propagator(t);
  const Matrix ua = u.adjoint();
  ParticleOperator out = f;
  for (int i : f.labels()) {
    out = apply_local_left(u, {i}, out);
    out = apply_local_right(out, ua, {i});
  }
  return out;
}

}  // namespace bbgky
