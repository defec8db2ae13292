#include "bbgky/random.hpp"

#include <cmath>
#include <numbers>

namespace bbgky {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

Xoshiro256StarStar::Xoshiro256StarStar(std::uint64_t seed) {
  std::uint64_t x = seed;
  for (auto& word : s_) word = splitmix64(x);
}

Xoshiro256StarStar::result_type Xoshiro256StarStar::operator()() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Xoshiro256StarStar::uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

double Xoshiro256StarStar::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double phi = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(phi);
  has_spare_ = true;
  return r * std::cos(phi);
}

Matrix random_gaussian(Xoshiro256StarStar& rng, Eigen::Index rows, Eigen::Index cols) {
  Matrix a(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index r = 0; r < rows; ++r) {
      const double re = rng.normal();
      const double im = rng.normal();
      a(r, c) = Complex(re, im);
    }
  return a;
}

ParticleOperator random_hermitian(Xoshiro256StarStar& rng, int d, const LabelSet& labels,
                                  double norm, bool symmetric) {
  const auto dim = static_cast<Eigen::Index>(ipow(d, labels.size()));
  const Matrix a = random_gaussian(rng, dim, dim);
  ParticleOperator h(d, labels, 0.5 * (a + a.adjoint()));
  if (symmetric) h = permutation_average(h);
  h.matrix() = 0.5 * (h.matrix() + h.matrix().adjoint());
  h *= Complex(norm / trace_norm(h), 0.0);
  return h;
}

ParticleOperator random_state(Xoshiro256StarStar& rng, int d, const LabelSet& labels) {
  const auto dim = static_cast<Eigen::Index>(ipow(d, labels.size()));
  const Matrix a = random_gaussian(rng, dim, dim);
  ParticleOperator rho(d, labels, a * a.adjoint());
  rho = permutation_average(rho);
  rho.matrix() = 0.5 * (rho.matrix() + rho.matrix().adjoint());
  rho *= Complex(1.0 / rho.trace().real(), 0.0);
  return rho;
}

SequenceKind parse_sequence_kind(const std::string& name) {
  if (name == "correlation") return SequenceKind::Correlation;
  if (name == "state") return SequenceKind::State;
  if (name == "bounded") return SequenceKind::Bounded;
  throw DomainError("unknown sequence kind '" + name + "'");
}

double correlation_sample_norm() { return 0.9 / (2.0 * std::exp(3.0)); }

OperatorSequence random_sequence(int d, int n_max, Xoshiro256StarStar& rng, SequenceKind kind) {
  OperatorSequence seq(d, n_max);
  for (int n = 1; n <= n_max; ++n) {
    const LabelSet labels = label_range(1, n);
    switch (kind) {
      case SequenceKind::Correlation:
        seq[n] = random_hermitian(rng, d, labels, correlation_sample_norm(), true);
        break;
      case SequenceKind::State:
        seq[n] = random_state(rng, d, labels);
        break;
      case SequenceKind::Bounded:
        seq[n] = random_hermitian(rng, d, labels, 1.0, true);
        break;
    }
  }
  return seq;
}

OperatorSequence random_sequence(int d, int n_max, std::uint64_t seed, SequenceKind kind) {
  Xoshiro256StarStar rng(seed);
  return random_sequence(d, n_max, rng, kind);
}

}  // namespace bbgky
