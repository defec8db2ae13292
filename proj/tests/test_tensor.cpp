#include <cmath>

#include "test_support.hpp"

using namespace bbgky;
using bbgky::test::random_op;

namespace {

// Direct index sum: keep the first particle of a two-particle operator.
Matrix trace_second(const Matrix& m, int d) {
  Matrix out = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) out(i, j) += m(i * d + k, j * d + k);
  return out;
}

}  // namespace

TEST_CASE("labels are validated and canonical") {
  CHECK(make_label_set({3, 1, 2}) == LabelSet{1, 2, 3});
  CHECK_THROWS_AS(make_label_set({1, 1}), DomainError);
  CHECK_THROWS_AS(make_label_set({0, 2}), DomainError);
  CHECK_THROWS_AS(ParticleOperator(2, {2, 1}, Matrix::Identity(4, 4)), DomainError);
  CHECK_THROWS_AS(ParticleOperator(2, {1, 2}, Matrix::Identity(3, 3)), DomainError);
}

TEST_CASE("embedding") {
  Xoshiro256StarStar rng(1);
  const ParticleOperator f = random_op(rng, 2, {2});
  const ParticleOperator e = embed(f, {1, 2});
  CHECK(std::abs(e.trace() - 2.0 * f.trace()) < 1e-12);
  CHECK(max_abs_diff(embed(f, f.labels()), f) == 0.0);
  const ParticleOperator g = random_op(rng, 2, {1});
  CHECK(max_abs_diff(partial_trace(embed(g, {1, 2}), {1}), 2.0 * g) < 1e-12);
  CHECK_THROWS_AS(embed(f, {1, 3}), DomainError);
  // embed then trace out two added labels gives d^2 f.
  const ParticleOperator h = random_op(rng, 3, {2});
  CHECK(max_abs_diff(partial_trace(embed(h, {1, 2, 4}), {2}), 9.0 * h) < 1e-12);
}

TEST_CASE("partial trace") {
  Xoshiro256StarStar rng(2);
  const ParticleOperator op = random_op(rng, 2, {1, 2, 3});
  CHECK(max_abs_diff(partial_trace(op, op.labels()), op) == 0.0);
  const ParticleOperator a = random_op(rng, 2, {1});
  const ParticleOperator b = random_op(rng, 2, {2});
  const ParticleOperator ab = tensor_product(a, b);
  CHECK(max_abs_diff(partial_trace(ab, {1}), b.trace() * a) < 1e-12);
  CHECK((partial_trace(ab, {1}).matrix() - trace_second(ab.matrix(), 2)).cwiseAbs().maxCoeff() <
        1e-12);
  for (int k = 0; k < 100; ++k) {
    const ParticleOperator x = random_op(rng, 2, {1, 2, 3});
    const LabelSet keep = (k % 3 == 0) ? LabelSet{2} : (k % 3 == 1) ? LabelSet{1, 3} : LabelSet{};
    CHECK(std::abs(partial_trace(x, keep).trace() - x.trace()) < 1e-12);
  }
  CHECK_THROWS_AS(partial_trace(op, {4}), DomainError);
}

TEST_CASE("partial trace is linear and covariant under relabeling") {
  Xoshiro256StarStar rng(3);
  const ParticleOperator x = random_op(rng, 2, {1, 2, 3});
  const ParticleOperator y = random_op(rng, 2, {1, 2, 3});
  const Complex c(0.3, -1.2);
  CHECK(max_abs_diff(partial_trace(c * x + y, {1, 3}),
                     c * partial_trace(x, {1, 3}) + partial_trace(y, {1, 3})) < 1e-12);
  // Swapping factors 1 and 2 then keeping label 2 equals keeping label 1.
  const Matrix p = permutation_matrix(2, {1, 0, 2});
  const ParticleOperator swapped(2, {1, 2, 3}, p * x.matrix() * p.adjoint());
  CHECK(max_abs_diff(partial_trace(swapped, {2}).relabeled({1}), partial_trace(x, {1})) < 1e-12);
}

TEST_CASE("trace norm") {
  CHECK(std::abs(trace_norm(ParticleOperator::identity(2, {1})) - 2.0) < 1e-14);
  Xoshiro256StarStar rng(4);
  const ParticleOperator f = random_hermitian(rng, 2, {1, 2}, 1.7);
  Eigen::SelfAdjointEigenSolver<Matrix> es(f.matrix());
  CHECK(std::abs(trace_norm(f) - es.eigenvalues().cwiseAbs().sum()) < 1e-12);
  const ParticleOperator h = random_hermitian(rng, 2, {1, 2});
  const Matrix u = unitary_propagator(h, 0.8, 1.0).matrix();
  const ParticleOperator g = random_op(rng, 2, {1, 2});
  CHECK(std::abs(trace_norm(conjugate(u, g)) - trace_norm(g)) < 1e-10);
}

TEST_CASE("unitary propagator") {
  Xoshiro256StarStar rng(5);
  const ParticleOperator h = random_hermitian(rng, 2, {1, 2}, 3.0);
  const Matrix id = Matrix::Identity(4, 4);
  CHECK((unitary_propagator(h, 0.0, 1.0).matrix() - id).cwiseAbs().maxCoeff() < 1e-12);
  Matrix diag = Matrix::Zero(2, 2);
  diag(0, 0) = 0.7;
  diag(1, 1) = -1.3;
  const Matrix ud = unitary_propagator(ParticleOperator(2, {1}, diag), 0.4, 0.5).matrix();
  CHECK(std::abs(ud(0, 0) - std::exp(Complex(0, -0.7 * 0.4 / 0.5))) < 1e-14);
  CHECK(std::abs(ud(1, 1) - std::exp(Complex(0, 1.3 * 0.4 / 0.5))) < 1e-14);
  const Matrix u1 = unitary_propagator(h, 0.3, 1.0).matrix();
  const Matrix u2 = unitary_propagator(h, 0.9, 1.0).matrix();
  const Matrix u12 = unitary_propagator(h, 1.2, 1.0).matrix();
  CHECK((u1 * u2 - u12).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((u12 * u12.adjoint() - id).cwiseAbs().maxCoeff() < 1e-10);
  CHECK_THROWS_AS(unitary_propagator(random_op(rng, 2, {1}), 1.0, 1.0), PreconditionError);
}

TEST_CASE("symmetrizers") {
  Xoshiro256StarStar rng(6);
  const ParticleOperator one = random_op(rng, 2, {1});
  CHECK(max_abs_diff(symmetrize(one, 1), one) < 1e-14);
  const ParticleOperator op = random_op(rng, 2, {1, 2, 3});
  for (int sign : {1, -1}) {
    const ParticleOperator s1 = symmetrize(op, sign);
    CHECK(max_abs_diff(symmetrize(s1, sign), s1) < 1e-12);
    const Matrix s = symmetrizer(2, 3, sign);
    CHECK((s * s - s).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(hermiticity_error(s) < 1e-12);
  }
  const Matrix anti = symmetrizer(2, 2, -1);
  CHECK(std::abs(anti.trace() - 1.0) < 1e-12);
  Eigen::SelfAdjointEigenSolver<Matrix> es(anti);
  int rank = 0;
  for (double ev : es.eigenvalues()) rank += ev > 0.5 ? 1 : 0;
  CHECK(rank == 1);
}

TEST_CASE("local application matches embedding") {
  Xoshiro256StarStar rng(7);
  const ParticleOperator f = random_op(rng, 2, {1, 2, 3});
  const ParticleOperator a = random_op(rng, 2, {1, 3});
  const ParticleOperator left = apply_local_left(a.matrix(), {1, 3}, f);
  const ParticleOperator right = apply_local_right(f, a.matrix(), {1, 3});
  const Matrix full = embed(a, {1, 2, 3}).matrix();
  CHECK((left.matrix() - full * f.matrix()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((right.matrix() - f.matrix() * full).cwiseAbs().maxCoeff() < 1e-12);
}
