#include "bbgky/hierarchy.hpp"

namespace bbgky {

ObservableStats observable_stats(const ParticleOperator& a1, const ParticleOperator& f1,
                                 const ParticleOperator& g1, const ParticleOperator& g2) {
  if (a1.labels() != LabelSet{1} || f1.labels() != LabelSet{1} || g1.labels() != LabelSet{1})
    throw DomainError("one-particle inputs must live on label 1");
  if (g2.labels() != LabelSet{1, 2}) throw DomainError("G2 must live on labels 1,2");
  ObservableStats out;
  out.mean = (a1.matrix() * f1.matrix()).trace();
  const Matrix a_sq = a1.matrix() * a1.matrix();
  const ParticleOperator aa = tensor_product(a1, a1.relabeled({2}));
  out.dispersion = (a_sq * g1.matrix()).trace() + (aa.matrix() * g2.matrix()).trace();
  return out;
}

ParticleOperator correlation_functional_low(const Dynamics& dyn, const ParticleOperator& g1_t,
                                            int s, int order_cap, double t) {
  if (s < 2) throw std::out_of_range("correlation functional needs s >= 2");
  if (order_cap < 0) throw std::out_of_range("order_cap must be nonnegative");
  if (order_cap >= 2)
    throw DomainError("correlation functional terms beyond the first correction are unsupported");
  if (g1_t.labels() != LabelSet{1}) throw DomainError("G1 must live on label 1");

  auto product = [&](int count) {
    std::vector<ParticleOperator> factors;
    for (int i = 1; i <= count; ++i) factors.push_back(g1_t.relabeled({i}));
    return tensor_product(factors);
  };
  const LabelSet y = label_range(1, s);
  ParticleOperator out = scattering_cumulant(dyn, t, singletons(y), product(s));
  if (order_cap == 0) return out;

  const LabelSet wide = label_range(1, s + 1);
  const ParticleOperator base = product(s + 1);
  ParticleOperator inner = ParticleOperator::zero(base.d(), wide);
  for (int i = 1; i <= s; ++i) inner += scattering_cumulant(dyn, t, {{i}, {s + 1}}, base);
  ParticleOperator v2 = scattering_cumulant(dyn, t, singletons(wide), base);
  v2 -= scattering_cumulant(dyn, t, singletons(y), inner);
  out += partial_trace(v2, y);
  return out;
}

}  // namespace bbgky
