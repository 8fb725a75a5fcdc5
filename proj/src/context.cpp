#include "hecke/context.hpp"

#include <stdexcept>

namespace hecke {

PlaneVec scale(const AlgNum &c, const PlaneVec &v) {
  return {c * v.x, c * v.y};
}

AlgNum wedge(const PlaneVec &u, const PlaneVec &v) {
  return u.x * v.y - u.y * v.x;
}

AlgNum dot(const PlaneVec &u, const PlaneVec &v) {
  return u.x * v.x + u.y * v.y;
}

HeckeContext::HeckeContext(int q) : q_(q) {
  if (q < 3) throw std::invalid_argument("HeckeContext: require q >= 3");
  field_ = NumberField::make(q);
  const NumberField *f = field_.get();
  lambda_ = AlgNum::lambda(f);
  AlgNum zero = AlgNum::integer(f, 0L);
  AlgNum one = AlgNum::integer(f, 1L);
  S_ = {zero, -one, one, zero};
  T_ = {one, lambda_, zero, one};
  U_ = T_ * S_;  // [[lambda, -1], [1, 0]]

  // w_i = (p_{i+1}(lambda), p_i(lambda)) via the recurrence
  // p_{k+1} = lambda p_k - p_{k-1}; the second half is the negated first half.
  fan_.reserve(2 * q);
  AlgNum prev = zero, cur = one;  // p_0, p_1
  for (int i = 0; i < q; ++i) {
    fan_.push_back(PlaneVec{cur, prev});  // (p_{i+1}, p_i)
    AlgNum next = lambda_ * cur - prev;
    prev = cur;
    cur = next;
  }
  for (int i = 0; i < q; ++i) fan_.push_back(-fan_[i]);

  if (fan_[0] != PlaneVec{one, zero} ||
      fan_[q - 1] != PlaneVec{zero, one})
    throw std::logic_error("HeckeContext: fan endpoints wrong");
}

const PlaneVec &HeckeContext::fan(int i) const {
  int n = 2 * q_;
  int j = i % n;
  if (j < 0) j += n;
  return fan_[j];
}

AlgNum HeckeContext::qform(const PlaneVec &v) const {
  return v.x * v.x - lambda_ * v.x * v.y + v.y * v.y;
}

HeckeContext make_context(int q) { return HeckeContext(q); }

}  // namespace hecke
