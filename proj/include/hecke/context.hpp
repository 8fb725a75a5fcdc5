#pragma once

#include <memory>
#include <vector>

#include "hecke/algnum.hpp"

namespace hecke {

struct PlaneVec {
  AlgNum x, y;

  PlaneVec() = default;
  PlaneVec(AlgNum xx, AlgNum yy) : x(std::move(xx)), y(std::move(yy)) {}

  PlaneVec operator+(const PlaneVec &o) const { return {x + o.x, y + o.y}; }
  PlaneVec operator-(const PlaneVec &o) const { return {x - o.x, y - o.y}; }
  PlaneVec operator-() const { return {-x, -y}; }
  bool operator==(const PlaneVec &o) const { return x == o.x && y == o.y; }
  bool operator!=(const PlaneVec &o) const { return !(*this == o); }
};

PlaneVec scale(const AlgNum &c, const PlaneVec &v);

// u.x * v.y - u.y * v.x
AlgNum wedge(const PlaneVec &u, const PlaneVec &v);
// u.x * v.x + u.y * v.y
AlgNum dot(const PlaneVec &u, const PlaneVec &v);

struct Mat2 {
  AlgNum a, b, c, d;  // row major: [[a, b], [c, d]]

  PlaneVec apply(const PlaneVec &v) const {
    return {a * v.x + b * v.y, c * v.x + d * v.y};
  }
  Mat2 operator*(const Mat2 &o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c,
            c * o.b + d * o.d};
  }
  AlgNum det() const { return a * d - b * c; }
  bool operator==(const Mat2 &o) const {
    return a == o.a && b == o.b && c == o.c && d == o.d;
  }
};

// All data attached to one Hecke triangle group: the field Q(lambda) with
// lambda = 2 cos(pi/q), the generators S and T, the rotation U = T S, and the
// fan vectors w_i = U^i (1,0)^T for i = 0 .. 2q-1.  Immutable and shareable;
// AlgNum values hold raw pointers into the owned field, so the context (or a
// copy of it) must outlive every value derived from it.
class HeckeContext {
 public:
  explicit HeckeContext(int q);  // throws std::invalid_argument for q < 3

  int q() const { return q_; }
  const NumberField *field() const { return field_.get(); }
  const AlgNum &lambda() const { return lambda_; }

  // fan vector w_i, index taken mod 2q
  const PlaneVec &fan(int i) const;
  const std::vector<PlaneVec> &fan_list() const { return fan_; }

  const Mat2 &S() const { return S_; }
  const Mat2 &T() const { return T_; }
  const Mat2 &U() const { return U_; }

  // x^2 - lambda x y + y^2; value 1 on every fan vector
  AlgNum qform(const PlaneVec &v) const;

  AlgNum integer(long v) const { return AlgNum::integer(field_.get(), v); }
  AlgNum integer(const mpz_class &v) const {
    return AlgNum::integer(field_.get(), v);
  }
  AlgNum rational(const mpz_class &n, const mpz_class &d) const {
    return AlgNum::rational(field_.get(), n, d);
  }
  AlgNum rational(const mpq_class &v) const {
    return AlgNum::rational(field_.get(), v);
  }

 private:
  int q_;
  std::shared_ptr<const NumberField> field_;
  AlgNum lambda_;
  Mat2 S_, T_, U_;
  std::vector<PlaneVec> fan_;
};

HeckeContext make_context(int q);

}  // namespace hecke
