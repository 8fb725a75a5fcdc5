#pragma once

#include <gmpxx.h>

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "hecke/intpoly.hpp"

namespace hecke {

struct RatInterval {
  mpq_class lo, hi;  // lo <= hi
  mpq_class width() const { return hi - lo; }
  mpq_class mid() const { return (lo + hi) / 2; }
};

// The real field Q(lambda) with lambda = 2 cos(pi/q).  The minimal polynomial
// is found by building the degree q-1 recurrence polynomial p_q, factoring it
// over Z, and selecting the factor that vanishes on an isolating interval of
// the largest root.  Immutable after construction except for an internally
// cached, mutex-guarded isolating interval that only ever shrinks.
class NumberField {
 public:
  static std::shared_ptr<const NumberField> make(int q);

  int q() const { return q_; }
  int degree() const { return deg_; }
  const IPoly &minpoly() const { return minpoly_; }
  bool lambda_is_rational() const { return deg_ == 1; }

  // Isolating interval of lambda with width <= 2^-bits.
  RatInterval enclosure(int bits) const;

  // lambda^(deg_+k) reduced to the power basis, k = 0 .. deg_-2.
  const std::vector<IPoly> &power_reduction() const { return powred_; }

  // Certified double bounds for lambda^i, i = 0 .. deg_-1.
  double pow_lo(int i) const { return dpow_lo_[i]; }
  double pow_hi(int i) const { return dpow_hi_[i]; }
  double lambda_double() const { return dlam_; }

 private:
  NumberField() = default;

  int q_ = 0;
  int deg_ = 0;
  IPoly minpoly_;
  std::vector<IPoly> powred_;
  std::vector<double> dpow_lo_, dpow_hi_;
  double dlam_ = 0;

  mutable std::mutex mu_;
  mutable mpq_class lo_, hi_;
  mutable int bits_ = 0;
  mutable int sign_lo_ = 0;  // sign of minpoly at lo_ (0 when lambda rational)
};

// Element of Q(lambda): integer coefficient vector over a positive common
// denominator, basis 1, lambda, ..., lambda^(d-1).  Always canonical
// (gcd of all coefficients and the denominator is 1), so equality is
// componentwise and zero means the all-zero vector.  Values keep a raw
// pointer into their field; the HeckeContext owning the field must outlive
// every value created from it.
class AlgNum {
 public:
  AlgNum() = default;  // empty value, only assignable

  static AlgNum integer(const NumberField *f, const mpz_class &v);
  static AlgNum integer(const NumberField *f, long v);
  static AlgNum rational(const NumberField *f, const mpz_class &num,
                         const mpz_class &den);
  static AlgNum rational(const NumberField *f, const mpq_class &v);
  static AlgNum lambda(const NumberField *f);
  static AlgNum from_coeffs(const NumberField *f, std::vector<mpz_class> num,
                            mpz_class den);

  const NumberField *field() const { return f_; }
  const std::vector<mpz_class> &coeffs() const { return num_; }
  const mpz_class &den() const { return den_; }

  bool is_zero() const;
  bool operator==(const AlgNum &o) const;
  bool operator!=(const AlgNum &o) const { return !(*this == o); }

  AlgNum operator-() const;
  AlgNum operator+(const AlgNum &o) const;
  AlgNum operator-(const AlgNum &o) const;
  AlgNum operator*(const AlgNum &o) const;
  AlgNum operator/(const AlgNum &o) const;  // o != 0
  AlgNum &operator+=(const AlgNum &o) { return *this = *this + o; }
  AlgNum &operator-=(const AlgNum &o) { return *this = *this - o; }
  AlgNum &operator*=(const AlgNum &o) { return *this = *this * o; }
  AlgNum &operator/=(const AlgNum &o) { return *this = *this / o; }

  // Exact sign: -1, 0, +1.  Adaptive interval evaluation; the zero case is
  // decided by the canonical representation.
  int sign() const;

  // Certified rational interval containing the value, with
  // width <= 2^-precision_bits * max(1, |value|).  precision_bits >= 16.
  RatInterval approx(int precision_bits) const;

  double to_double() const;

  // "c0,c1,...,c_{d-1}/den"
  std::string serialize() const;
  static std::optional<AlgNum> parse(const NumberField *f,
                                     const std::string &s);

  // Rational interval from evaluating the coefficient vector over the
  // lambda enclosure at the given precision.  Building block for sign,
  // approx and floor_ratio.
  RatInterval eval_interval(int enclosure_bits) const;

 private:
  void canonicalize();

  const NumberField *f_ = nullptr;
  std::vector<mpz_class> num_;
  mpz_class den_ = 1;
};

// sign(a - b)
int cmp(const AlgNum &a, const AlgNum &b);

// floor(num/den) for exact values, den > 0.
mpz_class floor_ratio(const AlgNum &num, const AlgNum &den);

}  // namespace hecke
