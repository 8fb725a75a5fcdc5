#include "hecke/algnum.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace hecke {

namespace {

double next_up(double x) {
  return std::nextafter(x, std::numeric_limits<double>::infinity());
}
double next_dn(double x) {
  return std::nextafter(x, -std::numeric_limits<double>::infinity());
}

// Rational roots of the recurrence polynomials are confined to {0, 1, -1}:
// 2cos of a rational multiple of pi is rational only at 0, +-1, +-2, and the
// values +-2 never occur for the interior angles involved here.
const long kRationalRootCandidates[] = {0, 1, -1};

struct LargestRoot {
  mpq_class lo, hi;  // lo == hi when the root is rational
  bool rational;
};

// Isolating interval for the largest real root of p (p must be nonzero with
// at least one real root in (-3, 3)).
LargestRoot isolate_largest_root(IPoly p) {
  std::vector<mpq_class> rational_roots;
  for (long r : kRationalRootCandidates) {
    mpq_class rq(r);
    while (!p.empty() && ip_sign_at(p, rq) == 0) {
      IPoly lin = {mpz_class(-r), mpz_class(1)};
      IPoly q;
      if (!ip_div_exact(p, lin, q))
        throw std::logic_error("isolate_largest_root: deflation failed");
      p = std::move(q);
      rational_roots.push_back(rq);
    }
  }
  mpq_class lo(-3), hi(3);
  int count = ip_deg(p) >= 1 ? ip_count_roots(p, lo, hi) : 0;
  if (count == 0) {
    if (rational_roots.empty())
      throw std::logic_error("isolate_largest_root: no real roots");
    mpq_class best = rational_roots[0];
    for (const auto &r : rational_roots)
      if (r > best) best = r;
    return {best, best, true};
  }
  // Shrink until the bracket holds exactly the largest irrational root and
  // lies strictly above every deflated rational root and above 1 (the factor
  // selection step relies on a bracket inside (1, 2)).
  mpq_class floor_bound(1);
  for (const auto &r : rational_roots)
    if (r > floor_bound) floor_bound = r;
  const mpq_class min_width(1, 16);
  while (count > 1 || hi - lo > min_width || !(lo > floor_bound)) {
    mpq_class mid = (lo + hi) / 2;
    int above = ip_count_roots(p, mid, hi);
    if (above >= 1) {
      lo = mid;
      count = above;
    } else {
      hi = mid;
      count -= above;
    }
    if (hi - lo < mpq_class(1, 1 << 30))
      throw std::logic_error("isolate_largest_root: did not separate");
  }
  mpq_class best_rational(-4);
  for (const auto &r : rational_roots)
    if (r > best_rational) best_rational = r;
  if (best_rational > lo)
    return {best_rational, best_rational, true};
  return {lo, hi, false};
}

}  // namespace

std::shared_ptr<const NumberField> NumberField::make(int q) {
  if (q < 3) throw std::invalid_argument("NumberField: require q >= 3");
  IPoly pq = ip_recurrence_poly(q);

  // Irreducible factors of p_q over Z: the minimal polynomials of
  // 2 cos(2 pi k / 2q) grouped by the divisors of 2q.  The exact product
  // identity is verified before any factor is used.
  std::vector<IPoly> factors;
  IPoly product = {1};
  for (int d = 3; d <= 2 * q; ++d) {
    if ((2 * q) % d != 0) continue;
    factors.push_back(ip_cos2pi_minpoly(d));
    product = ip_mul(product, factors.back());
  }
  if (product != pq)
    throw std::logic_error("NumberField: factorization check failed");

  LargestRoot root = isolate_largest_root(pq);

  const IPoly *selected = nullptr;
  if (root.rational) {
    for (const auto &f : factors)
      if (ip_sign_at(f, root.lo) == 0) {
        if (selected)
          throw std::logic_error("NumberField: ambiguous rational factor");
        selected = &f;
      }
  } else {
    for (const auto &f : factors) {
      int c = ip_count_roots(f, root.lo, root.hi);
      if (c == 1) {
        if (selected)
          throw std::logic_error("NumberField: ambiguous factor selection");
        selected = &f;
      } else if (c != 0) {
        throw std::logic_error("NumberField: non-isolating bracket");
      }
    }
  }
  if (!selected) throw std::logic_error("NumberField: no factor vanishes");

  auto nf = std::shared_ptr<NumberField>(new NumberField());
  nf->q_ = q;
  nf->minpoly_ = *selected;
  nf->deg_ = ip_deg(nf->minpoly_);
  if (nf->minpoly_.back() != 1)
    throw std::logic_error("NumberField: minpoly not monic");

  int d = nf->deg_;
  // lambda^d = -(m_0 + m_1 lambda + ... + m_{d-1} lambda^{d-1})
  std::vector<mpz_class> base(d);
  for (int j = 0; j < d; ++j) base[j] = -nf->minpoly_[j];
  nf->powred_.push_back(base);
  for (int k = 1; k <= d - 2; ++k) {
    const auto &prev = nf->powred_.back();
    std::vector<mpz_class> next(d);
    mpz_class top = prev[d - 1];
    for (int j = d - 1; j >= 1; --j) next[j] = prev[j - 1] + top * base[j];
    next[0] = top * base[0];
    nf->powred_.push_back(std::move(next));
  }

  if (root.rational) {
    nf->lo_ = root.lo;
    nf->hi_ = root.lo;
    nf->bits_ = std::numeric_limits<int>::max();
    nf->sign_lo_ = 0;
  } else {
    nf->lo_ = root.lo;
    nf->hi_ = root.hi;
    nf->bits_ = 0;
    nf->sign_lo_ = ip_sign_at(nf->minpoly_, nf->lo_);
    if (nf->sign_lo_ == 0 ||
        nf->sign_lo_ == ip_sign_at(nf->minpoly_, nf->hi_))
      throw std::logic_error("NumberField: bad bracket signs");
  }

  RatInterval enc = nf->enclosure(128);
  nf->dpow_lo_.resize(d);
  nf->dpow_hi_.resize(d);
  mpq_class pl(1), ph(1);
  for (int i = 0; i < d; ++i) {
    // mpq_get_d truncates toward zero; both bounds here are positive.
    nf->dpow_lo_[i] = pl.get_d();
    nf->dpow_hi_[i] = next_up(ph.get_d());
    pl *= enc.lo;
    ph *= enc.hi;
  }
  nf->dlam_ = d >= 2 ? (nf->dpow_lo_[1] + nf->dpow_hi_[1]) / 2
                     : mpq_class(-nf->minpoly_[0]).get_d();
  return nf;
}

RatInterval NumberField::enclosure(int bits) const {
  std::lock_guard<std::mutex> lock(mu_);
  if (bits_ >= bits || sign_lo_ == 0) return {lo_, hi_};
  mpq_class width = hi_ - lo_;
  mpz_class threshold_den;
  mpz_ui_pow_ui(threshold_den.get_mpz_t(), 2, bits);
  mpq_class target(1, 1);
  target /= mpq_class(threshold_den);
  while (hi_ - lo_ > target) {
    mpq_class mid = (lo_ + hi_) / 2;
    int s = ip_sign_at(minpoly_, mid);
    if (s == 0) throw std::logic_error("enclosure: hit irrational root");
    if (s == sign_lo_)
      lo_ = mid;
    else
      hi_ = mid;
  }
  bits_ = bits;
  return {lo_, hi_};
}

// ---------------------------------------------------------------------------

void AlgNum::canonicalize() {
  if (den_ == 0) throw std::invalid_argument("AlgNum: zero denominator");
  if (den_ < 0) {
    den_ = -den_;
    for (auto &c : num_) c = -c;
  }
  mpz_class g = den_;
  for (const auto &c : num_) {
    if (g == 1) break;
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  }
  if (g > 1) {
    mpz_divexact(den_.get_mpz_t(), den_.get_mpz_t(), g.get_mpz_t());
    for (auto &c : num_)
      mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
  }
}

AlgNum AlgNum::integer(const NumberField *f, const mpz_class &v) {
  AlgNum a;
  a.f_ = f;
  a.num_.assign(f->degree(), 0);
  a.num_[0] = v;
  a.den_ = 1;
  return a;
}

AlgNum AlgNum::integer(const NumberField *f, long v) {
  return integer(f, mpz_class(v));
}

AlgNum AlgNum::rational(const NumberField *f, const mpz_class &num,
                        const mpz_class &den) {
  AlgNum a;
  a.f_ = f;
  a.num_.assign(f->degree(), 0);
  a.num_[0] = num;
  a.den_ = den;
  a.canonicalize();
  return a;
}

AlgNum AlgNum::rational(const NumberField *f, const mpq_class &v) {
  return rational(f, v.get_num(), v.get_den());
}

AlgNum AlgNum::lambda(const NumberField *f) {
  if (f->degree() == 1) return integer(f, mpz_class(-f->minpoly()[0]));
  AlgNum a;
  a.f_ = f;
  a.num_.assign(f->degree(), 0);
  a.num_[1] = 1;
  a.den_ = 1;
  return a;
}

AlgNum AlgNum::from_coeffs(const NumberField *f, std::vector<mpz_class> num,
                           mpz_class den) {
  if (static_cast<int>(num.size()) > f->degree())
    throw std::invalid_argument("AlgNum: too many coefficients");
  num.resize(f->degree());
  AlgNum a;
  a.f_ = f;
  a.num_ = std::move(num);
  a.den_ = std::move(den);
  a.canonicalize();
  return a;
}

bool AlgNum::is_zero() const {
  for (const auto &c : num_)
    if (c != 0) return false;
  return true;
}

bool AlgNum::operator==(const AlgNum &o) const {
  if (f_ == nullptr && o.f_ == nullptr) return true;
  if (f_ != o.f_)
    throw std::invalid_argument("AlgNum: comparing values from different fields");
  return den_ == o.den_ && num_ == o.num_;
}

static void require_same_field(const AlgNum &a, const AlgNum &b) {
  if (a.field() == nullptr || a.field() != b.field())
    throw std::invalid_argument("AlgNum: field mismatch");
}

AlgNum AlgNum::operator-() const {
  AlgNum r = *this;
  for (auto &c : r.num_) c = -c;
  return r;
}

AlgNum AlgNum::operator+(const AlgNum &o) const {
  require_same_field(*this, o);
  AlgNum r;
  r.f_ = f_;
  r.num_.resize(num_.size());
  for (size_t i = 0; i < num_.size(); ++i)
    r.num_[i] = num_[i] * o.den_ + o.num_[i] * den_;
  r.den_ = den_ * o.den_;
  r.canonicalize();
  return r;
}

AlgNum AlgNum::operator-(const AlgNum &o) const {
  require_same_field(*this, o);
  AlgNum r;
  r.f_ = f_;
  r.num_.resize(num_.size());
  for (size_t i = 0; i < num_.size(); ++i)
    r.num_[i] = num_[i] * o.den_ - o.num_[i] * den_;
  r.den_ = den_ * o.den_;
  r.canonicalize();
  return r;
}

AlgNum AlgNum::operator*(const AlgNum &o) const {
  require_same_field(*this, o);
  int d = f_->degree();
  std::vector<mpz_class> conv(2 * d - 1);
  for (int i = 0; i < d; ++i) {
    if (num_[i] == 0) continue;
    for (int j = 0; j < d; ++j) {
      if (o.num_[j] == 0) continue;
      conv[i + j] += num_[i] * o.num_[j];
    }
  }
  const auto &red = f_->power_reduction();
  AlgNum r;
  r.f_ = f_;
  r.num_.assign(d, 0);
  for (int j = 0; j < d; ++j) r.num_[j] = conv[j];
  for (int k = 0; k < d - 1; ++k) {
    const mpz_class &c = conv[d + k];
    if (c == 0) continue;
    for (int j = 0; j < d; ++j) r.num_[j] += c * red[k][j];
  }
  r.den_ = den_ * o.den_;
  r.canonicalize();
  return r;
}

namespace {

using QPoly = std::vector<mpq_class>;

void qp_norm(QPoly &p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

// quotient of a / b, also reduces a to the remainder
QPoly qp_divmod(QPoly &a, const QPoly &b) {
  QPoly q;
  int db = static_cast<int>(b.size()) - 1;
  if (static_cast<int>(a.size()) > db) q.assign(a.size() - db, 0);
  while (static_cast<int>(a.size()) - 1 >= db && !a.empty()) {
    mpq_class c = a.back() / b[db];
    int shift = static_cast<int>(a.size()) - 1 - db;
    q[shift] = c;
    for (int j = 0; j <= db; ++j) a[shift + j] -= c * b[j];
    qp_norm(a);
  }
  qp_norm(q);
  return q;
}

QPoly qp_sub_mul(const QPoly &a, const QPoly &q, const QPoly &b) {
  // a - q*b
  QPoly prod;
  if (!q.empty() && !b.empty()) {
    prod.assign(q.size() + b.size() - 1, 0);
    for (size_t i = 0; i < q.size(); ++i)
      for (size_t j = 0; j < b.size(); ++j) prod[i + j] += q[i] * b[j];
  }
  QPoly r(std::max(a.size(), prod.size()), 0);
  for (size_t i = 0; i < r.size(); ++i) {
    if (i < a.size()) r[i] += a[i];
    if (i < prod.size()) r[i] -= prod[i];
  }
  qp_norm(r);
  return r;
}

}  // namespace

AlgNum AlgNum::operator/(const AlgNum &o) const {
  require_same_field(*this, o);
  if (o.is_zero()) throw std::invalid_argument("AlgNum: division by zero");
  int d = f_->degree();
  if (d == 1) {
    AlgNum r;
    r.f_ = f_;
    r.num_.assign(1, num_[0] * o.den_);
    r.den_ = den_ * o.num_[0];
    r.canonicalize();
    return r;
  }
  // Inverse of o modulo the minimal polynomial via extended Euclid over Q.
  QPoly r0(f_->minpoly().size());
  for (size_t i = 0; i < f_->minpoly().size(); ++i)
    r0[i] = mpq_class(f_->minpoly()[i]);
  QPoly r1(d);
  for (int i = 0; i < d; ++i) r1[i] = mpq_class(o.num_[i], o.den_);
  qp_norm(r1);
  QPoly t0, t1 = {mpq_class(1)};
  while (r1.size() > 1) {
    QPoly a = r0;
    QPoly q = qp_divmod(a, r1);
    r0 = std::move(r1);
    r1 = std::move(a);
    QPoly tn = qp_sub_mul(t0, q, t1);
    t0 = std::move(t1);
    t1 = std::move(tn);
  }
  if (r1.empty())
    throw std::logic_error("AlgNum: inverse of zero divisor");
  // o^-1 = t1 / r1[0]
  std::vector<mpq_class> quot(t1.size());
  mpz_class den_lcm = 1;
  for (size_t i = 0; i < t1.size(); ++i) {
    quot[i] = t1[i] / r1[0];
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(),
            quot[i].get_den().get_mpz_t());
  }
  AlgNum inv;
  inv.f_ = f_;
  inv.num_.assign(d, 0);
  for (size_t i = 0; i < quot.size(); ++i) {
    mpq_class scaled = quot[i] * mpq_class(den_lcm);
    if (scaled.get_den() != 1)
      throw std::logic_error("AlgNum: inverse scaling failed");
    inv.num_[i] = scaled.get_num();
  }
  inv.den_ = den_lcm;
  inv.canonicalize();
  return *this * inv;
}

namespace {

struct DInterval {
  double lo, hi;
  bool ok;
};

DInterval dint_add(DInterval a, DInterval b) {
  return {next_dn(a.lo + b.lo), next_up(a.hi + b.hi), a.ok && b.ok};
}

}  // namespace

int AlgNum::sign() const {
  if (f_ == nullptr) throw std::logic_error("AlgNum: sign of empty value");
  if (is_zero()) return 0;
  int d = f_->degree();
  if (d == 1) return sgn(num_[0]);

  // Fast path: certified double interval evaluation.
  DInterval acc{0.0, 0.0, true};
  for (int i = 0; i < d; ++i) {
    if (num_[i] == 0) continue;
    double cd = num_[i].get_d();  // truncated toward zero
    double c_lo, c_hi;
    if (mpz_sizeinbase(num_[i].get_mpz_t(), 2) <= 53) {
      c_lo = c_hi = cd;
    } else if (cd >= 0) {
      c_lo = cd;
      c_hi = next_up(cd);
    } else {
      c_lo = next_dn(cd);
      c_hi = cd;
    }
    double pl = f_->pow_lo(i), ph = f_->pow_hi(i);
    DInterval term{0, 0, true};
    if (c_lo >= 0) {
      term.lo = next_dn(c_lo * pl);
      term.hi = next_up(c_hi * ph);
    } else if (c_hi <= 0) {
      term.lo = next_dn(c_lo * ph);
      term.hi = next_up(c_hi * pl);
    } else {
      term.lo = next_dn(c_lo * ph);
      term.hi = next_up(c_hi * ph);
    }
    acc = dint_add(acc, term);
  }
  if (acc.ok && std::isfinite(acc.lo) && std::isfinite(acc.hi)) {
    if (acc.lo > 0) return 1;
    if (acc.hi < 0) return -1;
  }

  // Exact fallback: rational interval arithmetic at increasing precision.
  for (int bits = 128; bits <= (1 << 22); bits *= 2) {
    RatInterval e = f_->enclosure(bits);
    mpq_class lo(0), hi(0), pl(1), ph(1);
    for (int i = 0; i < d; ++i) {
      if (num_[i] != 0) {
        mpq_class c(num_[i]);
        if (c >= 0) {
          lo += c * pl;
          hi += c * ph;
        } else {
          lo += c * ph;
          hi += c * pl;
        }
      }
      pl *= e.lo;
      ph *= e.hi;
    }
    if (lo > 0) return 1;
    if (hi < 0) return -1;
  }
  throw std::logic_error("AlgNum: sign undecided at maximum precision");
}

RatInterval AlgNum::eval_interval(int enclosure_bits) const {
  RatInterval e = f_->enclosure(enclosure_bits);
  int d = f_->degree();
  mpq_class lo(0), hi(0), pl(1), ph(1);
  for (int i = 0; i < d; ++i) {
    if (num_[i] != 0) {
      mpq_class c(num_[i]);
      if (c >= 0) {
        lo += c * pl;
        hi += c * ph;
      } else {
        lo += c * ph;
        hi += c * pl;
      }
    }
    pl *= e.lo;
    ph *= e.hi;
  }
  mpq_class dq(den_);
  return {lo / dq, hi / dq};
}

RatInterval AlgNum::approx(int precision_bits) const {
  if (f_ == nullptr) throw std::logic_error("AlgNum: approx of empty value");
  if (precision_bits < 16)
    throw std::invalid_argument("AlgNum: approx requires >= 16 bits");
  mpz_class pw;
  mpz_ui_pow_ui(pw.get_mpz_t(), 2, precision_bits);
  mpq_class eps(1);
  eps /= mpq_class(pw);
  for (int eb = precision_bits + 8;; eb *= 2) {
    RatInterval r = eval_interval(eb);
    mpq_class mag(1);
    if (r.lo > 0 && r.lo > mag) mag = r.lo;
    if (r.hi < 0 && -r.hi > mag) mag = -r.hi;
    if (r.hi - r.lo <= eps * mag) return r;
    if (eb > (1 << 24))
      throw std::logic_error("AlgNum: approx did not converge");
  }
}

double AlgNum::to_double() const {
  if (f_ == nullptr) throw std::logic_error("AlgNum: to_double of empty value");
  if (is_zero()) return 0.0;
  if (f_->degree() == 1) return mpq_class(num_[0], den_).get_d();
  RatInterval r = approx(64);
  return r.mid().get_d();
}

std::string AlgNum::serialize() const {
  std::ostringstream out;
  for (size_t i = 0; i < num_.size(); ++i) {
    if (i) out << ',';
    out << num_[i].get_str();
  }
  if (den_ != 1) out << '/' << den_.get_str();
  return out.str();
}

std::optional<AlgNum> AlgNum::parse(const NumberField *f,
                                    const std::string &s) {
  std::string body = s, den_str = "1";
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    body = s.substr(0, slash);
    den_str = s.substr(slash + 1);
  }
  auto parse_int = [](const std::string &t, mpz_class &out) {
    std::string trimmed;
    for (char c : t)
      if (!isspace(static_cast<unsigned char>(c))) trimmed += c;
    if (trimmed.empty()) return false;
    if (mpz_set_str(out.get_mpz_t(), trimmed.c_str(), 10) != 0) return false;
    return true;
  };
  std::vector<mpz_class> coeffs;
  size_t pos = 0;
  while (pos <= body.size()) {
    auto comma = body.find(',', pos);
    std::string tok = comma == std::string::npos ? body.substr(pos)
                                                 : body.substr(pos, comma - pos);
    mpz_class v;
    if (!parse_int(tok, v)) return std::nullopt;
    coeffs.push_back(v);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  mpz_class den;
  if (!parse_int(den_str, den) || den == 0) return std::nullopt;
  if (static_cast<int>(coeffs.size()) > f->degree()) return std::nullopt;
  return AlgNum::from_coeffs(f, std::move(coeffs), den);
}

int cmp(const AlgNum &a, const AlgNum &b) { return (a - b).sign(); }

mpz_class floor_ratio(const AlgNum &num, const AlgNum &den) {
  if (den.sign() <= 0)
    throw std::invalid_argument("floor_ratio: denominator must be positive");
  const NumberField *f = num.field();
  if (f != den.field())
    throw std::invalid_argument("floor_ratio: field mismatch");
  if (f->degree() == 1) {
    mpz_class n = num.coeffs()[0] * den.den();
    mpz_class d = den.coeffs()[0] * num.den();
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
    return q;
  }
  for (int bits = 64;; bits *= 2) {
    RatInterval in = num.eval_interval(bits);
    RatInterval id = den.eval_interval(bits);
    if (!(id.lo > 0)) continue;
    mpq_class rlo = in.lo / (in.lo >= 0 ? id.hi : id.lo);
    mpq_class rhi = in.hi / (in.hi >= 0 ? id.lo : id.hi);
    mpz_class fl, fh;
    mpz_fdiv_q(fl.get_mpz_t(), rlo.get_num().get_mpz_t(),
               rlo.get_den().get_mpz_t());
    mpz_fdiv_q(fh.get_mpz_t(), rhi.get_num().get_mpz_t(),
               rhi.get_den().get_mpz_t());
    if (fl == fh) return fl;
    if (rhi - rlo < 1) {
      // The ratio straddles the integer fh; decide exactly.
      AlgNum rem = num - AlgNum::integer(f, fh) * den;
      return rem.sign() >= 0 ? fh : fl;
    }
    if (bits > (1 << 24))
      throw std::logic_error("floor_ratio: did not converge");
  }
}

}  // namespace hecke
