#include "hecke/intpoly.hpp"

#include <stdexcept>

namespace hecke {

void ip_normalize(IPoly &p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

int ip_deg(const IPoly &p) { return static_cast<int>(p.size()) - 1; }

bool ip_is_zero(const IPoly &p) { return p.empty(); }

IPoly ip_add(const IPoly &a, const IPoly &b) {
  IPoly r(std::max(a.size(), b.size()));
  for (size_t i = 0; i < r.size(); ++i) {
    if (i < a.size()) r[i] += a[i];
    if (i < b.size()) r[i] += b[i];
  }
  ip_normalize(r);
  return r;
}

IPoly ip_sub(const IPoly &a, const IPoly &b) {
  IPoly r(std::max(a.size(), b.size()));
  for (size_t i = 0; i < r.size(); ++i) {
    if (i < a.size()) r[i] += a[i];
    if (i < b.size()) r[i] -= b[i];
  }
  ip_normalize(r);
  return r;
}

IPoly ip_mul(const IPoly &a, const IPoly &b) {
  if (a.empty() || b.empty()) return {};
  IPoly r(a.size() + b.size() - 1);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  ip_normalize(r);
  return r;
}

bool ip_div_exact(const IPoly &a, const IPoly &b, IPoly &quot) {
  quot.clear();
  if (b.empty()) return false;
  IPoly rem = a;
  ip_normalize(rem);
  int db = ip_deg(b);
  const mpz_class &lead = b[db];
  if (ip_deg(rem) < db) return rem.empty();
  quot.assign(rem.size() - db, 0);
  for (int k = ip_deg(rem) - db; k >= 0; --k) {
    mpz_class c = rem[k + db];
    if (c == 0) continue;
    mpz_class qc, rr;
    mpz_fdiv_qr(qc.get_mpz_t(), rr.get_mpz_t(), c.get_mpz_t(),
                lead.get_mpz_t());
    if (rr != 0) return false;
    quot[k] = qc;
    for (int j = 0; j <= db; ++j) rem[k + j] -= qc * b[j];
  }
  ip_normalize(rem);
  ip_normalize(quot);
  return rem.empty();
}

mpq_class ip_eval(const IPoly &p, const mpq_class &x) {
  mpq_class v = 0;
  for (int i = ip_deg(p); i >= 0; --i) v = v * x + mpq_class(p[i]);
  return v;
}

int ip_sign_at(const IPoly &p, const mpq_class &x) {
  mpq_class v = ip_eval(p, x);
  return sgn(v);
}

namespace {

using QPoly = std::vector<mpq_class>;

void qp_normalize(QPoly &p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

// Remainder of polynomial division a mod b over Q.
QPoly qp_rem(QPoly a, const QPoly &b) {
  qp_normalize(a);
  int db = static_cast<int>(b.size()) - 1;
  while (static_cast<int>(a.size()) - 1 >= db) {
    mpq_class c = a.back() / b[db];
    int shift = static_cast<int>(a.size()) - 1 - db;
    for (int j = 0; j <= db; ++j) a[shift + j] -= c * b[j];
    qp_normalize(a);
    if (a.empty()) break;
  }
  return a;
}

mpq_class qp_eval(const QPoly &p, const mpq_class &x) {
  mpq_class v = 0;
  for (int i = static_cast<int>(p.size()) - 1; i >= 0; --i)
    v = v * x + p[i];
  return v;
}

int sturm_variations(const std::vector<QPoly> &chain, const mpq_class &x) {
  int var = 0, prev = 0;
  for (const auto &f : chain) {
    int s = sgn(qp_eval(f, x));
    if (s == 0) continue;
    if (prev != 0 && s != prev) ++var;
    prev = s;
  }
  return var;
}

}  // namespace

int ip_count_roots(const IPoly &p, const mpq_class &lo, const mpq_class &hi) {
  if (ip_sign_at(p, lo) == 0 || ip_sign_at(p, hi) == 0)
    throw std::invalid_argument("ip_count_roots: endpoint is a root");
  if (!(lo < hi)) return 0;
  QPoly f0(p.size());
  for (size_t i = 0; i < p.size(); ++i) f0[i] = mpq_class(p[i]);
  QPoly f1(p.size() > 1 ? p.size() - 1 : 0);
  for (size_t i = 1; i < p.size(); ++i)
    f1[i - 1] = mpq_class(p[i]) * static_cast<long>(i);
  std::vector<QPoly> chain;
  chain.push_back(f0);
  qp_normalize(chain.back());
  chain.push_back(f1);
  qp_normalize(chain.back());
  while (!chain.back().empty() && chain.back().size() > 1) {
    QPoly r = qp_rem(chain[chain.size() - 2], chain.back());
    for (auto &c : r) c = -c;
    qp_normalize(r);
    if (r.empty()) break;
    chain.push_back(std::move(r));
  }
  return sturm_variations(chain, lo) - sturm_variations(chain, hi);
}

IPoly ip_recurrence_poly(int n) {
  if (n < 0) throw std::invalid_argument("ip_recurrence_poly: n < 0");
  IPoly prev = {};      // p_0
  IPoly cur = {1};      // p_1
  if (n == 0) return prev;
  const IPoly x = {0, 1};
  for (int i = 1; i < n; ++i) {
    IPoly next = ip_sub(ip_mul(x, cur), prev);
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

IPoly ip_cyclotomic(int n) {
  if (n < 1) throw std::invalid_argument("ip_cyclotomic: n < 1");
  // z^n - 1 divided by the product of cyclotomics at proper divisors.
  IPoly num(n + 1);
  num[0] = -1;
  num[n] = 1;
  for (int d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    IPoly cd = ip_cyclotomic(d);
    IPoly q;
    if (!ip_div_exact(num, cd, q))
      throw std::logic_error("ip_cyclotomic: sieve division not exact");
    num = std::move(q);
  }
  return num;
}

IPoly ip_cos2pi_minpoly(int n) {
  if (n < 3) throw std::invalid_argument("ip_cos2pi_minpoly: n < 3");
  IPoly phi = ip_cyclotomic(n);
  int m = ip_deg(phi) / 2;
  // V_j with V_j(2 cos t) = 2 cos(j t): V_0 = 2, V_1 = x, V_{j+1} = x V_j - V_{j-1}.
  std::vector<IPoly> V(m + 1);
  V[0] = {2};
  if (m >= 1) V[1] = {0, 1};
  const IPoly x = {0, 1};
  for (int j = 2; j <= m; ++j) V[j] = ip_sub(ip_mul(x, V[j - 1]), V[j - 2]);
  // phi is self-reciprocal for n >= 3, so z^-m phi(z) = phi_m + sum_j phi_{m+j} (z^j + z^-j).
  IPoly psi = {phi[m]};
  for (int j = 1; j <= m; ++j)
    psi = ip_add(psi, ip_mul(IPoly{phi[m + j]}, V[j]));
  ip_normalize(psi);
  return psi;
}

}  // namespace hecke
