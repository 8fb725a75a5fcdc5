#pragma once

#include <gmpxx.h>

#include <vector>

namespace hecke {

// Dense integer polynomial, coeffs[i] is the coefficient of x^i.
// Normalized form has no trailing zero coefficients; the zero polynomial
// is the empty vector.
using IPoly = std::vector<mpz_class>;

void ip_normalize(IPoly &p);
int ip_deg(const IPoly &p);  // -1 for the zero polynomial
bool ip_is_zero(const IPoly &p);

IPoly ip_add(const IPoly &a, const IPoly &b);
IPoly ip_sub(const IPoly &a, const IPoly &b);
IPoly ip_mul(const IPoly &a, const IPoly &b);

// Exact division over Z. Returns false if b does not divide a exactly.
bool ip_div_exact(const IPoly &a, const IPoly &b, IPoly &quot);

mpq_class ip_eval(const IPoly &p, const mpq_class &x);
int ip_sign_at(const IPoly &p, const mpq_class &x);

// Number of distinct real roots of p in the open interval (lo, hi).
// Requires p(lo) != 0 and p(hi) != 0.
int ip_count_roots(const IPoly &p, const mpq_class &lo, const mpq_class &hi);

// p_n with p_0 = 0, p_1 = 1, p_{n+1} = x p_n - p_{n-1}.  Satisfies
// p_n(2 cos t) = sin(n t)/sin(t).
IPoly ip_recurrence_poly(int n);

// n-th cyclotomic polynomial, computed by the divisor sieve.
IPoly ip_cyclotomic(int n);

// Minimal polynomial of 2 cos(2 pi / n) for n >= 3 (monic, degree phi(n)/2),
// obtained by rewriting the self-reciprocal cyclotomic polynomial in the
// basis z^j + z^-j = V_j(z + 1/z).
IPoly ip_cos2pi_minpoly(int n);

}  // namespace hecke
