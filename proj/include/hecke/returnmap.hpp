#pragma once

#include <optional>
#include <vector>

#include "hecke/context.hpp"

namespace hecke {

// Point of the Farey triangle: 0 < a <= 1, 1 - lambda a < b <= 1.
struct TrianglePoint {
  AlgNum a, b;
  PlaneVec vec() const { return {a, b}; }
  bool operator==(const TrianglePoint &o) const {
    return a == o.a && b == o.b;
  }
  bool operator!=(const TrianglePoint &o) const { return !(*this == o); }
};

bool in_triangle(const HeckeContext &ctx, const AlgNum &a, const AlgNum &b);

// Validating constructor; throws std::invalid_argument outside the triangle.
TrianglePoint make_triangle_point(const HeckeContext &ctx, AlgNum a, AlgNum b);

// Index i in 2..q-1 with <p, w_{i-1}> > 1 and <p, w_i> <= 1.
int region_index(const HeckeContext &ctx, const TrianglePoint &p);

// y_i / (a <p, w_i>) for i = region_index(p); the return-time roof.
AlgNum roof(const HeckeContext &ctx, const TrianglePoint &p);

// floor((1 - <p, w_{i+1}>) / (lambda <p, w_i>))
mpz_class step_jump(const HeckeContext &ctx, const TrianglePoint &p, int i);

struct ReturnStep {
  int region;       // 2..q-1
  AlgNum roof;      // > 0
  mpz_class k;      // >= 0
  TrianglePoint next;
};

// One application of the return map:
// p -> (<p, w_i>, <p, w_{i+1}> + k lambda <p, w_i>).
ReturnStep return_step(const HeckeContext &ctx, const TrianglePoint &p);

// First n steps starting at p.
std::vector<ReturnStep> orbit(const HeckeContext &ctx, const TrianglePoint &p,
                           long n);

struct PeriodicityResult {
  // Smallest T <= max_steps with exact recurrence of the starting point.
  std::optional<long> period;
  // Orbit vector whose inverse slope x/y equals b/a, found by tree descent;
  // its existence is equivalent to periodicity of (a, b).
  std::optional<PlaneVec> certificate;
};

// Exact period detection (up to max_steps) plus the periodicity criterion
// check: a Stern-Brocot descent searching for a vector of inverse slope b/a,
// abandoned once the minimum component sum of the active sector exceeds
// cert_coord_bound.
PeriodicityResult is_periodic(const HeckeContext &ctx, const TrianglePoint &p,
                              long max_steps, long cert_coord_bound = 4096);

}  // namespace hecke
