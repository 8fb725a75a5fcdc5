#include "hecke/returnmap.hpp"

#include <cassert>
#include <stdexcept>
#include <utility>

namespace hecke {

bool in_triangle(const HeckeContext &ctx, const AlgNum &a, const AlgNum &b) {
  const AlgNum one = ctx.integer(1);
  if (a.sign() <= 0) return false;
  if (cmp(a, one) > 0) return false;
  if (cmp(b, one) > 0) return false;
  // bottom edge excluded: b > 1 - lambda a
  AlgNum floor_edge = one - ctx.lambda() * a;
  return cmp(b, floor_edge) > 0;
}

TrianglePoint make_triangle_point(const HeckeContext &ctx, AlgNum a, AlgNum b) {
  if (!in_triangle(ctx, a, b))
    throw std::invalid_argument("make_triangle_point: point outside the Farey triangle");
  return TrianglePoint{std::move(a), std::move(b)};
}

int region_index(const HeckeContext &ctx, const TrianglePoint &p) {
  const AlgNum one = ctx.integer(1);
  const PlaneVec v = p.vec();
  // Membership gives <p, w_1> > 1; the scan returns the first drop below 1.
  for (int i = 2; i <= ctx.q() - 1; ++i) {
    if (cmp(dot(v, ctx.fan(i)), one) <= 0) return i;
  }
  throw std::logic_error("region_index: scan failed, point not in the triangle");
}

AlgNum roof(const HeckeContext &ctx, const TrianglePoint &p) {
  int i = region_index(ctx, p);
  return ctx.fan(i).y / (p.a * dot(p.vec(), ctx.fan(i)));
}

mpz_class step_jump(const HeckeContext &ctx, const TrianglePoint &p, int i) {
  AlgNum di = dot(p.vec(), ctx.fan(i));
  AlgNum di1 = dot(p.vec(), ctx.fan(i + 1));
  return floor_ratio(ctx.integer(1) - di1, ctx.lambda() * di);
}

ReturnStep return_step(const HeckeContext &ctx, const TrianglePoint &p) {
  int i = region_index(ctx, p);
  AlgNum di = dot(p.vec(), ctx.fan(i));
  AlgNum di1 = dot(p.vec(), ctx.fan(i + 1));
  mpz_class k = floor_ratio(ctx.integer(1) - di1, ctx.lambda() * di);
  assert(sgn(k) >= 0);
  AlgNum next_a = di;
  AlgNum next_b = di1 + ctx.integer(k) * ctx.lambda() * di;
  if (!in_triangle(ctx, next_a, next_b))
    throw std::logic_error("return_step: image left the triangle");
  AlgNum r = ctx.fan(i).y / (p.a * di);
  return ReturnStep{i, std::move(r), std::move(k),
                 TrianglePoint{std::move(next_a), std::move(next_b)}};
}

std::vector<ReturnStep> orbit(const HeckeContext &ctx, const TrianglePoint &p,
                           long n) {
  std::vector<ReturnStep> out;
  out.reserve(n > 0 ? static_cast<size_t>(n) : 0);
  TrianglePoint cur = p;
  for (long s = 0; s < n; ++s) {
    out.push_back(return_step(ctx, cur));
    cur = out.back().next;
  }
  return out;
}

namespace {

// Search the slope tree for an orbit vector parallel to target, which must
// point into the open first quadrant (both components positive).  Returns
// nothing once every vector of the active sector has component sum above
// the bound.
std::optional<PlaneVec> descend_for_direction(const HeckeContext &ctx,
                                              const PlaneVec &target,
                                              long bound) {
  const int q = ctx.q();
  const AlgNum limit = ctx.integer(bound);
  PlaneVec u0{ctx.integer(1), ctx.integer(0)};
  PlaneVec u1{ctx.integer(0), ctx.integer(1)};
  for (;;) {
    if (cmp(u0.x + u0.y + u1.x + u1.y, limit) > 0) return std::nullopt;
    // q-2 children split the sector into q-1 slope-ordered slices
    std::vector<PlaneVec> s;
    s.reserve(q);
    s.push_back(u0);
    for (int i = 1; i <= q - 2; ++i) {
      const PlaneVec &w = ctx.fan(i);
      s.push_back(scale(w.x, u0) + scale(w.y, u1));
    }
    s.push_back(u1);
    bool advanced = false;
    for (int j = 0; j + 1 < (int)s.size(); ++j) {
      int lo = wedge(s[j], target).sign();
      if (lo == 0) return s[j];
      if (lo < 0) continue;
      int hi = wedge(target, s[j + 1]).sign();
      if (hi == 0) return s[j + 1];
      if (hi < 0) continue;
      u0 = s[j];
      u1 = s[j + 1];
      advanced = true;
      break;
    }
    if (!advanced)
      throw std::logic_error("descend_for_direction: target escaped the sector");
  }
}

}  // namespace

PeriodicityResult is_periodic(const HeckeContext &ctx, const TrianglePoint &p,
                              long max_steps, long cert_coord_bound) {
  PeriodicityResult res;
  TrianglePoint cur = p;
  for (long s = 1; s <= max_steps; ++s) {
    cur = return_step(ctx, cur).next;
    if (cur == p) {
      res.period = s;
      break;
    }
  }
  // Periodicity criterion: (a, b) returns exactly iff some orbit vector has
  // inverse slope b/a.  Reduce to a first-quadrant direction search; the
  // rotation (x, y) -> (-y, x) maps orbit vectors to orbit vectors.
  int sb = p.b.sign();
  if (sb == 0) {
    res.certificate = PlaneVec{ctx.integer(0), ctx.integer(1)};
  } else if (sb > 0) {
    auto cert = descend_for_direction(ctx, PlaneVec{p.b, p.a}, cert_coord_bound);
    if (cert) res.certificate = *cert;
  } else {
    // target (b, a) with b < 0: rotate to (a, -b), rotate any hit back
    auto cert =
        descend_for_direction(ctx, PlaneVec{p.a, -p.b}, cert_coord_bound);
    if (cert) res.certificate = PlaneVec{-cert->y, cert->x};
  }
  return res;
}

}  // namespace hecke
