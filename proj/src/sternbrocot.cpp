#include "hecke/sternbrocot.hpp"

#include <stdexcept>
#include <utility>

namespace hecke {

std::vector<PlaneVec> children(const HeckeContext &ctx,
                               const UnimodularPair &pair) {
  if (cmp(wedge(pair.u0, pair.u1), ctx.integer(1)) != 0)
    throw std::invalid_argument("children: pair is not unimodular");
  std::vector<PlaneVec> out;
  out.reserve(ctx.q() - 2);
  for (int i = 1; i <= ctx.q() - 2; ++i) {
    const PlaneVec &w = ctx.fan(i);
    out.push_back(scale(w.x, pair.u0) + scale(w.y, pair.u1));
  }
  return out;
}

namespace {

// slope(u) - s has the sign of wedge((1, s), u) for x(u) > 0; the convention
// extends to the vertical (0, 1), whose slope compares above every s.
int slope_cmp(const PlaneVec &u, const AlgNum &s) {
  return (u.y - s * u.x).sign();
}

struct StripWalk {
  const HeckeContext &ctx;
  const AlgNum &tau;
  const AlgNum &lo;
  const AlgNum &hi;
  const std::function<void(const PlaneVec &)> &emit;

  void visit(const PlaneVec &u0, const PlaneVec &u1) {
    // every proper descendant has x >= x(u0) + x(u1)
    if (cmp(u0.x + u1.x, tau) > 0) return;
    std::vector<PlaneVec> ext;
    ext.reserve(ctx.q());
    ext.push_back(u0);
    for (int i = 1; i <= ctx.q() - 2; ++i) {
      const PlaneVec &w = ctx.fan(i);
      ext.push_back(scale(w.x, u0) + scale(w.y, u1));
    }
    ext.push_back(u1);
    // in-order walk keeps the emission sorted by slope
    for (int j = 0; j + 1 < (int)ext.size(); ++j) {
      // proper descendants of the sector have slopes strictly between the
      // endpoints; skip when that open range misses [lo, hi]
      bool enter = slope_cmp(ext[j + 1], lo) > 0 && slope_cmp(ext[j], hi) < 0;
      if (enter) visit(ext[j], ext[j + 1]);
      if (j + 1 <= ctx.q() - 2) {
        const PlaneVec &kid = ext[j + 1];
        if (cmp(kid.x, tau) <= 0 && slope_cmp(kid, lo) >= 0 &&
            slope_cmp(kid, hi) <= 0)
          emit(kid);
      }
    }
  }
};

// ascending enumeration over 0 <= lo <= hi
void enumerate_nonneg(const HeckeContext &ctx, const AlgNum &tau,
                      const AlgNum &lo, const AlgNum &hi, bool skip_axis,
                      const std::function<void(const PlaneVec &)> &emit) {
  AlgNum one = ctx.integer(1);
  if (lo.sign() == 0 && !skip_axis && cmp(one, tau) <= 0)
    emit(PlaneVec{one, ctx.integer(0)});
  StripWalk walk{ctx, tau, lo, hi, emit};
  walk.visit(PlaneVec{one, ctx.integer(0)},
             PlaneVec{ctx.integer(0), one});
}

}  // namespace

void enumerate_strip(const HeckeContext &ctx, const StripSpec &spec,
                     const std::function<void(const PlaneVec &)> &emit) {
  if (spec.tau.sign() <= 0)
    throw std::invalid_argument("enumerate_strip: tau must be positive");
  if (!spec.slope_lo || !spec.slope_hi)
    throw std::invalid_argument(
        "enumerate_strip: unbounded slope intervals give infinite strips "
        "(parabolic chains (x, y + k lambda x)); pass finite bounds");
  const AlgNum &lo = *spec.slope_lo;
  const AlgNum &hi = *spec.slope_hi;
  if (cmp(lo, hi) > 0)
    throw std::invalid_argument("enumerate_strip: slope_lo > slope_hi");

  if (hi.sign() < 0) {
    // entirely negative: reflect, enumerate, replay reversed
    std::vector<PlaneVec> tmp;
    enumerate_nonneg(ctx, spec.tau, -hi, -lo, false,
                     [&](const PlaneVec &v) { tmp.push_back(v); });
    for (auto it = tmp.rbegin(); it != tmp.rend(); ++it)
      emit(PlaneVec{it->x, -it->y});
    return;
  }
  if (lo.sign() < 0) {
    std::vector<PlaneVec> tmp;
    // the x-axis vector belongs to the nonnegative half; skip it here
    enumerate_nonneg(ctx, spec.tau, ctx.integer(0), -lo, true,
                     [&](const PlaneVec &v) { tmp.push_back(v); });
    for (auto it = tmp.rbegin(); it != tmp.rend(); ++it)
      emit(PlaneVec{it->x, -it->y});
    enumerate_nonneg(ctx, spec.tau, ctx.integer(0), hi, false, emit);
    return;
  }
  enumerate_nonneg(ctx, spec.tau, lo, hi, false, emit);
}

std::vector<PlaneVec> enumerate_strip(const HeckeContext &ctx,
                                      const StripSpec &spec) {
  std::vector<PlaneVec> out;
  enumerate_strip(ctx, spec, [&](const PlaneVec &v) { out.push_back(v); });
  return out;
}

DirichletResult dirichlet_descent(const HeckeContext &ctx, const AlgNum &alpha,
                                  long count) {
  if (count < 1) throw std::invalid_argument("dirichlet_descent: count < 1");
  if (alpha.sign() < 0)
    throw std::invalid_argument("dirichlet_descent: alpha must be >= 0");

  DirichletResult res;
  const PlaneVec target{ctx.integer(1), alpha};
  AlgNum one = ctx.integer(1);
  AlgNum two = ctx.integer(2);
  AlgNum last_x = ctx.integer(0);

  // |alpha - y/x| <= 1/(2x^2), i.e. 2x|y - alpha x| <= 1
  auto passes = [&](const PlaneVec &v) {
    AlgNum dev = v.y - alpha * v.x;
    if (dev.sign() < 0) dev = -dev;
    return cmp(two * v.x * dev, one) <= 0;
  };
  auto consider = [&](const PlaneVec &v) {
    if ((long)res.approximants.size() >= count) return;
    if (cmp(v.x, last_x) <= 0) return;
    if (passes(v)) {
      res.approximants.push_back(v);
      last_x = v.x;
    }
  };

  PlaneVec u0{one, ctx.integer(0)};
  PlaneVec u1{ctx.integer(0), one};
  if (alpha.sign() == 0) {
    res.exact_vector = u0;
    return res;
  }
  consider(u0);

  for (long level = 0; level < 1000000; ++level) {
    if ((long)res.approximants.size() >= count) return res;
    std::vector<PlaneVec> ext;
    ext.reserve(ctx.q());
    ext.push_back(u0);
    for (int i = 1; i <= ctx.q() - 2; ++i) {
      const PlaneVec &w = ctx.fan(i);
      ext.push_back(scale(w.x, u0) + scale(w.y, u1));
    }
    ext.push_back(u1);
    bool advanced = false;
    for (int j = 0; j + 1 < (int)ext.size(); ++j) {
      int s_lo = wedge(ext[j], target).sign();
      if (s_lo == 0) {
        res.exact_vector = ext[j];
        return res;
      }
      if (s_lo < 0) continue;
      int s_hi = wedge(target, ext[j + 1]).sign();
      if (s_hi == 0) {
        res.exact_vector = ext[j + 1];
        return res;
      }
      if (s_hi < 0) continue;
      // the new vectors of this level, low slope to high
      for (int i = 1; i <= ctx.q() - 2; ++i) consider(ext[i]);
      u0 = ext[j];
      u1 = ext[j + 1];
      advanced = true;
      break;
    }
    if (!advanced)
      throw std::logic_error("dirichlet_descent: target escaped the sector");
  }
  throw std::logic_error("dirichlet_descent: iteration budget exhausted");
}

}  // namespace hecke
