#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "hecke/context.hpp"

namespace hecke {

struct UnimodularPair {
  PlaneVec u0, u1;  // wedge(u0, u1) = 1
};

// The q-2 tree children x_i u0 + y_i u1, (x_i, y_i) = w_i for i = 1..q-2.
// Consecutive vectors of the extended list (u0, children..., u1) form
// unimodular pairs again.  Throws std::invalid_argument unless the pair is
// unimodular.
std::vector<PlaneVec> children(const HeckeContext &ctx,
                               const UnimodularPair &pair);

// Vertical strip 0 < x <= tau intersected with the closed slope interval
// [slope_lo, slope_hi].  An absent bound means the interval is unbounded on
// that side; enumerate_strip rejects those, since the parabolic chains
// (x, y + k lambda x) make every such strip infinite.
struct StripSpec {
  AlgNum tau;
  std::optional<AlgNum> slope_lo, slope_hi;
};

// Exactly the orbit vectors with 0 < x <= tau and slope_lo <= y/x <= slope_hi,
// emitted in strictly ascending slope order.  Depth-first over the slope tree
// with sector pruning: a sector is entered only when its open slope range
// meets the interval and x(u0) + x(u1) <= tau (every proper descendant is
// alpha u0 + beta u1 with alpha, beta >= 1).  Slope intervals reaching below
// zero are served through the y -> -y symmetry of the orbit.
void enumerate_strip(const HeckeContext &ctx, const StripSpec &spec,
                     const std::function<void(const PlaneVec &)> &emit);
std::vector<PlaneVec> enumerate_strip(const HeckeContext &ctx,
                                      const StripSpec &spec);

struct DirichletResult {
  // vectors (x, y), strictly increasing x, each with |alpha - y/x| <= 1/(2x^2)
  std::vector<PlaneVec> approximants;
  // set when alpha is exactly the slope of a generated vector
  std::optional<PlaneVec> exact_vector;
};

// Descend the tree through the sectors containing direction (1, alpha),
// alpha >= 0, collecting approximants until `count` are found or the exact
// slope is hit.
DirichletResult dirichlet_descent(const HeckeContext &ctx, const AlgNum &alpha,
                                  long count);

}  // namespace hecke
