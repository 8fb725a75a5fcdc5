#pragma once

#include <vector>

#include "hecke/returnmap.hpp"

namespace hecke {

// Sweep state enumerating the strip 0 < x <= tau in ascending slope order.
// current = (q_n, a_n) is the last emitted vector; ftr is the Farey-triangle
// point driving the sweep, tied to current by q_n = tau * ftr.a.  The slope
// a_n / q_n is carried exactly and advances by roof / tau^2 per step.
struct NextTermState {
  const HeckeContext *ctx = nullptr;
  AlgNum tau;
  TrianglePoint ftr;
  PlaneVec current;
  AlgNum slope;
  long n = 0;
  int last_region = 0;  // region index consumed by the latest advance
  AlgNum last_roof;     // roof value of the latest advance
};

// Start at (1, 0) with the identity-configuration representative
// (1/tau, floor(tau/lambda) lambda / tau).  Requires tau >= 1.
NextTermState seed_identity(const HeckeContext &ctx, const AlgNum &tau);

// Caller-computed representative for a general configuration; validates
// ftr membership and the tie current.x = tau * ftr.a.
NextTermState seed_custom(const HeckeContext &ctx, AlgNum tau,
                          TrianglePoint ftr, PlaneVec current);

// One step: returns the strip element with the smallest slope strictly above
// slope(current) and moves the state onto it.  Every 2^k-th step cross-checks
// the consecutive-wedge law wedge(u_n, u_{n+1}) = y_{region}.
PlaneVec advance(NextTermState &state);

// Advances while the next slope stays <= slope_max (inclusive); returns the
// emitted vectors.  The state is left on the last emitted vector.
std::vector<PlaneVec> take_until_slope(NextTermState &state,
                                       const AlgNum &slope_max);

}  // namespace hecke
