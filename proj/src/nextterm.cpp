#include "hecke/nextterm.hpp"

#include <stdexcept>
#include <utility>

namespace hecke {

NextTermState seed_identity(const HeckeContext &ctx, const AlgNum &tau) {
  if (cmp(tau, ctx.integer(1)) < 0)
    throw std::invalid_argument("seed_identity: tau must be >= 1");
  AlgNum a = ctx.integer(1) / tau;
  AlgNum b = ctx.integer(floor_ratio(tau, ctx.lambda())) * ctx.lambda() / tau;
  NextTermState st;
  st.ctx = &ctx;
  st.tau = tau;
  st.ftr = make_triangle_point(ctx, std::move(a), std::move(b));
  st.current = PlaneVec{ctx.integer(1), ctx.integer(0)};
  st.slope = ctx.integer(0);
  return st;
}

NextTermState seed_custom(const HeckeContext &ctx, AlgNum tau,
                          TrianglePoint ftr, PlaneVec current) {
  if (tau.sign() <= 0)
    throw std::invalid_argument("seed_custom: tau must be positive");
  if (!in_triangle(ctx, ftr.a, ftr.b))
    throw std::invalid_argument("seed_custom: ftr outside the Farey triangle");
  if (cmp(current.x, tau * ftr.a) != 0)
    throw std::invalid_argument("seed_custom: current.x != tau * ftr.a");
  NextTermState st;
  st.ctx = &ctx;
  st.slope = current.y / current.x;
  st.tau = std::move(tau);
  st.ftr = std::move(ftr);
  st.current = std::move(current);
  return st;
}

namespace {

PlaneVec apply_step(NextTermState &state, const ReturnStep &step) {
  const HeckeContext &ctx = *state.ctx;
  state.slope += step.roof / (state.tau * state.tau);
  state.ftr = step.next;
  AlgNum qn = state.tau * state.ftr.a;
  AlgNum an = qn * state.slope;
  PlaneVec next{std::move(qn), std::move(an)};
  state.n += 1;
  state.last_region = step.region;
  state.last_roof = step.roof;
  if ((state.n & (state.n - 1)) == 0) {
    // recurrence cross-check against the consecutive-wedge law
    if (cmp(wedge(state.current, next), ctx.fan(step.region).y) != 0)
      throw std::logic_error("advance: consecutive wedge law violated");
  }
  state.current = next;
  return next;
}

}  // namespace

PlaneVec advance(NextTermState &state) {
  return apply_step(state, return_step(*state.ctx, state.ftr));
}

std::vector<PlaneVec> take_until_slope(NextTermState &state,
                                       const AlgNum &slope_max) {
  std::vector<PlaneVec> out;
  const HeckeContext &ctx = *state.ctx;
  for (;;) {
    ReturnStep step = return_step(ctx, state.ftr);
    AlgNum next_slope =
        state.slope + step.roof / (state.tau * state.tau);
    if (cmp(next_slope, slope_max) > 0) return out;
    out.push_back(apply_step(state, step));
  }
}

}  // namespace hecke
