#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <gmpxx.h>

#include <vector>

#include "doctest.h"
#include "hecke/nextterm.hpp"
#include "hecke/sternbrocot.hpp"

using namespace hecke;

TEST_CASE("identity seeds") {
  SUBCASE("q = 3, tau = 5") {
    HeckeContext ctx = make_context(3);
    NextTermState st = seed_identity(ctx, ctx.integer(5));
    CHECK(st.ftr.a == ctx.rational(1, 5));
    CHECK(st.ftr.b == ctx.integer(1));
    CHECK(st.current == PlaneVec{ctx.integer(1), ctx.integer(0)});
    CHECK(st.n == 0);
  }
  SUBCASE("q = 5, tau = 1 sits on the triangle boundary") {
    HeckeContext ctx = make_context(5);
    NextTermState st = seed_identity(ctx, ctx.integer(1));
    CHECK(st.ftr.a == ctx.integer(1));
    CHECK(st.ftr.b == ctx.integer(0));
  }
  SUBCASE("q = 4, tau = 10") {
    HeckeContext ctx = make_context(4);
    NextTermState st = seed_identity(ctx, ctx.integer(10));
    CHECK(st.ftr.a == ctx.rational(1, 10));
    CHECK(st.ftr.b == ctx.integer(7) * ctx.lambda() / ctx.integer(10));
  }
  SUBCASE("tau below 1 rejected") {
    HeckeContext ctx = make_context(3);
    CHECK_THROWS_AS(seed_identity(ctx, ctx.rational(1, 2)),
                    std::invalid_argument);
  }
}

TEST_CASE("custom seeds") {
  HeckeContext ctx = make_context(3);
  SUBCASE("round trip from identity seed") {
    NextTermState id = seed_identity(ctx, ctx.integer(7));
    NextTermState st = seed_custom(ctx, id.tau, id.ftr, id.current);
    CHECK(st.ftr == id.ftr);
    CHECK(st.current == id.current);
    CHECK(st.slope == id.slope);
    // both evolve identically
    for (int i = 0; i < 10; ++i) CHECK(advance(st) == advance(id));
  }
  SUBCASE("classical Farey walk seed") {
    NextTermState st = seed_custom(
        ctx, ctx.integer(9),
        make_triangle_point(ctx, ctx.rational(1, 9), ctx.integer(1)),
        PlaneVec{ctx.integer(1), ctx.integer(0)});
    CHECK(advance(st) == PlaneVec{ctx.integer(9), ctx.integer(1)});
  }
  SUBCASE("tie violation rejected") {
    CHECK_THROWS_AS(
        seed_custom(ctx, ctx.integer(2),
                    make_triangle_point(ctx, ctx.rational(1, 2), ctx.integer(1)),
                    PlaneVec{ctx.integer(2), ctx.integer(0)}),
        std::invalid_argument);
  }
  SUBCASE("ftr outside the triangle rejected") {
    TrianglePoint bad;
    bad.a = ctx.integer(2);
    bad.b = ctx.integer(1);
    CHECK_THROWS_AS(seed_custom(ctx, ctx.integer(2), bad,
                                PlaneVec{ctx.integer(4), ctx.integer(0)}),
                    std::invalid_argument);
  }
}

TEST_CASE("q = 3 sweep walks the Farey fractions of level 5") {
  HeckeContext ctx = make_context(3);
  NextTermState st = seed_identity(ctx, ctx.integer(5));
  long xs[] = {5, 4, 3, 5, 2, 5, 3, 4, 5, 1};
  long ys[] = {1, 1, 1, 2, 1, 3, 2, 3, 4, 1};
  for (int i = 0; i < 10; ++i) {
    PlaneVec v = advance(st);
    CHECK(v.x == ctx.integer(xs[i]));
    CHECK(v.y == ctx.integer(ys[i]));
  }
  // the walk continues past slope 1
  PlaneVec v = advance(st);
  CHECK(v == PlaneVec{ctx.integer(5), ctx.integer(6)});
}

TEST_CASE("per-step invariants") {
  for (int q : {3, 4, 5, 6}) {
    HeckeContext ctx = make_context(q);
    AlgNum tau = ctx.integer(12);
    NextTermState st = seed_identity(ctx, tau);
    for (int i = 0; i < 60; ++i) {
      TrianglePoint before = st.ftr;
      AlgNum slope_before = st.slope;
      PlaneVec prev = st.current;
      AlgNum r = roof(ctx, before);
      int reg = region_index(ctx, before);
      PlaneVec v = advance(st);
      // FTR tie
      CHECK(st.current.x == tau * st.ftr.a);
      // telescoping slope gap
      CHECK(st.slope - slope_before == r / (tau * tau));
      CHECK(st.slope == v.y / v.x);
      // consecutive wedge law at every step
      CHECK(wedge(prev, v) == ctx.fan(reg).y);
      CHECK(st.last_region == reg);
      // strip membership
      CHECK(v.x.sign() > 0);
      CHECK(cmp(v.x, tau) <= 0);
    }
  }
}

TEST_CASE("take_until_slope semantics") {
  HeckeContext ctx = make_context(5);
  SUBCASE("empty when the bound is the current slope") {
    NextTermState st = seed_identity(ctx, ctx.integer(10));
    CHECK(take_until_slope(st, st.slope).empty());
    CHECK(st.n == 0);
  }
  SUBCASE("inclusive upper end") {
    NextTermState st = seed_identity(ctx, ctx.integer(10));
    auto got = take_until_slope(st, ctx.integer(1));
    REQUIRE(!got.empty());
    // last emitted slope is exactly 1 when a slope-1 vector exists in range
    CHECK(st.slope == ctx.integer(1));
    for (const PlaneVec &v : got) CHECK(cmp(v.y, v.x) <= 0);
  }
}

TEST_CASE("sweep equals strip enumeration, set and order") {
  for (int q : {3, 4, 5, 6, 7, 8}) {
    HeckeContext ctx = make_context(q);
    for (long tau : {10L, 25L, 50L}) {
      NextTermState st = seed_identity(ctx, ctx.integer(tau));
      std::vector<PlaneVec> sweep;
      sweep.push_back(st.current);
      for (PlaneVec &v : take_until_slope(st, ctx.integer(1)))
        sweep.push_back(std::move(v));

      StripSpec spec;
      spec.tau = ctx.integer(tau);
      spec.slope_lo = ctx.integer(0);
      spec.slope_hi = ctx.integer(1);
      std::vector<PlaneVec> tree = enumerate_strip(ctx, spec);

      REQUIRE(sweep.size() == tree.size());
      for (size_t i = 0; i < tree.size(); ++i) CHECK(sweep[i] == tree[i]);
    }
  }
}
