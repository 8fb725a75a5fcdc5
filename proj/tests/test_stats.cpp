#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "hecke/stats.hpp"

using namespace hecke;

namespace {

constexpr double kPi = 3.14159265358979323846;

// mean roof values, frozen from a 40-digit multiprecision evaluation of the
// per-region log integrals (the q = 3 case agrees with pi^2/3 to 40 digits,
// which pins down the reduction itself)
constexpr double kMeanRoof[9] = {0, 0, 0,
                                 3.2898681336964528729,   // = pi^2/3
                                 3.4894320998194397671,
                                 3.6598505852332640075,
                                 3.7988125051760375811,
                                 3.9122980163356059426,
                                 4.0060435588914772775};

// q = 3 slope-gap tails P(R > t) from the closed-form hyperbola-triangle
// intersection area, checked against direct numerical integration
constexpr double kTail3[3][2] = {{2, 0.6931471805599453},   // = log 2
                                 {5, 0.1060193004259153},
                                 {10, 0.0224262740611804}};

std::vector<long> totients(long n) {
  std::vector<long> phi(n + 1);
  std::iota(phi.begin(), phi.end(), 0);
  for (long p = 2; p <= n; ++p)
    if (phi[p] == p)
      for (long k = p; k <= n; k += p) phi[k] -= phi[k] / p;
  return phi;
}

bool same_bits(const std::vector<double> &a, const std::vector<double> &b) {
  return a.size() == b.size() &&
         (a.empty() ||
          std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
}

std::vector<double> grid_to(double hi, double step) {
  std::vector<double> g;
  for (double t = 0; t <= hi + 1e-12; t += step) g.push_back(t);
  return g;
}

}  // namespace

TEST_CASE("mean roof quadrature") {
  SUBCASE("q = 3 equals pi^2/3") {
    HeckeContext ctx = make_context(3);
    MeanRoofResult r = mean_roof_quadrature(ctx, 1e-10);
    CHECK(std::abs(r.value - kPi * kPi / 3) < 1e-9);
    CHECK(r.error_bound < 1e-6);
    CHECK(r.tail_bias == 0);
  }
  SUBCASE("q = 4..8 against frozen references") {
    for (int q = 4; q <= 8; ++q) {
      HeckeContext ctx = make_context(q);
      MeanRoofResult r = mean_roof_quadrature(ctx, 1e-10);
      CAPTURE(q);
      CHECK(std::abs(r.value - kMeanRoof[q]) < 1e-8);
      CHECK(r.value > 0);
    }
  }
  SUBCASE("mean roof grows with q") {
    // heavier tails as the fan widens
    double prev = 0;
    for (int q = 3; q <= 8; ++q) {
      HeckeContext ctx = make_context(q);
      double v = mean_roof_quadrature(ctx, 1e-8).value;
      CHECK(v > prev);
      prev = v;
    }
  }
  SUBCASE("bad tolerance") {
    HeckeContext ctx = make_context(3);
    CHECK_THROWS_AS(mean_roof_quadrature(ctx, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(mean_roof_quadrature(ctx, -1.0), std::invalid_argument);
  }
}

TEST_CASE("mean roof Monte Carlo") {
  SUBCASE("q = 3 within its own error bound") {
    HeckeContext ctx = make_context(3);
    MeanRoofResult r = mean_roof_montecarlo(ctx, 10'000'000, 20240817);
    CHECK(r.samples >= 10'000'000);
    CHECK(std::abs(r.value - kPi * kPi / 3) <= r.error_bound);
    CHECK(r.stat_error > 0);
    CHECK(r.tail_bias > 0);
  }
  SUBCASE("q = 5 two-method agreement") {
    HeckeContext ctx = make_context(5);
    MeanRoofResult quad = mean_roof_quadrature(ctx, 1e-9);
    MeanRoofResult mc = mean_roof_montecarlo(ctx, 10'000'000, 7);
    CHECK(std::abs(quad.value - mc.value) <=
          quad.error_bound + mc.error_bound);
  }
  SUBCASE("deterministic in (seed, n), independent of thread count") {
    HeckeContext ctx = make_context(5);
    MeanRoofResult a = mean_roof_montecarlo(ctx, 50'000, 99, 1e3, 1);
    MeanRoofResult b = mean_roof_montecarlo(ctx, 50'000, 99, 1e3, 4);
    MeanRoofResult c = mean_roof_montecarlo(ctx, 50'000, 99, 1e3, 3);
    CHECK(std::memcmp(&a.value, &b.value, sizeof a.value) == 0);
    CHECK(std::memcmp(&a.value, &c.value, sizeof a.value) == 0);
    CHECK(a.samples == b.samples);
    CHECK(a.stat_error == b.stat_error);
    MeanRoofResult d = mean_roof_montecarlo(ctx, 50'000, 100, 1e3, 1);
    CHECK(d.value != a.value);  // the seed does feed through
  }
  SUBCASE("preconditions") {
    HeckeContext ctx = make_context(3);
    CHECK_THROWS_AS(mean_roof_montecarlo(ctx, 9999, 1), std::invalid_argument);
    CHECK_THROWS_AS(mean_roof_montecarlo(ctx, 20000, 1, 50.0),
                    std::invalid_argument);
  }
}

TEST_CASE("limiting distributions") {
  SUBCASE("q = 3 slope gap tail against the hyperbola-area oracle") {
    HeckeContext ctx = make_context(3);
    std::vector<double> g{0, 2, 5, 10};
    DistTable t = limiting_dist(ctx, Statistic::slope_gap, g, 1'000'000, 42);
    CHECK(t.value[0] == 1.0);
    for (int j = 0; j < 3; ++j) {
      CAPTURE(kTail3[j][0]);
      CHECK(std::abs(t.value[j + 1] - kTail3[j][1]) < 4e-3);
    }
    CHECK(t.samples >= 1'000'000);
    CHECK(t.kind == "limiting");
    CHECK(t.statistic == "slope_gap");
    CHECK(t.std_error > 0);
    CHECK(t.std_error < 1e-3);
  }
  SUBCASE("monotone, 1 at t = 0, cent_dist dominates slope_gap") {
    for (int q : {3, 5}) {
      HeckeContext ctx = make_context(q);
      std::vector<double> g = grid_to(6.0, 0.25);
      DistTable r = limiting_dist(ctx, Statistic::slope_gap, g, 200'000, 11);
      DistTable f = limiting_dist(ctx, Statistic::cent_dist, g, 200'000, 11);
      CAPTURE(q);
      CHECK(r.value[0] == 1.0);
      CHECK(f.value[0] == 1.0);
      for (size_t j = 1; j < g.size(); ++j) {
        CHECK(r.value[j] <= r.value[j - 1]);
        CHECK(f.value[j] <= f.value[j - 1]);
        CHECK(f.value[j] >= r.value[j]);  // F >= R pointwise per sample
      }
    }
  }
  SUBCASE("deterministic across thread counts") {
    HeckeContext ctx = make_context(5);
    std::vector<double> g = grid_to(4.0, 0.5);
    DistTable a = limiting_dist(ctx, Statistic::cent_dist, g, 60'000, 5, 1);
    DistTable b = limiting_dist(ctx, Statistic::cent_dist, g, 60'000, 5, 4);
    CHECK(same_bits(a.value, b.value));
    CHECK(a.samples == b.samples);
  }
  SUBCASE("preconditions") {
    HeckeContext ctx = make_context(3);
    std::vector<double> good{0, 1};
    CHECK_THROWS_AS(limiting_dist(ctx, Statistic::slope_gap, good, 100, 1),
                    std::invalid_argument);
    std::vector<double> unsorted{1, 0.5};
    CHECK_THROWS_AS(
        limiting_dist(ctx, Statistic::slope_gap, unsorted, 20000, 1),
        std::invalid_argument);
    std::vector<double> neg{-1, 0};
    CHECK_THROWS_AS(limiting_dist(ctx, Statistic::slope_gap, neg, 20000, 1),
                    std::invalid_argument);
  }
}

TEST_CASE("exact sweep statistics") {
  SUBCASE("q = 3 full interval matches the totient count") {
    HeckeContext ctx = make_context(3);
    long tau = 30;
    SweepStats s = sweep_interval(ctx, ctx.integer(tau), ctx.integer(0),
                                  ctx.integer(1));
    std::vector<long> phi = totients(tau);
    long expect = 1;  // seed (1,0) plus phi(k) vectors per denominator
    for (long k = 1; k <= tau; ++k) expect += phi[k];
    CHECK(s.count == expect);
    CHECK((long)s.slopes.size() == s.count);
    CHECK((long)s.roofs.size() == s.count - 1);
    CHECK((long)s.cdists.size() == s.count - 1);
  }
  SUBCASE("per-step identities") {
    HeckeContext ctx = make_context(5);
    double tau = 12;
    SweepStats s = sweep_interval(ctx, ctx.integer(12), ctx.integer(0),
                                  ctx.integer(1));
    REQUIRE(s.count >= 3);
    CHECK(std::is_sorted(s.slopes.begin(), s.slopes.end()));
    CHECK(s.slopes.front() == 0.0);
    CHECK(s.slopes.back() == 1.0);
    for (size_t k = 0; k + 1 < s.slopes.size(); ++k) {
      // roof = tau^2 * slope gap (telescoping), center distances dominate
      double gap = (s.slopes[k + 1] - s.slopes[k]) * tau * tau;
      CHECK(s.roofs[k] == doctest::Approx(gap).epsilon(1e-9));
      CHECK(s.roofs[k] >= 1.0);
      CHECK(s.cdists[k] >= s.roofs[k]);
    }
  }
  SUBCASE("sub-interval agrees with a filtered strip enumeration") {
    HeckeContext ctx = make_context(4);
    AlgNum lo = ctx.rational(1, 3), hi = ctx.rational(2, 3);
    SweepStats s = sweep_interval(ctx, ctx.integer(20), lo, hi);
    std::vector<PlaneVec> direct =
        enumerate_strip(ctx, StripSpec{ctx.integer(20), lo, hi});
    CHECK(s.count == (long)direct.size());
    CHECK((long)s.roofs.size() == s.count - 1);
  }
  SUBCASE("count-only mode skips value collection") {
    HeckeContext ctx = make_context(3);
    SweepStats s = sweep_interval(ctx, ctx.integer(15), ctx.integer(0),
                                  ctx.integer(1), false);
    CHECK(s.count > 0);
    CHECK(s.slopes.empty());
    CHECK(s.roofs.empty());
  }
  SUBCASE("bad interval") {
    HeckeContext ctx = make_context(3);
    CHECK_THROWS_AS(sweep_interval(ctx, ctx.integer(5), ctx.integer(1),
                                   ctx.integer(0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(sweep_interval(ctx, ctx.integer(5), ctx.integer(-1),
                                   ctx.integer(1)),
                    std::invalid_argument);
  }
}

TEST_CASE("empirical tables and convergence") {
  SUBCASE("q = 3, tau = 500 close to the limiting table") {
    HeckeContext ctx = make_context(3);
    std::vector<double> g = grid_to(10.0, 0.25);
    DistTable emp = empirical_dist(ctx, Statistic::slope_gap, ctx.integer(500),
                                   ctx.integer(0), ctx.integer(1), g);
    DistTable lim =
        limiting_dist(ctx, Statistic::slope_gap, g, 10'000'000, 1234);
    CHECK(emp.value[0] == 1.0);
    CHECK(table_sup_distance(emp, lim) <= 0.02);
    CHECK(emp.kind == "empirical");
    CHECK(emp.tau == 500.0);
  }
  SUBCASE("sup distance shrinks as tau grows") {
    HeckeContext ctx = make_context(3);
    std::vector<double> g = grid_to(8.0, 0.2);
    for (Statistic stat : {Statistic::slope_gap, Statistic::cent_dist}) {
      DistTable lim = limiting_dist(ctx, stat, g, 10'000'000, 77);
      double prev = 2.0;
      for (long tau : {100, 300, 1000}) {
        DistTable emp = empirical_dist(ctx, stat, ctx.integer(tau),
                                       ctx.integer(0), ctx.integer(1), g);
        double d = table_sup_distance(emp, lim);
        CAPTURE(tau);
        CHECK(d < prev);
        prev = d;
      }
    }
  }
  SUBCASE("empty sweep reported") {
    HeckeContext ctx = make_context(3);
    std::vector<double> g{0, 1};
    CHECK_THROWS_AS(
        empirical_dist(ctx, Statistic::slope_gap, ctx.integer(1),
                       ctx.rational(1, 3), ctx.rational(1, 2), g),
        std::runtime_error);
  }
  SUBCASE("mismatched grids refuse to compare") {
    DistTable a, b;
    a.t = {0, 1};
    a.value = {1, 0};
    b.t = {0, 2};
    b.value = {1, 0};
    CHECK_THROWS_AS(table_sup_distance(a, b), std::invalid_argument);
  }
}

TEST_CASE("slope equidistribution on [0,1]") {
  for (int q : {3, 5}) {
    HeckeContext ctx = make_context(q);
    SweepStats s = sweep_interval(ctx, ctx.integer(200), ctx.integer(0),
                                  ctx.integer(1));
    CAPTURE(q);
    CHECK(ks_uniform(s.slopes) <= 0.03);
  }
  SUBCASE("hand value") {
    std::vector<double> v{0.25, 0.5, 0.75};
    CHECK(ks_uniform(v) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK_THROWS_AS(ks_uniform({}), std::invalid_argument);
  }
}

TEST_CASE("triangle counting") {
  HeckeContext ctx = make_context(3);
  TriangleRegion tri{{ctx.integer(1), ctx.integer(0)},
                     {ctx.integer(1), ctx.integer(1)}};
  std::vector<long> phi = totients(400);
  auto farey = [&](long n) {
    long c = 1;
    for (long k = 1; k <= n; ++k) c += phi[k];
    return c;
  };

  SUBCASE("q = 3 closed triangle is the Farey count") {
    TriangleCount r = count_in_triangle(ctx, tri, ctx.integer(100));
    CHECK(r.count == farey(100));  // 3045
    CHECK(r.count == 3045);
    double ratio = (double)r.count / r.predicted;
    CHECK(ratio > 0.95);
    CHECK(ratio < 1.05);
  }
  SUBCASE("edge and far-side exclusion") {
    TriangleRegion t2 = tri;
    t2.include_edge1 = false;  // drops the ray through (1,0): just (1,0)
    CHECK(count_in_triangle(ctx, t2, ctx.integer(100)).count ==
          farey(100) - 1);
    TriangleRegion t3 = tri;
    t3.include_edge2 = false;  // drops the ray through (1,1): just (1,1)
    CHECK(count_in_triangle(ctx, t3, ctx.integer(100)).count ==
          farey(100) - 1);
    TriangleRegion t4 = tri;
    t4.include_far = false;  // drops x = 100: phi(100) = 40 vectors
    CHECK(count_in_triangle(ctx, t4, ctx.integer(100)).count ==
          farey(100) - 40);
  }
  SUBCASE("orientation-insensitive") {
    TriangleRegion swapped{{ctx.integer(1), ctx.integer(1)},
                           {ctx.integer(1), ctx.integer(0)}};
    CHECK(count_in_triangle(ctx, swapped, ctx.integer(60)).count ==
          count_in_triangle(ctx, tri, ctx.integer(60)).count);
  }
  SUBCASE("tau-squared scaling") {
    double m = kMeanRoof[3];
    TriangleCount c1 = count_in_triangle(ctx, tri, ctx.integer(200), m);
    TriangleCount c2 = count_in_triangle(ctx, tri, ctx.integer(400), m);
    CHECK(c1.count == farey(200));
    CHECK(c2.count == farey(400));
    double ratio = (double)c2.count / (double)c1.count;
    CHECK(ratio > 4 * 0.9);
    CHECK(ratio < 4 * 1.1);
    CHECK(c2.predicted == doctest::Approx(4 * c1.predicted).epsilon(1e-12));
  }
  SUBCASE("thin sliver stays small") {
    HeckeContext c5 = make_context(5);
    TriangleRegion sliver{{c5.integer(1), c5.integer(0)},
                          {c5.integer(1), c5.rational(1, 100)}};
    TriangleCount r = count_in_triangle(c5, sliver, c5.integer(50),
                                        kMeanRoof[5]);
    CHECK(r.predicted < 10.0);
    CHECK(r.count >= 1);  // (1,0) at least
    CHECK(r.count < 20);
  }
  SUBCASE("degenerate and unsupported regions") {
    TriangleRegion par{{ctx.integer(1), ctx.integer(1)},
                       {ctx.integer(2), ctx.integer(2)}};
    CHECK_THROWS_AS(count_in_triangle(ctx, par, ctx.integer(5)),
                    std::invalid_argument);
    TriangleRegion lefty{{ctx.integer(-1), ctx.integer(0)},
                         {ctx.integer(1), ctx.integer(1)}};
    CHECK_THROWS_AS(count_in_triangle(ctx, lefty, ctx.integer(5)),
                    std::invalid_argument);
    CHECK_THROWS_AS(count_in_triangle(ctx, tri, ctx.integer(0)),
                    std::invalid_argument);
  }
}

TEST_CASE("square equidistribution") {
  SUBCASE("image count bookkeeping") {
    HeckeContext ctx = make_context(3);
    SquareEquiResult r = square_equidistribution(ctx, ctx.integer(10), 4);
    long strip = (long)enumerate_strip(
                     ctx, StripSpec{ctx.integer(10), ctx.integer(0),
                                    ctx.integer(1)})
                     .size();
    // one axis vector (1,0) and one diagonal vector (1,1), 4 images each
    CHECK(r.total_vectors == 8 * strip - 4 - 4);
    long sum = 0;
    for (long c : r.cells) sum += c;
    CHECK(sum == r.total_increments);
    CHECK(r.total_increments >= r.total_vectors);
  }
  SUBCASE("exact dihedral symmetry of the cell grid") {
    for (int q : {3, 4, 5}) {
      HeckeContext ctx = make_context(q);
      for (int n : {4, 7}) {
        SquareEquiResult r = square_equidistribution(ctx, ctx.integer(25), n);
        CAPTURE(q);
        CAPTURE(n);
        auto cell = [&](int ix, int iy) { return r.cells[(size_t)iy * n + ix]; };
        for (int iy = 0; iy < n; ++iy)
          for (int ix = 0; ix < n; ++ix) {
            long v = cell(ix, iy);
            CHECK(v == cell(n - 1 - ix, iy));      // x -> -x
            CHECK(v == cell(ix, n - 1 - iy));      // y -> -y
            CHECK(v == cell(iy, ix));              // y = x mirror
          }
      }
    }
  }
  SUBCASE("q = 3 and q = 5 near-uniform at tau = 200") {
    for (int q : {3, 5}) {
      HeckeContext ctx = make_context(q);
      SquareEquiResult r = square_equidistribution(ctx, ctx.integer(200), 10);
      CAPTURE(q);
      CHECK(r.max_rel_dev <= 0.05);
      CHECK(r.chi2 > 0);
    }
  }
  SUBCASE("preconditions") {
    HeckeContext ctx = make_context(3);
    CHECK_THROWS_AS(square_equidistribution(ctx, ctx.integer(5), 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(square_equidistribution(ctx, ctx.rational(1, 2), 4),
                    std::invalid_argument);
  }
}

TEST_CASE("Ford circles") {
  SUBCASE("q = 3 classical tangency") {
    HeckeContext ctx = make_context(3);
    FordAudit audit;
    std::vector<FordCircle> circles = ford_circles(
        ctx, ctx.integer(5), ctx.integer(0), ctx.integer(1), &audit);
    CHECK(circles.size() == 11);  // the tau = 5 Farey sweep
    CHECK(audit.tangent_pairs == 10);
    CHECK(audit.external_pairs == 0);
    CHECK(audit.overlap_pairs == 0);
  }
  SUBCASE("circle geometry from the source vector") {
    HeckeContext ctx = make_context(5);
    std::vector<FordCircle> circles = ford_circles(
        ctx, ctx.integer(10), ctx.integer(0), ctx.lambda(), nullptr);
    REQUIRE(!circles.empty());
    for (const FordCircle &c : circles) {
      double x = c.source.x.to_double(), y = c.source.y.to_double();
      CHECK(c.r == doctest::Approx(0.5 / (x * x)).epsilon(1e-12));
      CHECK(c.cy == c.r);
      CHECK(c.cx == doctest::Approx(y / x).epsilon(1e-12));
      CHECK(c.r > 0);
    }
  }
  SUBCASE("q = 5 interval [0, phi]: no overlaps") {
    HeckeContext ctx = make_context(5);
    FordAudit audit;
    std::vector<FordCircle> circles = ford_circles(
        ctx, ctx.integer(10), ctx.integer(0), ctx.lambda(), &audit);
    CHECK(audit.overlap_pairs == 0);
    CHECK(audit.tangent_pairs + audit.external_pairs ==
          (long)circles.size() - 1);
    // matches the sweep over the same interval
    SweepStats s = sweep_interval(ctx, ctx.integer(10), ctx.integer(0),
                                  ctx.lambda());
    CHECK((long)circles.size() == s.count);
  }
  SUBCASE("bad interval") {
    HeckeContext ctx = make_context(3);
    CHECK_THROWS_AS(ford_circles(ctx, ctx.integer(5), ctx.integer(1),
                                 ctx.integer(0), nullptr),
                    std::invalid_argument);
  }
}

TEST_CASE("tail table basics") {
  std::vector<double> vals{1.0, 1.5, 2.0, 4.0};
  std::vector<double> g{0, 1, 2, 3};
  DistTable t = tail_table("empirical", Statistic::slope_gap, vals, g);
  CHECK(t.value[0] == 1.0);    // all four exceed 0
  CHECK(t.value[1] == 0.75);   // 1.5, 2, 4 exceed 1
  CHECK(t.value[2] == 0.25);   // only 4 exceeds 2
  CHECK(t.value[3] == 0.25);
  CHECK(t.samples == 4);
  CHECK_THROWS_AS(tail_table("empirical", Statistic::slope_gap, {}, g),
                  std::invalid_argument);
}
