#include "hecke/stats.hpp"

#include <algorithm>
#include <atomic>
#include <cfloat>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <thread>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "hecke/rng.hpp"

namespace hecke {

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char *env = std::getenv("HECKE_ORBITS_THREADS")) {
    char *end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end && *end == '\0' && v > 0 && v <= 1024) return (int)v;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc ? (int)hc : 1;
}

namespace {

// Over region i the roof is y_i / (a <p, w_i>) and the inner b-integral is
// analytic:
//
//   m_q = (2/lambda) sum_i int_{A_i}^1 log(1/D_i(a)) / a da
//
// where D_i(a) is <p, w_i> on the lower boundary of region i, i.e. the larger
// of (y_i - a)/y_{i-1} (boundary with region i-1) and y_i - a y_{i-1} (the
// bottom edge of the triangle), with y_i = p_i the fan ordinates.  The region
// column is nonempty for a > A_i = max(y_i - y_{i-1}, (y_i - 1)/y_{i-1}, 0)
// and the two branches of D_i cross at a = y_i / (1 + y_{i-1}).  Only the
// last region (y_i = 1) is singular: a log blowup at a = 1 and A_i = 0.

struct QuadPiece {
  double value = 0;
  double error = 0;
};

template <typename F>
QuadPiece integrate_piece(const F &f, double a, double b, double tol) {
  boost::math::quadrature::tanh_sinh<double> ts;
  QuadPiece out;
  if (b <= a) return out;
  out.value = ts.integrate(f, a, b, tol, &out.error);
  return out;
}

}  // namespace

MeanRoofResult mean_roof_quadrature(const HeckeContext &ctx, double tol) {
  if (!(tol > 0))
    throw std::invalid_argument("mean_roof_quadrature: tol must be positive");
  const int q = ctx.q();
  std::vector<double> p(q + 1, 0.0);
  for (int i = 1; i < q; ++i) p[i] = ctx.fan(i).y.to_double();
  const double lam = ctx.lambda().to_double();
  const double piece_tol = std::clamp(tol / (2.0 * (q - 2)), 1e-13, 1e-2);

  double total = 0, err = 0;
  for (int i = 2; i <= q - 1; ++i) {
    const double yi = p[i], ym = p[i - 1];
    const double B = yi / (1 + ym);
    QuadPiece p1, p2;
    if (i == q - 1) {
      // y_{q-1} = 1 exactly: left endpoint at 0, log singularity at a = 1
      p1 = integrate_piece(
          [ym](double a) { return a > 0 ? -std::log1p(-a * ym) / a : ym; }, 0.0,
          B, piece_tol);
      const double lym = std::log(ym);
      p2 = integrate_piece(
          [lym](double u) { return (lym - std::log(u)) / (1.0 - u); }, 0.0,
          ym / (1 + ym), piece_tol);
    } else {
      const double A = std::max(yi - ym, (yi - 1) / ym);
      p1 = integrate_piece(
          [yi, ym](double a) { return -std::log(yi - a * ym) / a; }, A, B,
          piece_tol);
      const double lym = std::log(ym);
      p2 = integrate_piece(
          [yi, lym](double a) { return (lym - std::log(yi - a)) / a; }, B, 1.0,
          piece_tol);
    }
    total += p1.value + p2.value;
    err += p1.error + p2.error;
  }

  MeanRoofResult r;
  r.value = (2.0 / lam) * total;
  r.stat_error = (2.0 / lam) * err;
  r.error_bound = std::max(r.stat_error, 8 * DBL_EPSILON * r.value);
  if (!std::isfinite(r.value) ||
      r.error_bound > 1e3 * std::max(tol, 1e-12) * std::max(1.0, r.value))
    throw std::runtime_error("mean_roof_quadrature: did not converge");
  return r;
}

namespace {

constexpr long kChunkAttempts = 1 << 16;

// Processes RNG chunks 0, 1, 2, ... until the cumulative accepted count in
// chunk order reaches target; returns the number of chunks consumed.  The
// consumed set and all partials depend only on (seed, target), never on the
// thread count, and the caller folds them in index order.
template <typename Partial, typename Work>
long run_chunks(long target, int threads, std::vector<Partial> &partials,
                const Work &work) {
  long computed = 0, scanned = 0, cum = 0;
  for (;;) {
    const long half = kChunkAttempts / 2;  // expected accepts per chunk
    long need = std::max<long>(1, (target - cum + half - 1) / half);
    long end = computed + need;
    partials.resize(end);
    if (threads <= 1 || need == 1) {
      for (long c = computed; c < end; ++c) partials[c] = work(c);
    } else {
      std::atomic<long> next{computed};
      int nw = (int)std::min<long>(threads, need);
      std::vector<std::thread> pool;
      pool.reserve(nw);
      for (int w = 0; w < nw; ++w)
        pool.emplace_back([&]() {
          for (;;) {
            long c = next.fetch_add(1);
            if (c >= end) return;
            partials[c] = work(c);
          }
        });
      for (auto &t : pool) t.join();
    }
    computed = end;
    for (; scanned < computed; ++scanned) {
      cum += partials[scanned].accepted;
      if (cum >= target) return scanned + 1;
    }
  }
}

struct RegionTables {
  int q = 0;
  double lam = 0;
  std::vector<double> wx, wy;  // fan coordinates, index 2 .. q-1
};

RegionTables region_tables(const HeckeContext &ctx) {
  RegionTables T;
  T.q = ctx.q();
  T.lam = ctx.lambda().to_double();
  T.wx.assign(T.q, 0.0);
  T.wy.assign(T.q, 0.0);
  for (int i = 2; i <= T.q - 1; ++i) {
    T.wx[i] = ctx.fan(i).x.to_double();
    T.wy[i] = ctx.fan(i).y.to_double();
  }
  return T;
}

// Region scan in doubles; the sample measure never sits on a boundary, so
// rounding there is immaterial.  Returns the roof and the dot product (the
// next triangle point's first coordinate).
inline void roof_eval(const RegionTables &T, double a, double b, double &roof,
                      double &dot_out) {
  for (int i = 2;; ++i) {
    double d = a * T.wx[i] + b * T.wy[i];
    if (d <= 1.0 || i == T.q - 1) {
      roof = T.wy[i] / (a * d);
      dot_out = d;
      return;
    }
  }
}

// (a, b) uniform on the triangle {0 < a <= 1, 1 - lambda a < b <= 1}: draw
// the unit square, keep u1 + u2 > 1 (acceptance 1/2), map affinely.
inline bool sample_triangle(SplitMix64 &g, double lam, double &a, double &b) {
  double u1 = g.u01(), u2 = g.u01();
  if (u1 + u2 <= 1.0) return false;
  a = u1;
  b = 1.0 - lam + lam * u2;
  return true;
}

struct RoofPartial {
  long accepted = 0;
  double sum = 0, sumsq = 0;
};

struct TailPartial {
  long accepted = 0;
  std::vector<uint32_t> hist;
};

void check_grid(const std::vector<double> &t_grid, const char *who) {
  if (t_grid.empty())
    throw std::invalid_argument(std::string(who) + ": empty t grid");
  for (size_t j = 0; j < t_grid.size(); ++j)
    if (t_grid[j] < 0 || !std::isfinite(t_grid[j]) ||
        (j > 0 && t_grid[j] <= t_grid[j - 1]))
      throw std::invalid_argument(std::string(who) +
                                  ": t grid must be ascending and nonnegative");
}

double max_binomial_se(const std::vector<double> &value, long n) {
  double se = 0;
  for (double v : value)
    se = std::max(se, std::sqrt(std::max(0.0, v * (1 - v)) / (double)n));
  return se;
}

}  // namespace

MeanRoofResult mean_roof_montecarlo(const HeckeContext &ctx, long n,
                                    uint64_t seed, double cap, int threads) {
  if (n < 10000)
    throw std::invalid_argument("mean_roof_montecarlo: need n >= 1e4");
  if (cap < 100)
    throw std::invalid_argument(
        "mean_roof_montecarlo: cap below the nonsingular roof range");
  threads = resolve_threads(threads);
  const RegionTables T = region_tables(ctx);

  std::vector<RoofPartial> parts;
  auto work = [&T, seed, cap](long c) {
    RoofPartial p;
    SplitMix64 g = chunk_rng(seed, (uint64_t)c);
    for (long s = 0; s < kChunkAttempts; ++s) {
      double a, b;
      if (!sample_triangle(g, T.lam, a, b)) continue;
      double roof, d;
      roof_eval(T, a, b, roof, d);
      double x = roof < cap ? roof : cap;
      p.accepted += 1;
      p.sum += x;
      p.sumsq += x * x;
    }
    return p;
  };
  long used = run_chunks(n, threads, parts, work);

  long acc = 0;
  double sum = 0, sumsq = 0;
  for (long c = 0; c < used; ++c) {
    acc += parts[c].accepted;
    sum += parts[c].sum;
    sumsq += parts[c].sumsq;
  }
  MeanRoofResult r;
  r.samples = acc;
  r.value = sum / (double)acc;
  double var = std::max(0.0, sumsq / (double)acc - r.value * r.value);
  r.stat_error = 3.0 * std::sqrt(var / (double)acc);
  // capping bias: E[(R - cap) 1{R > cap}] <= (2/lambda)(2 + log cap)/cap,
  // from area{R > t} <= (1 + log t)/t (hyperbolic tail of the last region;
  // the other regions are bounded well below the cap)
  r.tail_bias = (2.0 / T.lam) * (2.0 + std::log(cap)) / cap;
  r.error_bound = r.stat_error + r.tail_bias;
  return r;
}

DistTable limiting_dist(const HeckeContext &ctx, Statistic stat,
                        const std::vector<double> &t_grid, long n_samples,
                        uint64_t seed, int threads) {
  check_grid(t_grid, "limiting_dist");
  if (n_samples < 10000)
    throw std::invalid_argument("limiting_dist: need n_samples >= 1e4");
  threads = resolve_threads(threads);
  const RegionTables T = region_tables(ctx);
  const size_t G = t_grid.size();
  const bool want_f = stat == Statistic::cent_dist;

  std::vector<TailPartial> parts;
  auto work = [&](long c) {
    TailPartial p;
    p.hist.assign(G + 1, 0);
    SplitMix64 g = chunk_rng(seed, (uint64_t)c);
    for (long s = 0; s < kChunkAttempts; ++s) {
      double a, b;
      if (!sample_triangle(g, T.lam, a, b)) continue;
      double roof, d;
      roof_eval(T, a, b, roof, d);
      double x = roof;
      if (want_f) {
        double w = 0.5 * (1.0 / (d * d) - 1.0 / (a * a));
        x = std::sqrt(roof * roof + w * w);
      }
      size_t idx =
          std::lower_bound(t_grid.begin(), t_grid.end(), x) - t_grid.begin();
      p.hist[idx] += 1;
      p.accepted += 1;
    }
    return p;
  };
  long used = run_chunks(n_samples, threads, parts, work);

  long acc = 0;
  std::vector<long> hist(G + 1, 0);
  for (long c = 0; c < used; ++c) {
    acc += parts[c].accepted;
    for (size_t j = 0; j <= G; ++j) hist[j] += parts[c].hist[j];
  }
  DistTable out;
  out.kind = "limiting";
  out.statistic = want_f ? "cent_dist" : "slope_gap";
  out.t = t_grid;
  out.value.resize(G);
  long run = 0;
  for (size_t j = G; j-- > 0;) {
    run += hist[j + 1];
    out.value[j] = (double)run / (double)acc;
  }
  out.samples = acc;
  out.seed = seed;
  out.std_error = max_binomial_se(out.value, acc);
  return out;
}

SweepStats sweep_interval(const HeckeContext &ctx, const AlgNum &tau,
                          const AlgNum &lo, const AlgNum &hi,
                          bool keep_values) {
  if (lo.sign() < 0 || cmp(lo, hi) > 0)
    throw std::invalid_argument("sweep_interval: need 0 <= lo <= hi");
  SweepStats out;
  NextTermState st = seed_identity(ctx, tau);
  for (;;) {
    bool in = cmp(st.slope, lo) >= 0 && cmp(st.slope, hi) <= 0;
    if (in) {
      out.count += 1;
      if (keep_values) out.slopes.push_back(st.slope.to_double());
    }
    if (cmp(st.slope, hi) >= 0) break;
    double L0 = st.ftr.a.to_double();
    advance(st);
    // gap statistics belong to pairs with both endpoints inside the interval;
    // slopes ascend, so >= lo is inherited from the previous vector
    if (keep_values && in && cmp(st.slope, hi) <= 0) {
      double r = st.last_roof.to_double();
      double L1 = st.ftr.a.to_double();
      double w = 0.5 * (1.0 / (L1 * L1) - 1.0 / (L0 * L0));
      out.roofs.push_back(r);
      out.cdists.push_back(std::sqrt(r * r + w * w));
    }
  }
  return out;
}

DistTable tail_table(const std::string &kind, Statistic stat,
                     const std::vector<double> &values,
                     const std::vector<double> &t_grid) {
  check_grid(t_grid, "tail_table");
  if (values.empty()) throw std::invalid_argument("tail_table: no values");
  const size_t G = t_grid.size();
  std::vector<long> hist(G + 1, 0);
  for (double x : values) {
    size_t idx =
        std::lower_bound(t_grid.begin(), t_grid.end(), x) - t_grid.begin();
    hist[idx] += 1;
  }
  DistTable out;
  out.kind = kind;
  out.statistic = stat == Statistic::cent_dist ? "cent_dist" : "slope_gap";
  out.t = t_grid;
  out.value.resize(G);
  long run = 0;
  for (size_t j = G; j-- > 0;) {
    run += hist[j + 1];
    out.value[j] = (double)run / (double)values.size();
  }
  out.samples = (long)values.size();
  out.std_error = max_binomial_se(out.value, out.samples);
  return out;
}

DistTable empirical_dist(const HeckeContext &ctx, Statistic stat,
                         const AlgNum &tau, const AlgNum &lo, const AlgNum &hi,
                         const std::vector<double> &t_grid) {
  SweepStats s = sweep_interval(ctx, tau, lo, hi, true);
  const std::vector<double> &v =
      stat == Statistic::cent_dist ? s.cdists : s.roofs;
  if (v.empty())
    throw std::runtime_error(
        "empirical_dist: sweep found fewer than two vectors in the interval");
  DistTable out = tail_table("empirical", stat, v, t_grid);
  out.tau = tau.to_double();
  return out;
}

double ks_uniform(const std::vector<double> &sorted_values) {
  if (sorted_values.empty())
    throw std::invalid_argument("ks_uniform: empty sample");
  const double n = (double)sorted_values.size();
  double d = 0;
  for (size_t i = 0; i < sorted_values.size(); ++i) {
    d = std::max(d, ((double)i + 1) / n - sorted_values[i]);
    d = std::max(d, sorted_values[i] - (double)i / n);
  }
  return d;
}

double table_sup_distance(const DistTable &f, const DistTable &g) {
  if (f.t != g.t)
    throw std::invalid_argument("table_sup_distance: tables use different grids");
  double d = 0;
  for (size_t j = 0; j < f.value.size(); ++j)
    d = std::max(d, std::abs(f.value[j] - g.value[j]));
  return d;
}

TriangleCount count_in_triangle(const HeckeContext &ctx,
                                const TriangleRegion &region, const AlgNum &tau,
                                double mean_roof_value) {
  if (tau.sign() <= 0)
    throw std::invalid_argument("count_in_triangle: tau must be positive");
  PlaneVec e1 = region.e1, e2 = region.e2;
  bool inc1 = region.include_edge1, inc2 = region.include_edge2;
  AlgNum w12 = wedge(e1, e2);
  int ws = w12.sign();
  if (ws == 0)
    throw std::invalid_argument("count_in_triangle: degenerate region");
  if (ws < 0) {  // orient so slope(e1) < slope(e2)
    std::swap(e1, e2);
    std::swap(inc1, inc2);
    w12 = -w12;
  }
  if (e1.x.sign() <= 0 || e2.x.sign() <= 0)
    throw std::invalid_argument(
        "count_in_triangle: edge vectors must have positive x");

  StripSpec spec{tau * (cmp(e1.x, e2.x) >= 0 ? e1.x : e2.x), e1.y / e1.x,
                 e2.y / e2.x};
  AlgNum far_bound = tau * w12;
  long count = 0;
  // the strip's slope bounds already force both barycentric coordinates
  // nonnegative; what is left is edge inclusion and the far side s + t <= tau
  enumerate_strip(ctx, spec, [&](const PlaneVec &v) {
    AlgNum sn = wedge(v, e2);  // s * w12, zero on the ray through e2
    AlgNum tn = wedge(e1, v);  // t * w12, zero on the ray through e1
    if (!inc2 && sn.sign() == 0) return;
    if (!inc1 && tn.sign() == 0) return;
    int fs = cmp(sn + tn, far_bound);
    if (fs > 0 || (fs == 0 && !region.include_far)) return;
    count += 1;
  });

  double m = mean_roof_value > 0 ? mean_roof_value
                                 : mean_roof_quadrature(ctx, 1e-10).value;
  double td = tau.to_double();
  TriangleCount out;
  out.count = count;
  out.predicted = (2.0 / m) * (w12.to_double() / 2.0) * td * td;
  return out;
}

SquareEquiResult square_equidistribution(const HeckeContext &ctx,
                                         const AlgNum &tau, int grid_n) {
  if (grid_n < 2)
    throw std::invalid_argument("square_equidistribution: grid_n must be >= 2");
  if (cmp(tau, ctx.integer(1)) < 0)
    throw std::invalid_argument("square_equidistribution: tau must be >= 1");

  std::vector<PlaneVec> base = enumerate_strip(
      ctx, StripSpec{tau, ctx.integer(0), ctx.integer(1)});

  SquareEquiResult out;
  out.grid_n = grid_n;
  out.cells.assign((size_t)grid_n * grid_n, 0);
  const AlgNum den = tau * ctx.integer(2);
  const AlgNum ng = ctx.integer(grid_n);

  // cell indices along one axis for coordinate c in [-tau, tau]: the grid
  // coordinate is t = (c + tau) n / (2 tau); a point on a cell border
  // (integer t) belongs to both closed cells
  auto axis_cells = [&](const AlgNum &c, int idx[2]) {
    AlgNum u = (c + tau) * ng;
    mpz_class k = floor_ratio(u, den);
    long kl = k.get_si();
    int cnt = 0;
    if (cmp(u, ctx.integer(k) * den) == 0) {
      if (kl - 1 >= 0) idx[cnt++] = (int)(kl - 1);
      if (kl <= grid_n - 1) idx[cnt++] = (int)kl;
    } else {
      idx[cnt++] = (int)kl;
    }
    return cnt;
  };
  auto add_vec = [&](const AlgNum &vx, const AlgNum &vy) {
    int xs[2], ys[2];
    int nx = axis_cells(vx, xs), ny = axis_cells(vy, ys);
    for (int i = 0; i < nx; ++i)
      for (int j = 0; j < ny; ++j)
        out.cells[(size_t)ys[j] * grid_n + xs[i]] += 1;
    out.total_increments += nx * ny;
    out.total_vectors += 1;
  };

  for (const PlaneVec &v : base) {
    AlgNum mx = -v.x, my = -v.y;
    if (v.y.sign() == 0) {
      // on the x axis: four distinct images
      add_vec(v.x, v.y);
      add_vec(mx, my);
      add_vec(v.y, v.x);
      add_vec(my, mx);
    } else if (cmp(v.x, v.y) == 0) {
      // on the diagonal: four distinct images
      add_vec(v.x, v.y);
      add_vec(mx, v.y);
      add_vec(v.x, my);
      add_vec(mx, my);
    } else {
      add_vec(v.x, v.y);
      add_vec(mx, v.y);
      add_vec(v.x, my);
      add_vec(mx, my);
      add_vec(v.y, v.x);
      add_vec(my, v.x);
      add_vec(v.y, mx);
      add_vec(my, mx);
    }
  }

  double expect = (double)out.total_increments / ((double)grid_n * grid_n);
  for (long c : out.cells) {
    double d = (double)c - expect;
    out.chi2 += d * d / expect;
    out.max_rel_dev = std::max(out.max_rel_dev, std::abs(d) / expect);
  }
  return out;
}

std::vector<FordCircle> ford_circles(const HeckeContext &ctx, const AlgNum &tau,
                                     const AlgNum &lo, const AlgNum &hi,
                                     FordAudit *audit) {
  if (lo.sign() < 0 || cmp(lo, hi) > 0)
    throw std::invalid_argument("ford_circles: need 0 <= lo <= hi");
  std::vector<FordCircle> out;
  NextTermState st = seed_identity(ctx, tau);
  const AlgNum one = ctx.integer(1);
  std::optional<PlaneVec> prev;
  for (;;) {
    bool in = cmp(st.slope, lo) >= 0 && cmp(st.slope, hi) <= 0;
    if (in) {
      double x = st.current.x.to_double();
      double h = 0.5 / (x * x);
      out.push_back(FordCircle{st.slope.to_double(), h, h, st.current});
      if (audit && prev) {
        AlgNum w = wedge(*prev, st.current);
        if (w.sign() < 0) w = -w;
        int cw = cmp(w, one);
        if (cw == 0)
          audit->tangent_pairs += 1;
        else if (cw > 0)
          audit->external_pairs += 1;
        else
          audit->overlap_pairs += 1;
      }
      prev = st.current;
    }
    if (cmp(st.slope, hi) >= 0) break;
    advance(st);
  }
  return out;
}

}  // namespace hecke
