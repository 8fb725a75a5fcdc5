#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hecke/nextterm.hpp"
#include "hecke/sternbrocot.hpp"

namespace hecke {

// requested > 0 wins, else the HECKE_ORBITS_THREADS environment variable,
// else hardware concurrency.  Always >= 1.
int resolve_threads(int requested);

struct MeanRoofResult {
  double value = 0;
  double error_bound = 0;  // stat_error + tail_bias
  double stat_error = 0;   // 3 sigma for Monte Carlo, quadrature estimate else
  double tail_bias = 0;    // cap-truncation bound (Monte Carlo only)
  long samples = 0;        // accepted samples (Monte Carlo only)
};

// Mean of the roof under the normalized measure (2/lambda) da db.  The inner
// b-integral over each region column is done analytically (the roof is
// 1/(a <p,w_i>) times a constant there), leaving one-dimensional integrals
// of log terms which are integrated adaptively region by region.
MeanRoofResult mean_roof_quadrature(const HeckeContext &ctx, double tol);

// Uniform rejection sampling of the triangle with the roof capped at `cap`;
// the discarded tail mass is bounded in closed form and reported separately.
// n is the minimum number of accepted samples (>= 1e4).  Chunked so the
// result depends only on (seed, n), not on the thread count.
MeanRoofResult mean_roof_montecarlo(const HeckeContext &ctx, long n,
                                    uint64_t seed, double cap = 1e3,
                                    int threads = 0);

enum class Statistic { slope_gap, cent_dist };

struct DistTable {
  std::string kind;       // "empirical" or "limiting"
  std::string statistic;  // "slope_gap" or "cent_dist"
  std::vector<double> t;
  std::vector<double> value;  // tail fractions, non-increasing, 1 at t = 0
  long samples = 0;
  double tau = 0;    // empirical only
  uint64_t seed = 0; // limiting only
  double std_error = 0;  // max binomial standard error over the grid
};

// Monte Carlo tail distribution of R (slope_gap) or of the scaled
// center-distance F = sqrt(R^2 + (1/L1^2 - 1/L0^2)^2 / 4) with L0 = a and
// L1 = first coordinate of the step image, under the normalized triangle
// measure.
DistTable limiting_dist(const HeckeContext &ctx, Statistic stat,
                        const std::vector<double> &t_grid, long n_samples,
                        uint64_t seed, int threads = 0);

// One exact pass over the strip 0 < x <= tau restricted to slopes in
// [lo, hi].  roofs[k] = tau^2 (slope_{k+1} - slope_k) and cdists[k] = the
// tau^2-scaled distance between the Ford circle centers of vectors k, k+1.
struct SweepStats {
  long count = 0;              // vectors with slope in [lo, hi]
  std::vector<double> slopes;  // ascending
  std::vector<double> roofs;
  std::vector<double> cdists;
};
SweepStats sweep_interval(const HeckeContext &ctx, const AlgNum &tau,
                          const AlgNum &lo, const AlgNum &hi,
                          bool keep_values = true);

// Tail table of a finite sample on the given grid.
DistTable tail_table(const std::string &kind, Statistic stat,
                     const std::vector<double> &values,
                     const std::vector<double> &t_grid);

DistTable empirical_dist(const HeckeContext &ctx, Statistic stat,
                         const AlgNum &tau, const AlgNum &lo, const AlgNum &hi,
                         const std::vector<double> &t_grid);

// Kolmogorov-Smirnov distance of ascending values in [0,1] against uniform.
double ks_uniform(const std::vector<double> &sorted_values);

// sup |f - g| over the shared t grid (grids must agree).
double table_sup_distance(const DistTable &f, const DistTable &g);

// Triangle with one vertex at the origin spanned by e1, e2 (both with
// positive x so the whole region sits in one slope strip).  Flags control
// whether lattice points on the two edge rays and on the far side count.
struct TriangleRegion {
  PlaneVec e1, e2;
  bool include_edge1 = true;
  bool include_edge2 = true;
  bool include_far = true;
};

struct TriangleCount {
  long count = 0;
  double predicted = 0;  // (2 / mean roof) * area * tau^2
};

// Exact count of orbit vectors in the tau-dilated triangle.  Pass a
// precomputed mean-roof value to skip the internal quadrature.
TriangleCount count_in_triangle(const HeckeContext &ctx,
                                const TriangleRegion &region, const AlgNum &tau,
                                double mean_roof_value = 0);

struct SquareEquiResult {
  int grid_n = 0;
  std::vector<long> cells;    // row-major grid_n x grid_n
  long total_vectors = 0;     // distinct orbit vectors in [-tau, tau]^2
  long total_increments = 0;  // boundary points hit every adjacent cell
  double chi2 = 0;
  double max_rel_dev = 0;
};

// Orbit vectors in [-tau, tau]^2 via the [0,1]-slope strip and the eight
// reflections, binned on an n x n grid over [-1,1]^2 after scaling by 1/tau.
// A vector landing exactly on a cell border increments every closed cell
// containing it, which keeps the counts exactly dihedral-symmetric.
SquareEquiResult square_equidistribution(const HeckeContext &ctx,
                                         const AlgNum &tau, int grid_n);

struct FordCircle {
  double cx = 0, cy = 0, r = 0;
  PlaneVec source;
};

struct FordAudit {
  long tangent_pairs = 0;   // consecutive |wedge| = 1
  long external_pairs = 0;  // consecutive |wedge| > 1
  long overlap_pairs = 0;   // consecutive |wedge| < 1, must stay 0
};

// Ford circles of the sweep in slope order: radius 1/(2x^2), center at
// (y/x, 1/(2x^2)).  The audit classifies consecutive pairs exactly.
std::vector<FordCircle> ford_circles(const HeckeContext &ctx, const AlgNum &tau,
                                     const AlgNum &lo, const AlgNum &hi,
                                     FordAudit *audit = nullptr);

}  // namespace hecke
