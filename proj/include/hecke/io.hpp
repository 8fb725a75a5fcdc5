#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hecke/stats.hpp"

namespace hecke {

// 17 significant digits, enough to round-trip any double
std::string format_double(double v);

// RFC 4180 quoting; exact-value tuples contain commas and always need it
std::string csv_quote(const std::string &field);

// Ford circles over the slope range [lo, hi], tangent to the bottom edge.
// Circles smaller than half a pixel are dropped (the count near slope
// accumulation points is unbounded).  height <= 0 picks one that fits the
// largest circle.
std::string svg_ford(const std::vector<FordCircle> &circles, double lo,
                     double hi, int width = 900, int height = 0);

// Scatter of plane points inside [-tau, tau]^2.
std::string svg_points(const std::vector<std::pair<double, double>> &pts,
                       double tau, int size = 700);

// Tail-distribution curve value(t).
std::string svg_dist(const DistTable &table, int width = 720,
                     int height = 420);

}  // namespace hecke
