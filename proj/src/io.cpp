#include "hecke/io.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace hecke {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_quote(const std::string &field) {
  bool need = field.find_first_of(",\"\n") != std::string::npos;
  if (!need) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

}  // namespace

std::string svg_ford(const std::vector<FordCircle> &circles, double lo,
                     double hi, int width, int height) {
  double span = hi - lo;
  if (!(span > 0)) span = 1;
  double scale = width / span;
  double rmax = 0;
  for (const FordCircle &c : circles) rmax = std::max(rmax, c.r);
  if (height <= 0) height = (int)std::ceil(rmax * scale) + 8;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' '
      << height << "\">\n";
  svg << "<rect width=\"" << width << "\" height=\"" << height
      << "\" fill=\"white\"/>\n";
  svg << "<line x1=\"0\" y1=\"" << height - 1 << "\" x2=\"" << width
      << "\" y2=\"" << height - 1 << "\" stroke=\"black\"/>\n";
  for (const FordCircle &c : circles) {
    double r = c.r * scale;
    if (r < 0.5) continue;  // sub-pixel
    double cx = (c.cx - lo) * scale;
    double cy = height - 1 - r;
    svg << "<circle cx=\"" << num(cx) << "\" cy=\"" << num(cy) << "\" r=\""
        << num(r) << "\" fill=\"none\" stroke=\"#1a466b\" stroke-width=\"0.8\"/>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string svg_points(const std::vector<std::pair<double, double>> &pts,
                       double tau, int size) {
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size
      << "\" height=\"" << size << "\" viewBox=\"0 0 " << size << ' ' << size
      << "\">\n";
  svg << "<rect width=\"" << size << "\" height=\"" << size
      << "\" fill=\"white\" stroke=\"black\"/>\n";
  double s = size / (2 * tau);
  for (const auto &[x, y] : pts) {
    double px = (x + tau) * s;
    double py = size - (y + tau) * s;
    svg << "<circle cx=\"" << num(px) << "\" cy=\"" << num(py)
        << "\" r=\"0.9\" fill=\"#1a466b\"/>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string svg_dist(const DistTable &table, int width, int height) {
  const int ml = 40, mb = 24, mt = 8, mr = 8;  // margins
  double tmax = table.t.empty() ? 1.0 : table.t.back();
  if (!(tmax > 0)) tmax = 1;
  double sx = (width - ml - mr) / tmax;
  double sy = height - mt - mb;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' '
      << height << "\">\n";
  svg << "<rect width=\"" << width << "\" height=\"" << height
      << "\" fill=\"white\"/>\n";
  svg << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml
      << "\" y2=\"" << height - mb << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\""
      << width - mr << "\" y2=\"" << height - mb << "\" stroke=\"black\"/>\n";
  svg << "<text x=\"4\" y=\"" << mt + 10
      << "\" font-size=\"11\" font-family=\"sans-serif\">1.0</text>\n";
  svg << "<text x=\"" << width - mr - 20 << "\" y=\"" << height - 8
      << "\" font-size=\"11\" font-family=\"sans-serif\">" << num(tmax)
      << "</text>\n";
  svg << "<polyline fill=\"none\" stroke=\"#a03030\" stroke-width=\"1.5\" "
         "points=\"";
  for (size_t j = 0; j < table.t.size(); ++j) {
    double px = ml + table.t[j] * sx;
    double py = mt + (1.0 - table.value[j]) * sy;
    if (j) svg << ' ';
    svg << num(px) << ',' << num(py);
  }
  svg << "\"/>\n</svg>\n";
  return svg.str();
}

}  // namespace hecke
