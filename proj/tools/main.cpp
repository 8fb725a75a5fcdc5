// hecke_orbits: enumeration, return-map orbits, and statistics of the
// discrete Hecke group orbits from the command line.

#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hecke/returnmap.hpp"
#include "hecke/context.hpp"
#include "hecke/io.hpp"
#include "hecke/nextterm.hpp"
#include "hecke/rng.hpp"
#include "hecke/stats.hpp"
#include "hecke/sternbrocot.hpp"

using json = nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string &msg) { throw std::runtime_error(msg); }

// "n", "n/m", or a plain decimal like "0.25"; always exact
mpq_class parse_rational(const std::string &raw) {
  std::string s = raw;
  while (!s.empty() && std::isspace((unsigned char)s.front())) s.erase(s.begin());
  while (!s.empty() && std::isspace((unsigned char)s.back())) s.pop_back();
  if (s.empty()) fail("empty number");
  try {
    auto slash = s.find('/');
    if (slash != std::string::npos) {
      mpz_class num(s.substr(0, slash)), den(s.substr(slash + 1));
      if (den == 0) fail("zero denominator in '" + raw + "'");
      mpq_class v(num, den);
      v.canonicalize();
      return v;
    }
    auto dot = s.find('.');
    if (dot == std::string::npos) return mpq_class(mpz_class(s));
    std::string head = s.substr(0, dot), tail = s.substr(dot + 1);
    bool neg = !head.empty() && head[0] == '-';
    if (!head.empty() && (head[0] == '-' || head[0] == '+')) head.erase(head.begin());
    if (head.empty()) head = "0";
    if (tail.empty()) tail = "0";
    for (char c : tail)
      if (!std::isdigit((unsigned char)c)) fail("cannot parse number '" + raw + "'");
    mpz_class ip(head), fp(tail), p10;
    mpz_ui_pow_ui(p10.get_mpz_t(), 10, (unsigned long)tail.size());
    mpq_class v(ip * p10 + fp, p10);
    v.canonicalize();
    return neg ? mpq_class(-v) : v;
  } catch (const std::invalid_argument &) {
    fail("cannot parse number '" + raw + "'");
  }
}

// field element when the string carries a coefficient tuple, rational else
hecke::AlgNum parse_value(const hecke::HeckeContext &ctx, const std::string &s) {
  if (s.find(',') != std::string::npos) {
    auto v = hecke::AlgNum::parse(ctx.field(), s);
    if (!v) fail("cannot parse field element '" + s + "'");
    return *v;
  }
  return ctx.rational(parse_rational(s));
}

std::pair<mpq_class, mpq_class> parse_interval(const std::string &s) {
  auto comma = s.find(',');
  if (comma == std::string::npos || s.find(',', comma + 1) != std::string::npos)
    fail("interval must be 'lo,hi'");
  return {parse_rational(s.substr(0, comma)), parse_rational(s.substr(comma + 1))};
}

std::pair<mpq_class, mpq_class> parse_pair(const std::string &s) {
  return parse_interval(s);  // same shape, different meaning
}

// "start:step:end" with end included when it sits on the step lattice
std::vector<double> parse_grid(const std::string &s) {
  auto c1 = s.find(':');
  auto c2 = c1 == std::string::npos ? std::string::npos : s.find(':', c1 + 1);
  if (c2 == std::string::npos) fail("grid must be 'start:step:end'");
  double a, h, b;
  try {
    a = std::stod(s.substr(0, c1));
    h = std::stod(s.substr(c1 + 1, c2 - c1 - 1));
    b = std::stod(s.substr(c2 + 1));
  } catch (const std::exception &) {
    fail("cannot parse grid '" + s + "'");
  }
  if (!(h > 0)) fail("grid step must be positive");
  if (!(b >= a)) fail("grid end below start");
  long n = (long)std::floor((b - a) / h + 1e-9);
  if (n > 2000000) fail("grid has too many points");
  std::vector<double> g;
  g.reserve((size_t)n + 1);
  for (long i = 0; i <= n; ++i) g.push_back(a + (double)i * h);
  return g;
}

void write_output(const std::string &path, const std::string &content) {
  if (path.empty()) {
    std::fwrite(content.data(), 1, content.size(), stdout);
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) fail("cannot open output file '" + path + "'");
  f.write(content.data(), (std::streamsize)content.size());
  if (!f) fail("write failed for '" + path + "'");
}

struct Csv {
  std::string buf;
  void meta(const std::string &k, const std::string &v) {
    buf += "# " + k + "=" + v + "\n";
  }
  void line(const std::string &l) {
    buf += l;
    buf += '\n';
  }
  void row(const std::vector<std::string> &cells) {
    for (size_t i = 0; i < cells.size(); ++i) {
      if (i) buf += ',';
      buf += cells[i];
    }
    buf += '\n';
  }
};

std::string qstr(const mpq_class &v) { return v.get_str(); }

std::string dump_json(const json &j) { return j.dump(2) + "\n"; }

// all option values in one bag; each subcommand touches its own subset
struct Options {
  int q = 0;
  std::string tau = "1000";
  std::string interval = "0,1";
  std::string format = "csv";
  std::string out;
  std::string svg;
  int threads = 0;
  double tol = 1e-8;
  double samples = 0;
  std::uint64_t seed = 0;
  double cap = 1000;
  std::string grid = "0:0.1:5";
  std::string kind;
  std::string a_str, b_str;
  long steps = 10;
  std::string e1 = "1,0", e2 = "1,1";
  bool excl_e1 = false, excl_e2 = false, excl_far = false;
  double mean_roof_hint = 0;
  int grid_n = 10;
  std::string alpha;
  long count = 10;
};

hecke::AlgNum tau_value(const hecke::HeckeContext &ctx, const std::string &s,
                        mpq_class *out_q = nullptr) {
  mpq_class t = parse_rational(s);
  if (t < 1) fail("tau must be >= 1");
  if (out_q) *out_q = t;
  return ctx.rational(t);
}

long samples_value(double s) {
  if (!(s >= 1) || s != std::floor(s) || s > 4e18)
    fail("--samples must be a positive whole number");
  return (long)s;
}

// ---------------------------------------------------------------- enumerate

int run_enumerate(const Options &o) {
  auto ctx = hecke::make_context(o.q);
  auto [lo_q, hi_q] = parse_interval(o.interval);
  if (lo_q > hi_q) fail("interval lower end exceeds upper end");
  mpq_class tau_q;
  hecke::AlgNum tau = tau_value(ctx, o.tau, &tau_q);
  hecke::AlgNum lo = ctx.rational(lo_q), hi = ctx.rational(hi_q);
  hecke::AlgNum zero = ctx.integer(0);

  // Every row carries the step leaving it toward the next slope, so the roof
  // column times 1/tau^2 is exactly the gap to the row below.  The last row's
  // step leads past the interval; it is still well defined.
  struct Row {
    hecke::PlaneVec v;
    hecke::AlgNum slope;
    int region;
    hecke::AlgNum roof;
  };
  std::vector<Row> rows;

  if (lo.sign() < 0) {
    // negative slopes come from the y -> -y mirror of a nonnegative walk;
    // the mirrored row inherits the step that entered its source vector,
    // which is the step leaving it in the reversed output order
    hecke::AlgNum bound = -lo;
    hecke::AlgNum src_lo = hi.sign() < 0 ? -hi : zero;
    auto st = hecke::seed_identity(ctx, tau);
    std::vector<Row> walk;
    walk.push_back({st.current, st.slope, hecke::region_index(ctx, st.ftr),
                    hecke::roof(ctx, st.ftr)});
    for (;;) {
      hecke::advance(st);
      if (hecke::cmp(st.slope, bound) > 0) break;
      walk.push_back({st.current, st.slope, hecke::region_index(ctx, st.ftr),
                      hecke::roof(ctx, st.ftr)});
    }
    for (size_t j = walk.size(); j-- > 1;) {
      if (hecke::cmp(walk[j].slope, src_lo) < 0) continue;
      rows.push_back({{walk[j].v.x, -walk[j].v.y},
                      -walk[j].slope,
                      walk[j - 1].region,
                      walk[j - 1].roof});
    }
  }

  if (hi.sign() >= 0) {
    hecke::AlgNum plo = lo.sign() > 0 ? lo : zero;
    auto st = hecke::seed_identity(ctx, tau);
    auto record = [&]() {
      if (hecke::cmp(st.slope, plo) >= 0)
        rows.push_back({st.current, st.slope, hecke::region_index(ctx, st.ftr),
                        hecke::roof(ctx, st.ftr)});
    };
    record();
    for (;;) {
      hecke::advance(st);
      if (hecke::cmp(st.slope, hi) > 0) break;
      record();
    }
  }

  const char *cols[] = {"index",      "x_exact",      "y_exact",
                        "x_float",    "y_float",      "slope_float",
                        "region_index", "roof_float"};
  if (o.format == "json") {
    json j;
    j["kind"] = "enumerate";
    j["meta"] = {{"q", o.q},
                 {"tau", qstr(tau_q)},
                 {"interval", qstr(lo_q) + "," + qstr(hi_q)},
                 {"count", (long)rows.size()}};
    j["columns"] = json::array();
    for (const char *c : cols) j["columns"].push_back(c);
    j["rows"] = json::array();
    for (size_t i = 0; i < rows.size(); ++i) {
      const Row &r = rows[i];
      j["rows"].push_back(json::array({(long)i, r.v.x.serialize(),
                                       r.v.y.serialize(), r.v.x.to_double(),
                                       r.v.y.to_double(), r.slope.to_double(),
                                       r.region, r.roof.to_double()}));
    }
    write_output(o.out, dump_json(j));
  } else {
    Csv csv;
    csv.meta("q", std::to_string(o.q));
    csv.meta("tau", qstr(tau_q));
    csv.meta("interval", qstr(lo_q) + "," + qstr(hi_q));
    csv.line("index,x_exact,y_exact,x_float,y_float,slope_float,region_index,"
             "roof_float");
    for (size_t i = 0; i < rows.size(); ++i) {
      const Row &r = rows[i];
      csv.row({std::to_string(i), hecke::csv_quote(r.v.x.serialize()),
               hecke::csv_quote(r.v.y.serialize()),
               hecke::format_double(r.v.x.to_double()),
               hecke::format_double(r.v.y.to_double()),
               hecke::format_double(r.slope.to_double()),
               std::to_string(r.region),
               hecke::format_double(r.roof.to_double())});
    }
    write_output(o.out, csv.buf);
  }
  return 0;
}

// -------------------------------------------------------------------- orbit

int run_orbit(const Options &o) {
  auto ctx = hecke::make_context(o.q);
  hecke::AlgNum a = parse_value(ctx, o.a_str), b = parse_value(ctx, o.b_str);
  auto p = hecke::make_triangle_point(ctx, a, b);

  struct Row {
    std::string a, b;
    int region;
    std::string k;
    double roof;
  };
  std::vector<Row> rows;
  for (long s = 0; s < o.steps; ++s) {
    auto step = hecke::return_step(ctx, p);
    rows.push_back({p.a.serialize(), p.b.serialize(), step.region,
                    step.k.get_str(), step.roof.to_double()});
    p = step.next;
  }

  if (o.format == "json") {
    json j;
    j["kind"] = "orbit";
    j["meta"] = {{"q", o.q}, {"count", o.steps}};
    j["columns"] = json::array({"step", "a", "b", "region", "k", "roof"});
    j["rows"] = json::array();
    for (size_t i = 0; i < rows.size(); ++i)
      j["rows"].push_back(json::array({(long)i, rows[i].a, rows[i].b,
                                       rows[i].region, rows[i].k,
                                       rows[i].roof}));
    write_output(o.out, dump_json(j));
  } else {
    Csv csv;
    csv.meta("q", std::to_string(o.q));
    csv.line("step,a,b,region,k,roof");
    for (size_t i = 0; i < rows.size(); ++i)
      csv.row({std::to_string(i), hecke::csv_quote(rows[i].a),
               hecke::csv_quote(rows[i].b), std::to_string(rows[i].region),
               rows[i].k, hecke::format_double(rows[i].roof)});
    write_output(o.out, csv.buf);
  }
  return 0;
}

// ---------------------------------------------------------------- mean-roof

int run_mean_roof(const Options &o, bool mc, bool seeded) {
  auto ctx = hecke::make_context(o.q);
  hecke::MeanRoofResult r;
  std::string method;
  if (mc) {
    if (!seeded) fail("--seed is required for Monte Carlo runs");
    r = hecke::mean_roof_montecarlo(ctx, samples_value(o.samples), o.seed,
                                    o.cap, o.threads);
    method = "monte_carlo";
  } else {
    r = hecke::mean_roof_quadrature(ctx, o.tol);
    method = "quadrature";
  }

  if (o.format == "json") {
    json j;
    j["kind"] = "mean_roof";
    json meta = {{"q", o.q}, {"method", method}};
    if (mc) {
      meta["seed"] = o.seed;
      meta["samples"] = samples_value(o.samples);
    } else {
      meta["tol"] = o.tol;
    }
    j["meta"] = meta;
    j["result"] = {{"value", r.value},
                   {"error_bound", r.error_bound},
                   {"stat_error", r.stat_error},
                   {"tail_bias", r.tail_bias},
                   {"samples", r.samples}};
    write_output(o.out, dump_json(j));
  } else {
    Csv csv;
    csv.meta("q", std::to_string(o.q));
    csv.meta("method", method);
    if (mc) {
      csv.meta("seed", std::to_string(o.seed));
      csv.meta("cap", hecke::format_double(o.cap));
    } else {
      csv.meta("tol", hecke::format_double(o.tol));
    }
    csv.line("value,error_bound,stat_error,tail_bias,samples");
    csv.row({hecke::format_double(r.value), hecke::format_double(r.error_bound),
             hecke::format_double(r.stat_error),
             hecke::format_double(r.tail_bias), std::to_string(r.samples)});
    write_output(o.out, csv.buf);
  }
  return 0;
}

// -------------------------------------------- slope-gap / cent-dist tables

int run_dist(const Options &o, hecke::Statistic stat, bool has_tau, bool has_n,
             bool seeded) {
  auto ctx = hecke::make_context(o.q);
  std::vector<double> grid = parse_grid(o.grid);

  std::string kind = o.kind;
  if (kind.empty()) {
    if (has_tau == has_n)
      fail("give exactly one of --tau (empirical) or --samples (limiting), "
           "or pick --kind");
    kind = has_tau ? "empirical" : "limiting";
  }

  hecke::DistTable tbl;
  mpq_class tau_q, lo_q, hi_q;
  if (kind == "empirical") {
    if (!has_tau) fail("--tau is required for the empirical table");
    hecke::AlgNum tau = tau_value(ctx, o.tau, &tau_q);
    std::tie(lo_q, hi_q) = parse_interval(o.interval);
    tbl = hecke::empirical_dist(ctx, stat, tau, ctx.rational(lo_q),
                                ctx.rational(hi_q), grid);
  } else {
    if (!has_n) fail("--samples is required for the limiting table");
    if (!seeded) fail("--seed is required for Monte Carlo runs");
    tbl = hecke::limiting_dist(ctx, stat, grid, samples_value(o.samples),
                               o.seed, o.threads);
  }

  if (!o.svg.empty()) write_output(o.svg, hecke::svg_dist(tbl));

  if (o.format == "json") {
    json j;
    j["kind"] = "dist_table";
    json meta = {{"q", o.q},
                 {"statistic", tbl.statistic},
                 {"table_kind", tbl.kind},
                 {"samples", tbl.samples},
                 {"std_error", tbl.std_error}};
    if (kind == "empirical") {
      meta["tau"] = qstr(tau_q);
      meta["interval"] = qstr(lo_q) + "," + qstr(hi_q);
    } else {
      meta["seed"] = tbl.seed;
    }
    j["meta"] = meta;
    j["t"] = tbl.t;
    j["value"] = tbl.value;
    write_output(o.out, dump_json(j));
  } else {
    Csv csv;
    csv.meta("q", std::to_string(o.q));
    csv.meta("statistic", tbl.statistic);
    csv.meta("kind", tbl.kind);
    csv.meta("samples", std::to_string(tbl.samples));
    if (kind == "empirical") {
      csv.meta("tau", qstr(tau_q));
      csv.meta("interval", qstr(lo_q) + "," + qstr(hi_q));
    } else {
      csv.meta("seed", std::to_string(tbl.seed));
    }
    csv.meta("std_error", hecke::format_double(tbl.std_error));
    csv.line("t,value");
    for (size_t i = 0; i < tbl.t.size(); ++i)
      csv.row({hecke::format_double(tbl.t[i]),
               hecke::format_double(tbl.value[i])});
    write_output(o.out, csv.buf);
  }
  return 0;
}

// ------------------------------------------------------------ count-triangle

int run_triangle(const Options &o) {
  auto ctx = hecke::make_context(o.q);
  mpq_class tau_q;
  hecke::AlgNum tau = tau_value(ctx, o.tau, &tau_q);
  auto [e1x, e1y] = parse_pair(o.e1);
  auto [e2x, e2y] = parse_pair(o.e2);
  hecke::TriangleRegion region;
  region.e1 = {ctx.rational(e1x), ctx.rational(e1y)};
  region.e2 = {ctx.rational(e2x), ctx.rational(e2y)};
  region.include_edge1 = !o.excl_e1;
  region.include_edge2 = !o.excl_e2;
  region.include_far = !o.excl_far;
  auto res = hecke::count_in_triangle(ctx, region, tau, o.mean_roof_hint);
  double ratio = res.predicted > 0 ? (double)res.count / res.predicted : 0;

  if (o.format == "json") {
    json j;
    j["kind"] = "triangle_count";
    j["meta"] = {{"q", o.q}, {"tau", qstr(tau_q)}};
    j["result"] = {{"e1", qstr(e1x) + "," + qstr(e1y)},
                   {"e2", qstr(e2x) + "," + qstr(e2y)},
                   {"count", res.count},
                   {"predicted", res.predicted},
                   {"ratio", ratio}};
    write_output(o.out, dump_json(j));
  } else {
    Csv csv;
    csv.meta("q", std::to_string(o.q));
    csv.meta("tau", qstr(tau_q));
    csv.meta("e1", qstr(e1x) + "," + qstr(e1y));
    csv.meta("e2", qstr(e2x) + "," + qstr(e2y));
    csv.line("count,predicted,ratio");
    csv.row({std::to_string(res.count), hecke::format_double(res.predicted),
             hecke::format_double(ratio)});
    write_output(o.out, csv.buf);
  }
  return 0;
}

// -------------------------------------------------------------- square-equi

int run_square(const Options &o) {
  auto ctx = hecke::make_context(o.q);
  mpq_class tau_q;
  hecke::AlgNum tau = tau_value(ctx, o.tau, &tau_q);
  auto res = hecke::square_equidistribution(ctx, tau, o.grid_n);

  if (!o.svg.empty()) {
    // scatter of the actual vectors, rebuilt from the [0,1] strip plus the
    // eight reflections (boundary vectors get fewer distinct images)
    std::vector<std::pair<double, double>> pts;
    hecke::StripSpec spec{tau, ctx.integer(0), ctx.integer(1)};
    hecke::enumerate_strip(ctx, spec, [&](const hecke::PlaneVec &v) {
      double x = v.x.to_double(), y = v.y.to_double();
      if (v.y.sign() == 0) {
        pts.push_back({x, 0});
        pts.push_back({-x, 0});
        pts.push_back({0, x});
        pts.push_back({0, -x});
      } else if (v.x == v.y) {
        pts.push_back({x, x});
        pts.push_back({-x, x});
        pts.push_back({x, -x});
        pts.push_back({-x, -x});
      } else {
        for (double sx : {1.0, -1.0})
          for (double sy : {1.0, -1.0}) {
            pts.push_back({sx * x, sy * y});
            pts.push_back({sx * y, sy * x});
          }
      }
    });
    write_output(o.svg, hecke::svg_points(pts, tau.to_double()));
  }

  if (o.format == "json") {
    json j;
    j["kind"] = "square_equi";
    j["meta"] = {{"q", o.q}, {"tau", qstr(tau_q)}, {"grid_n", res.grid_n}};
    j["cells"] = json::array();
    for (int iy = 0; iy < res.grid_n; ++iy) {
      json row = json::array();
      for (int ix = 0; ix < res.grid_n; ++ix)
        row.push_back(res.cells[(size_t)iy * res.grid_n + ix]);
      j["cells"].push_back(row);
    }
    j["result"] = {{"total_vectors", res.total_vectors},
                   {"total_increments", res.total_increments},
                   {"chi2", res.chi2},
                   {"max_rel_dev", res.max_rel_dev}};
    write_output(o.out, dump_json(j));
  } else {
    Csv csv;
    csv.meta("q", std::to_string(o.q));
    csv.meta("tau", qstr(tau_q));
    csv.meta("grid_n", std::to_string(res.grid_n));
    csv.meta("total_vectors", std::to_string(res.total_vectors));
    csv.meta("total_increments", std::to_string(res.total_increments));
    csv.meta("chi2", hecke::format_double(res.chi2));
    csv.meta("max_rel_dev", hecke::format_double(res.max_rel_dev));
    csv.line("iy,ix,count");
    for (int iy = 0; iy < res.grid_n; ++iy)
      for (int ix = 0; ix < res.grid_n; ++ix)
        csv.row({std::to_string(iy), std::to_string(ix),
                 std::to_string(res.cells[(size_t)iy * res.grid_n + ix])});
    write_output(o.out, csv.buf);
  }
  return 0;
}

// ----------------------------------------------------------------- ford-svg

int run_ford(const Options &o) {
  auto ctx = hecke::make_context(o.q);
  mpq_class tau_q;
  hecke::AlgNum tau = tau_value(ctx, o.tau, &tau_q);
  auto [lo_q, hi_q] = parse_interval(o.interval);
  hecke::FordAudit audit;
  auto circles = hecke::ford_circles(ctx, tau, ctx.rational(lo_q),
                                     ctx.rational(hi_q), &audit);
  write_output(o.svg, hecke::svg_ford(circles, mpq_class(lo_q).get_d(),
                                      mpq_class(hi_q).get_d()));

  if (o.format == "json") {
    json j;
    j["kind"] = "ford_audit";
    j["meta"] = {{"q", o.q},
                 {"tau", qstr(tau_q)},
                 {"interval", qstr(lo_q) + "," + qstr(hi_q)}};
    j["result"] = {{"circles", (long)circles.size()},
                   {"tangent_pairs", audit.tangent_pairs},
                   {"external_pairs", audit.external_pairs},
                   {"overlap_pairs", audit.overlap_pairs},
                   {"svg", o.svg}};
    write_output(o.out, dump_json(j));
  } else {
    Csv csv;
    csv.meta("q", std::to_string(o.q));
    csv.meta("tau", qstr(tau_q));
    csv.meta("interval", qstr(lo_q) + "," + qstr(hi_q));
    csv.meta("svg", o.svg);
    csv.line("circles,tangent_pairs,external_pairs,overlap_pairs");
    csv.row({std::to_string(circles.size()),
             std::to_string(audit.tangent_pairs),
             std::to_string(audit.external_pairs),
             std::to_string(audit.overlap_pairs)});
    write_output(o.out, csv.buf);
  }
  return 0;
}

// ---------------------------------------------------------------- dirichlet

int run_dirichlet(const Options &o) {
  auto ctx = hecke::make_context(o.q);
  mpq_class alpha_q = parse_rational(o.alpha);
  if (alpha_q < 0 || alpha_q > 1) fail("--alpha must lie in [0, 1]");
  hecke::AlgNum alpha = ctx.rational(alpha_q);
  auto res = hecke::dirichlet_descent(ctx, alpha, o.count);

  hecke::AlgNum one = ctx.integer(1), two = ctx.integer(2);
  struct Row {
    const hecke::PlaneVec *v;
    double err, bound;
    int pass, exact;
  };
  std::vector<Row> rows;
  auto classify = [&](const hecke::PlaneVec &v) {
    hecke::AlgNum d = alpha * v.x - v.y;
    if (d.sign() < 0) d = -d;
    int pass = hecke::cmp(two * v.x * d, one) <= 0 ? 1 : 0;
    int exact = res.exact_vector && v == *res.exact_vector ? 1 : 0;
    double err = (d / v.x).to_double();
    double bound = (one / (two * v.x * v.x)).to_double();
    rows.push_back({&v, err, bound, pass, exact});
  };
  for (const auto &v : res.approximants) classify(v);
  bool exact_listed = false;
  for (const Row &r : rows) exact_listed |= r.exact == 1;
  if (res.exact_vector && !exact_listed) classify(*res.exact_vector);

  if (o.format == "json") {
    json j;
    j["kind"] = "dirichlet";
    j["meta"] = {{"q", o.q}, {"alpha", qstr(alpha_q)}, {"count", o.count}};
    j["columns"] = json::array({"index", "x", "y", "x_float", "y_float",
                                "error_float", "bound_float", "pass", "exact"});
    j["rows"] = json::array();
    for (size_t i = 0; i < rows.size(); ++i) {
      const Row &r = rows[i];
      j["rows"].push_back(json::array(
          {(long)i, r.v->x.serialize(), r.v->y.serialize(),
           r.v->x.to_double(), r.v->y.to_double(), r.err, r.bound, r.pass,
           r.exact}));
    }
    write_output(o.out, dump_json(j));
  } else {
    Csv csv;
    csv.meta("q", std::to_string(o.q));
    csv.meta("alpha", qstr(alpha_q));
    csv.line("index,x,y,x_float,y_float,error_float,bound_float,pass,exact");
    for (size_t i = 0; i < rows.size(); ++i) {
      const Row &r = rows[i];
      csv.row({std::to_string(i), hecke::csv_quote(r.v->x.serialize()),
               hecke::csv_quote(r.v->y.serialize()),
               hecke::format_double(r.v->x.to_double()),
               hecke::format_double(r.v->y.to_double()),
               hecke::format_double(r.err), hecke::format_double(r.bound),
               std::to_string(r.pass), std::to_string(r.exact)});
    }
    write_output(o.out, csv.buf);
  }
  return 0;
}

// ----------------------------------------------------------------- selftest

int run_selftest(const Options &o) {
  struct Check {
    std::string name;
    bool ok;
  };
  std::vector<Check> checks;
  auto add = [&](const std::string &name, bool ok) {
    checks.push_back({name, ok});
  };

  {
    auto ctx = hecke::make_context(3);
    auto p0 = hecke::make_triangle_point(ctx, ctx.rational(1, 2),
                                         ctx.rational(2, 3));
    auto p = p0;
    bool back = false;
    for (int s = 0; s < 12; ++s) p = hecke::return_step(ctx, p).next;
    back = p == p0;
    add("return-map-period-12", back);

    long phi_sum = 1;  // the seed (1,0)
    for (long k = 1; k <= 30; ++k) {
      long c = 0;
      for (long j = 1; j <= k; ++j) {
        long a = k, b = j;
        while (b) {
          long t = a % b;
          a = b;
          b = t;
        }
        if (a == 1) ++c;
      }
      phi_sum += c;
    }
    hecke::StripSpec spec{ctx.integer(30), ctx.integer(0), ctx.integer(1)};
    add("strip-count-totients",
        (long)hecke::enumerate_strip(ctx, spec).size() == phi_sum);

    auto mr = hecke::mean_roof_quadrature(ctx, 1e-8);
    add("mean-roof-closed-form",
        std::fabs(mr.value - 3.2898681336964529) < 1e-6);

    hecke::FordAudit audit;
    auto circles = hecke::ford_circles(ctx, ctx.integer(5), ctx.integer(0),
                                       ctx.integer(1), &audit);
    add("ford-tangency", circles.size() == 11 && audit.tangent_pairs == 10 &&
                             audit.external_pairs == 0 &&
                             audit.overlap_pairs == 0);

    hecke::AlgNum alpha = ctx.rational(890117, 1250000);
    auto dr = hecke::dirichlet_descent(ctx, alpha, 3);
    bool ok = dr.approximants.size() >= 3;
    hecke::AlgNum one = ctx.integer(1), two = ctx.integer(2);
    for (const auto &v : dr.approximants) {
      hecke::AlgNum d = alpha * v.x - v.y;
      if (d.sign() < 0) d = -d;
      ok = ok && hecke::cmp(two * v.x * d, one) <= 0;
    }
    auto hit = hecke::dirichlet_descent(ctx, ctx.rational(2, 7), 5);
    ok = ok && hit.exact_vector &&
         *hit.exact_vector == hecke::PlaneVec{ctx.integer(7), ctx.integer(2)};
    add("dirichlet-witnesses", ok);
  }

  {
    auto ctx = hecke::make_context(5);
    hecke::AlgNum tau = ctx.integer(10);
    hecke::StripSpec spec{tau, ctx.integer(0), ctx.integer(1)};
    auto direct = hecke::enumerate_strip(ctx, spec);
    auto st = hecke::seed_identity(ctx, tau);
    auto walked = hecke::take_until_slope(st, ctx.integer(1));
    walked.insert(walked.begin(), {ctx.integer(1), ctx.integer(0)});
    add("next-term-matches-strip", walked == direct);

    auto step = hecke::return_step(
        ctx, hecke::make_triangle_point(ctx, ctx.integer(1), ctx.integer(1)));
    add("fan-corner-step",
        step.region == 4 && step.k == 1 &&
            step.next == hecke::make_triangle_point(
                             ctx, ctx.integer(1), ctx.lambda() - ctx.integer(1)));

    auto eq = hecke::square_equidistribution(ctx, tau, 4);
    bool sym = true;
    for (int iy = 0; iy < 4; ++iy)
      for (int ix = 0; ix < 4; ++ix) {
        long c = eq.cells[(size_t)iy * 4 + ix];
        sym = sym && c == eq.cells[(size_t)iy * 4 + (3 - ix)];
        sym = sym && c == eq.cells[(size_t)(3 - iy) * 4 + ix];
        sym = sym && c == eq.cells[(size_t)ix * 4 + iy];
      }
    add("square-symmetry", sym);
  }

  bool all = true;
  for (const Check &c : checks) all = all && c.ok;

  if (o.format == "json") {
    json j;
    j["kind"] = "selftest";
    j["meta"] = {{"q", 3}};
    json list = json::array();
    for (const Check &c : checks)
      list.push_back({{"name", c.name}, {"ok", c.ok}});
    j["result"] = {{"checks", list}, {"passed", all}};
    write_output(o.out, dump_json(j));
  } else {
    Csv csv;
    csv.line("check,ok");
    for (const Check &c : checks) csv.row({c.name, c.ok ? "1" : "0"});
    write_output(o.out, csv.buf);
  }
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char **argv) {
  Options o;
  CLI::App app{"discrete Hecke group orbits: exact enumeration, return-map "
               "orbits, and statistics"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "read option defaults from an INI/TOML file");
  app.add_option("--format", o.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_option("--out", o.out, "write the main output to this file");
  app.add_option("--threads", o.threads,
                 "Monte Carlo worker threads; 0 reads HECKE_ORBITS_THREADS, "
                 "then the hardware count")
      ->capture_default_str();

  auto add_q = [&](CLI::App *c) {
    c->add_option("--q", o.q, "Hecke group index, at least 3")
        ->required()
        ->check(CLI::Range(3, 1000));
  };

  auto *enu = app.add_subcommand(
      "enumerate", "orbit vectors with 0 < x <= tau in a slope interval");
  add_q(enu);
  enu->add_option("--tau", o.tau, "strip width, rational, >= 1")
      ->capture_default_str();
  enu->add_option("--interval", o.interval,
                  "closed slope interval 'lo,hi' with rational ends")
      ->capture_default_str();

  auto *orb = app.add_subcommand(
      "orbit", "iterate the return map from a Farey-triangle point");
  add_q(orb);
  orb->add_option("--a", o.a_str,
                  "first coordinate: rational like 5/7, or the coefficient "
                  "form c0,c1,../den")
      ->required();
  orb->add_option("--b", o.b_str, "second coordinate")->required();
  orb->add_option("--n", o.steps, "number of steps")
      ->capture_default_str()
      ->check(CLI::Range(1L, 100000000L));

  auto *stats = app.add_subcommand("stats", "statistics of the orbit");
  stats->require_subcommand(1);
  stats->fallthrough();

  auto *mr = stats->add_subcommand("mean-roof",
                                   "mean roof value over the Farey triangle");
  add_q(mr);
  mr->add_option("--tol", o.tol, "quadrature tolerance")->capture_default_str();
  mr->add_option("--samples", o.samples,
                 "accepted sample target; switches to Monte Carlo");
  mr->add_option("--seed", o.seed, "RNG seed, required with --samples");
  mr->add_option("--cap", o.cap, "roof cap for sampling, >= 100")
      ->capture_default_str();

  auto *sg = stats->add_subcommand(
      "slope-gap", "tail distribution of normalized slope gaps");
  auto *cd = stats->add_subcommand(
      "cent-dist", "tail distribution of scaled Ford-center distances");
  for (CLI::App *c : {sg, cd}) {
    add_q(c);
    c->add_option("--grid", o.grid, "t grid 'start:step:end'")
        ->capture_default_str();
    c->add_option("--kind", o.kind, "table kind, inferred when absent")
        ->check(CLI::IsMember({"empirical", "limiting"}));
    c->add_option("--tau", o.tau, "strip width for the empirical table");
    c->add_option("--interval", o.interval,
                  "slope window for the empirical table, lo >= 0")
        ->capture_default_str();
    c->add_option("--samples", o.samples, "sample count for the limiting table");
    c->add_option("--seed", o.seed, "RNG seed, required with --samples");
    c->add_option("--svg", o.svg, "also write the curve as an SVG file");
  }

  auto *ct = stats->add_subcommand(
      "count-triangle",
      "orbit vectors in a dilated triangle against the area law");
  add_q(ct);
  ct->add_option("--tau", o.tau, "dilation factor")->capture_default_str();
  ct->add_option("--e1", o.e1, "first edge vector 'x,y', rational entries")
      ->capture_default_str();
  ct->add_option("--e2", o.e2, "second edge vector 'x,y'")
      ->capture_default_str();
  ct->add_flag("--exclude-edge1", o.excl_e1, "drop vectors on the e1 ray");
  ct->add_flag("--exclude-edge2", o.excl_e2, "drop vectors on the e2 ray");
  ct->add_flag("--exclude-far", o.excl_far, "drop vectors on the far side");
  ct->add_option("--mean-roof", o.mean_roof_hint,
                 "precomputed mean roof; skips the internal quadrature");

  auto *se = stats->add_subcommand(
      "square-equi", "cell counts of orbit vectors in [-tau,tau]^2");
  add_q(se);
  se->add_option("--tau", o.tau, "half side of the square")
      ->capture_default_str();
  se->add_option("--grid-n", o.grid_n, "cells per axis")
      ->check(CLI::Range(2, 4096))
      ->capture_default_str();
  se->add_option("--svg", o.svg, "also write the point cloud as an SVG file");

  auto *fs = stats->add_subcommand(
      "ford-svg", "Ford circles of a sweep: SVG plus exact tangency audit");
  add_q(fs);
  fs->add_option("--tau", o.tau, "strip width")->capture_default_str();
  fs->add_option("--interval", o.interval, "slope window, lo >= 0")
      ->capture_default_str();
  fs->add_option("--svg", o.svg, "SVG output path")->required();

  auto *di = stats->add_subcommand(
      "dirichlet", "approximation witnesses 2 x^2 |alpha - y/x| <= 1");
  add_q(di);
  di->add_option("--alpha", o.alpha, "target in [0, 1], rational or decimal")
      ->required();
  di->add_option("--count", o.count, "number of witnesses")
      ->capture_default_str()
      ->check(CLI::Range(1L, 1000000L));

  auto *st = app.add_subcommand("selftest", "fast built-in consistency checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*enu) return run_enumerate(o);
    if (*orb) return run_orbit(o);
    if (*mr)
      return run_mean_roof(o, mr->count("--samples") > 0,
                           mr->count("--seed") > 0);
    if (*sg)
      return run_dist(o, hecke::Statistic::slope_gap, sg->count("--tau") > 0,
                      sg->count("--samples") > 0, sg->count("--seed") > 0);
    if (*cd)
      return run_dist(o, hecke::Statistic::cent_dist, cd->count("--tau") > 0,
                      cd->count("--samples") > 0, cd->count("--seed") > 0);
    if (*ct) return run_triangle(o);
    if (*se) return run_square(o);
    if (*fs) return run_ford(o);
    if (*di) return run_dirichlet(o);
    if (*st) return run_selftest(o);
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
