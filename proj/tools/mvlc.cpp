// mvlc: verdict sweeps, marginal integration and transform checks for
// matrix-valued metrics, over spec files or built-in gallery entries.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mvlc/constructions.hpp"
#include "mvlc/curvature.hpp"
#include "mvlc/errors.hpp"
#include "mvlc/gallery.hpp"
#include "mvlc/linalg.hpp"
#include "mvlc/metric.hpp"
#include "mvlc/metric_spec.hpp"
#include "mvlc/paley_wiener.hpp"
#include "mvlc/prekopa.hpp"
#include "mvlc/quadrature.hpp"
#include "mvlc/report.hpp"

namespace {

using namespace mvlc;

constexpr const char* kBuiltinPrefix = "builtin:";

std::string hash_hex(uint64_t h) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

struct Target {
  MetricFunction metric;
  std::optional<MetricSpec> spec;
  Json info;
};

Target from_gallery(const std::string& name) {
  Target t;
  const GalleryEntry& e = gallery_entry(name);
  t.metric = e.metric;
  t.spec = e.spec;
  uint64_t h = e.spec ? fnv1a64(spec_to_toml(*e.spec)) : fnv1a64(e.name);
  t.info = Json{{"name", e.name}, {"source", "builtin"}, {"hash", hash_hex(h)}};
  return t;
}

Target load_target(const std::string& arg) {
  if (arg.rfind(kBuiltinPrefix, 0) == 0)
    return from_gallery(arg.substr(std::string(kBuiltinPrefix).size()));
  if (!std::filesystem::exists(arg)) {
    // Bare gallery names work too: `check scalar-times-C`.
    try {
      return from_gallery(arg);
    } catch (const DomainError&) {
      throw DomainError("no such file or builtin metric: '" + arg + "'");
    }
  }
  Target t;
  MetricSpec s = load_metric_spec(arg);
  t.metric = metric_from_spec(s);
  t.info = Json{{"name", s.name}, {"source", "file"}, {"hash", hash_hex(fnv1a64(s.source_text))}};
  t.spec = std::move(s);
  return t;
}

// Variable name -> coordinate index, including x-aliases when no t-block.
std::map<std::string, int> variable_index(const Target& t) {
  std::map<std::string, int> idx;
  if (t.spec) {
    auto names = t.spec->variable_names();
    for (size_t i = 0; i < names.size(); ++i) idx[names[i]] = static_cast<int>(i);
    if (t.spec->dim_t == 0) {
      for (int i = 0; i < t.spec->dim_y; ++i) idx["x" + std::to_string(i + 1)] = i;
    }
  } else {
    for (int i = 0; i < t.metric.dim; ++i) idx["x" + std::to_string(i + 1)] = i;
  }
  return idx;
}

double parse_double(const std::string& s, const std::string& what) {
  try {
    size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw DomainError("malformed " + what + ": '" + s + "' is not a number");
  }
}

int parse_count(const std::string& s, const std::string& what) {
  try {
    size_t used = 0;
    int v = std::stoi(s, &used);
    if (used != s.size() || v < 1) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw DomainError("malformed " + what + ": '" + s + "' is not a positive count");
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string piece;
  while (std::getline(ss, piece, sep)) out.push_back(piece);
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

// Grid syntax: "var=lo:hi:count,var2=lo:hi:count". Unlisted variables stay
// at 0. count=1 places the single point at lo.
std::vector<RealVector> parse_grid(const std::string& text,
                                   const std::map<std::string, int>& var_index, int dim,
                                   size_t cap = 200000) {
  std::vector<std::vector<double>> axes(dim, {0.0});
  std::vector<bool> seen(dim, false);
  if (!text.empty()) {
    for (const std::string& piece : split(text, ',')) {
      size_t eq = piece.find('=');
      if (eq == std::string::npos) {
        throw DomainError("malformed grid component '" + piece + "': expected var=lo:hi:count");
      }
      std::string name = piece.substr(0, eq);
      auto it = var_index.find(name);
      if (it == var_index.end()) {
        throw DomainError("unknown grid variable '" + name + "'");
      }
      int d = it->second;
      if (seen[d]) throw DomainError("grid variable '" + name + "' given twice");
      seen[d] = true;
      auto parts = split(piece.substr(eq + 1), ':');
      if (parts.size() != 3) {
        throw DomainError("malformed grid range '" + piece.substr(eq + 1) +
                         "': expected lo:hi:count");
      }
      double lo = parse_double(parts[0], "grid bound");
      double hi = parse_double(parts[1], "grid bound");
      int count = parse_count(parts[2], "grid count");
      std::vector<double> axis;
      for (int i = 0; i < count; ++i) {
        axis.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1));
      }
      axes[d] = std::move(axis);
    }
  }
  size_t total = 1;
  for (const auto& a : axes) total *= a.size();
  if (total > cap) {
    throw BudgetError("grid has " + std::to_string(total) + " points (cap " +
                      std::to_string(cap) + ")");
  }
  std::vector<RealVector> points;
  points.reserve(total);
  std::vector<size_t> digit(dim, 0);
  for (size_t k = 0; k < total; ++k) {
    RealVector p(dim);
    for (int d = 0; d < dim; ++d) p(d) = axes[d][digit[d]];
    points.push_back(std::move(p));
    for (int d = dim - 1; d >= 0; --d) {
      if (++digit[d] < axes[d].size()) break;
      digit[d] = 0;
    }
  }
  return points;
}

int exit_code_for(int errors, int violations, int no_violation) {
  if (errors > 0) return 1;
  if (violations > 0) return 2;
  if (no_violation > 0) return 3;
  return 0;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << std::scientific << v;
  return os.str();
}

std::string matrix_text(const ComplexMatrix& m) {
  std::ostringstream os;
  os.precision(9);
  os << "[";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (i > 0) os << "; ";
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) os << ", ";
      Complex z = m(i, j);
      os << z.real();
      if (std::abs(z.imag()) > 0) os << (z.imag() > 0 ? "+" : "") << z.imag() << "i";
    }
  }
  os << "]";
  return os.str();
}

void print_verdict_line(std::ostream& os, const SweepEntry& e) {
  os << "  " << format_point(e.point) << ": ";
  if (!e.verdict) {
    os << "error: " << e.error << "\n";
    return;
  }
  const PositivityVerdict& v = *e.verdict;
  os << to_string(v.holds) << "  extreme=" << fmt(v.extreme_value) << "\n";
  if (v.holds == VerdictHolds::ViolationFound) {
    if (v.witness_stacked.size() > 0) {
      os << "    witness u = " << matrix_text(v.witness_stacked.transpose()) << "\n";
    }
    if (v.witness_u.size() > 0) {
      os << "    witness u = " << matrix_text(v.witness_u.transpose())
         << ", v = " << matrix_text(v.witness_v.transpose()) << "\n";
    }
  }
}

// ---------------------------------------------------------------- check ----

struct CheckOptions {
  std::string spec;
  std::string grid;
  std::string mode = "nakano";
  std::string want = "concave";
  double fd_step = 1e-3;
  double tol = 1e-8;
  bool json = false;
  uint64_t seed = SearchBudget{}.seed;
  int threads = 1;
};

int run_check(const CheckOptions& opt) {
  Target t = load_target(opt.spec);
  auto points = parse_grid(opt.grid, variable_index(t), t.metric.dim);

  FDScheme scheme;
  scheme.step_base = opt.fd_step;
  scheme.validate();
  TolerancePolicy tol;
  tol.abs_eig = opt.tol;
  tol.validate();
  SearchBudget budget;
  budget.seed = opt.seed;

  std::vector<VerdictMode> modes;
  bool nakano = opt.mode == "nakano" || opt.mode == "both";
  bool griffiths = opt.mode == "griffiths" || opt.mode == "both";
  bool concave = opt.want == "concave" || opt.want == "both";
  bool convex = opt.want == "convex" || opt.want == "both";
  if (!nakano && !griffiths) throw DomainError("unknown --mode '" + opt.mode + "'");
  if (!concave && !convex) throw DomainError("unknown --want '" + opt.want + "'");
  if (nakano && concave) modes.push_back(VerdictMode::NakanoConcave);
  if (nakano && convex) modes.push_back(VerdictMode::NakanoConvex);
  if (griffiths && concave) modes.push_back(VerdictMode::GriffithsConcave);
  if (griffiths && convex) modes.push_back(VerdictMode::GriffithsConvex);

  int errors = 0, violations = 0, no_violation = 0;
  Json sweeps = Json::array();
  std::ostringstream human;
  human << "spec: " << t.info["name"].get<std::string>() << " ("
        << t.info["source"].get<std::string>() << ", hash "
        << t.info["hash"].get<std::string>() << ")\n";
  for (VerdictMode vm : modes) {
    SweepSummary s = grid_sweep(t.metric, points, scheme, tol, vm, budget, opt.threads);
    errors += s.errors;
    violations += s.violations;
    no_violation += s.no_violation;
    sweeps.push_back(Json{{"mode", to_string(vm)}, {"result", sweep_json(s)}});
    human << "== " << to_string(vm) << " ==\n";
    for (const SweepEntry& e : s.entries) print_verdict_line(human, e);
    human << "summary: " << s.certified << " certified, " << s.violations << " violation(s), "
          << s.no_violation << " inconclusive, " << s.errors << " error(s)";
    if (s.has_verdicts()) {
      human << "; worst extreme " << fmt(s.worst_extreme) << " at " << format_point(s.worst_point);
    }
    human << "\n";
  }

  int code = exit_code_for(errors, violations, no_violation);
  if (opt.json) {
    Json params{{"grid", opt.grid},     {"mode", opt.mode},     {"want", opt.want},
                {"fd_step", opt.fd_step}, {"tol", opt.tol},     {"seed", opt.seed},
                {"threads", opt.threads}};
    Json report = report_envelope("check", t.info, params);
    report["sweeps"] = std::move(sweeps);
    report["exit_code"] = code;
    std::cout << render_json(report);
  } else {
    std::cout << human.str();
    std::cout << "exit: " << code << "\n";
  }
  return code;
}

// -------------------------------------------------------------- prekopa ----

struct PrekopaOptions {
  std::string spec;
  std::string integrate;
  std::string domain;
  std::string region;
  std::string quad = "gauss-legendre:64";
  std::string tgrid;
  double fd_step = 1e-3;
  double tol = 1e-8;
  bool json = false;
};

struct AxisBounds {
  double lo = -8.0;
  double hi = 8.0;
};

Rule1D make_rule(const std::string& quad, double lo, double hi) {
  auto parts = split(quad, ':');
  if (parts.size() != 2) {
    throw DomainError("malformed --quad '" + quad + "': expected kind:order");
  }
  int order = parse_count(parts[1], "quadrature order");
  if (parts[0] == "gauss-legendre") return gauss_legendre(order, lo, hi);
  if (parts[0] == "trapezoid") return trapezoid(order, lo, hi);
  if (parts[0] == "gauss-hermite") return gauss_hermite(order, (lo + hi) / 2, (hi - lo) / 16.0);
  throw DomainError("unknown quadrature kind '" + parts[0] + "'");
}

int run_prekopa(const PrekopaOptions& opt) {
  Target t = load_target(opt.spec);
  auto var_index = variable_index(t);
  std::vector<std::string> names(t.metric.dim);
  for (const auto& [name, idx] : var_index) {
    if (names[idx].empty()) names[idx] = name;
  }

  // Which coordinates get integrated out: --integrate list, else the y-block.
  std::vector<int> integrated;
  if (!opt.integrate.empty()) {
    for (const std::string& v : split(opt.integrate, ',')) {
      auto it = var_index.find(v);
      if (it == var_index.end()) throw DomainError("unknown --integrate variable '" + v + "'");
      if (std::find(integrated.begin(), integrated.end(), it->second) != integrated.end()) {
        throw DomainError("--integrate variable '" + v + "' given twice");
      }
      integrated.push_back(it->second);
    }
  } else if (t.spec && t.spec->dim_t > 0) {
    for (int i = 0; i < t.spec->dim_y; ++i) integrated.push_back(i);
  } else {
    throw DomainError("spec has no y/t split; pass --integrate to choose variables");
  }
  if (static_cast<int>(integrated.size()) >= t.metric.dim) {
    throw DomainError("--integrate must leave at least one variable for the marginal");
  }

  // Per-axis integration bounds; --region box overrides absent --domain so
  // the quadrature nodes line up with the region (exact restriction).
  std::map<int, AxisBounds> bounds;
  for (int d : integrated) bounds[d] = AxisBounds{};

  std::optional<ConvexRegion> region;
  if (!opt.region.empty() && opt.region != "none") {
    auto parts = split(opt.region, ':');
    if (parts[0] == "box" && parts.size() == 3) {
      double lo = parse_double(parts[1], "region bound");
      double hi = parse_double(parts[2], "region bound");
      if (!(lo < hi)) throw DomainError("region box needs lo < hi");
      std::vector<std::pair<double, double>> bb(integrated.size(), {lo, hi});
      region = ConvexRegion::box(bb);
      if (opt.domain.empty()) {
        for (int d : integrated) bounds[d] = AxisBounds{lo, hi};
      }
    } else if (parts[0] == "ball" && parts.size() == 2) {
      double rad = parse_double(parts[1], "region radius");
      region = ConvexRegion::ball(RealVector::Zero(static_cast<int>(integrated.size())), rad);
      if (opt.domain.empty()) {
        for (int d : integrated) bounds[d] = AxisBounds{-rad, rad};
      }
    } else {
      throw DomainError("malformed --region '" + opt.region + "': expected box:lo:hi or ball:r");
    }
  }

  if (!opt.domain.empty()) {
    auto pieces = split(opt.domain, ',');
    for (const std::string& piece : pieces) {
      size_t eq = piece.find('=');
      std::string range = piece;
      std::vector<int> targets = integrated;
      if (eq != std::string::npos) {
        std::string name = piece.substr(0, eq);
        auto it = var_index.find(name);
        if (it == var_index.end()) throw DomainError("unknown --domain variable '" + name + "'");
        targets = {it->second};
        range = piece.substr(eq + 1);
      }
      auto lh = split(range, ':');
      if (lh.size() != 2) throw DomainError("malformed --domain range '" + range + "'");
      double lo = parse_double(lh[0], "domain bound");
      double hi = parse_double(lh[1], "domain bound");
      if (!(lo < hi)) throw DomainError("--domain needs lo < hi");
      for (int d : targets) {
        if (!bounds.count(d)) {
          throw DomainError("--domain variable '" + names[d] + "' is not integrated");
        }
        bounds[d] = AxisBounds{lo, hi};
      }
    }
  }

  std::vector<Rule1D> rules;
  for (int d : integrated) rules.push_back(make_rule(opt.quad, bounds[d].lo, bounds[d].hi));
  QuadratureGrid grid(rules);

  TolerancePolicy tol;
  tol.abs_eig = opt.tol;
  tol.validate();
  FDScheme scheme;
  scheme.step_base = opt.fd_step;
  scheme.validate();

  MarginalMetric marginal(t.metric, integrated, grid, region, tol);

  std::vector<std::string> kept_names;
  std::map<std::string, int> kept_index;
  for (int d = 0; d < t.metric.dim; ++d) {
    if (std::find(integrated.begin(), integrated.end(), d) == integrated.end()) {
      kept_index[names[d]] = static_cast<int>(kept_names.size());
      kept_names.push_back(names[d]);
    }
  }
  auto t_points = parse_grid(opt.tgrid, kept_index, static_cast<int>(kept_names.size()));

  MetricFunction gt = marginal.as_metric();
  int errors = 0, violations = 0, no_violation = 0;
  Json points = Json::array();
  std::ostringstream human;
  human << "spec: " << t.info["name"].get<std::string>() << " ("
        << t.info["source"].get<std::string>() << ", hash "
        << t.info["hash"].get<std::string>() << ")\n";
  human << "integrating:";
  for (int d : integrated) {
    human << " " << names[d] << " in [" << bounds[d].lo << ", " << bounds[d].hi << "]";
  }
  human << " via " << opt.quad << "\n";
  for (const RealVector& tp : t_points) {
    Json entry;
    entry["t"] = real_vector_json(tp);
    try {
      HermitianMatrix value = marginal.value(tp);
      CurvatureTensor T = theta(gt, tp, scheme, tol);
      PositivityVerdict v = nakano_verdict(T, tol, ConcavityMode::Concave);
      entry["gtilde"] = matrix_json(value.mat());
      entry["verdict"] = verdict_json(v);
      switch (v.holds) {
        case VerdictHolds::Certified: break;
        case VerdictHolds::ViolationFound: ++violations; break;
        case VerdictHolds::NoViolationFound: ++no_violation; break;
      }
      human << "t = " << format_point(tp) << ": gtilde = " << matrix_text(value.mat()) << "\n";
      human << "  nakano concave: " << to_string(v.holds) << "  extreme=" << fmt(v.extreme_value)
            << "\n";
    } catch (const TruncationError& e) {
      throw TruncationError(std::string(e.what()) +
                            " (increase --domain width or --quad order)");
    } catch (const Error& e) {
      entry["error"] = e.what();
      ++errors;
      human << "t = " << format_point(tp) << ": error: " << e.what() << "\n";
    }
    points.push_back(std::move(entry));
  }
  human << "worst boundary mass ratio: " << fmt(marginal.worst_tail()) << "\n";

  int code = exit_code_for(errors, violations, no_violation);
  if (opt.json) {
    Json params{{"integrate", opt.integrate}, {"domain", opt.domain}, {"region", opt.region},
                {"quad", opt.quad},           {"tgrid", opt.tgrid},   {"fd_step", opt.fd_step},
                {"tol", opt.tol}};
    Json report = report_envelope("prekopa", t.info, params);
    report["points"] = std::move(points);
    report["worst_tail"] = marginal.worst_tail();
    report["exit_code"] = code;
    std::cout << render_json(report);
  } else {
    std::cout << human.str();
    std::cout << "exit: " << code << "\n";
  }
  return code;
}

// ------------------------------------------------------------------- pw ----

struct PwOptions {
  std::string spec;
  std::string xi_grid;
  std::string test_f = "gauss";
  int refine = 0;
  double threshold = 1e-3;
  bool json = false;
};

double hermite_poly(int k, double x) {
  double h0 = 1.0, h1 = 2.0 * x;
  if (k == 0) return h0;
  if (k == 1) return h1;
  for (int i = 2; i <= k; ++i) {
    double h2 = 2.0 * x * h1 - 2.0 * (i - 1) * h0;
    h0 = h1;
    h1 = h2;
  }
  return h1;
}

SampledVectorFunction make_test_function(const std::string& kind, int dim, int rank) {
  int hermite_k = 0;
  if (kind != "gauss") {
    auto parts = split(kind, ':');
    if (parts.size() != 2 || parts[0] != "hermite") {
      throw DomainError("unknown --test-f '" + kind + "': expected gauss or hermite:k");
    }
    hermite_k = parse_count(parts[1], "hermite index");
  }
  SampledVectorFunction f;
  f.dim_in = dim;
  f.rank = rank;
  f.name = kind;
  f.evaluator = [dim, rank, hermite_k](const RealVector& xi) {
    double weight = std::exp(-xi.squaredNorm());
    if (hermite_k > 0) weight *= hermite_poly(hermite_k, xi(0));
    ComplexVector out(rank);
    double p = 1.0;
    for (int i = 0; i < rank; ++i) {
      out(i) = Complex(p * weight, 0.0);
      p *= xi(0);
    }
    (void)dim;
    return out;
  };
  return f;
}

QuadratureGrid uniform_grid(int dim, double half_width, int order) {
  std::vector<Rule1D> rules(dim, gauss_legendre(order, -half_width, half_width));
  return QuadratureGrid(rules);
}

int run_pw(const PwOptions& opt) {
  Target t = load_target(opt.spec);
  int n = t.metric.dim;
  int r = t.metric.rank;
  if (n > 2) {
    throw DomainError("transform checks support metrics in at most 2 variables, got " +
                      std::to_string(n));
  }

  TolerancePolicy tol;
  SampledVectorFunction f = make_test_function(opt.test_f, n, r);

  // Window policy, driven by the truncation monitors: the extension integrand
  // f(xi)e^{xi.y} peaks at xi = y/2, so the xi window must exceed y_width/2 by
  // the decay margin; e^{2 xi.y} g(y) peaks at y = xi, so the y window must
  // exceed xi_width by the same margin. Orders resolve unit-width Gaussians.
  // The xi order also sets the noise floor of the extension at large |x|
  // (the true transform value there is pure cancellation), so it runs hot.
  const double xi_width = 14.0, x_width = 9.0, y_width = 19.0;
  const int xi_order = 192, x_order = 64, y_order = 160;

  std::ostringstream human;
  human << "spec: " << t.info["name"].get<std::string>() << " ("
        << t.info["source"].get<std::string>() << ", hash "
        << t.info["hash"].get<std::string>() << ")\n";

  Json sequence = Json::array();
  double final_rel = 0.0, final_lhs = 0.0, final_rhs = 0.0;
  for (int level = 0; level <= opt.refine; ++level) {
    int scale = 1 << level;
    QuadratureGrid xi_g = uniform_grid(n, xi_width, xi_order * scale);
    QuadratureGrid x_g = uniform_grid(n, x_width, x_order * scale);
    QuadratureGrid y_g = uniform_grid(n, y_width, y_order * scale);
    ParsevalResult res = parseval_check(f, t.metric, xi_g, x_g, y_g, tol);
    sequence.push_back(Json{{"level", level},
                            {"lhs", res.lhs},
                            {"rhs", res.rhs},
                            {"rel_err", res.rel_err}});
    human << "level " << level << ": lhs=" << fmt(res.lhs) << " rhs=" << fmt(res.rhs)
          << " rel_err=" << fmt(res.rel_err) << "\n";
    final_rel = res.rel_err;
    final_lhs = res.lhs;
    final_rhs = res.rhs;
  }

  // Transformed-metric table on the user-facing xi grid.
  std::map<std::string, int> xi_index;
  for (int i = 0; i < n; ++i) xi_index["xi" + std::to_string(i + 1)] = i;
  std::string xi_grid_text = opt.xi_grid;
  if (xi_grid_text.empty()) {
    for (int i = 0; i < n; ++i) {
      if (i > 0) xi_grid_text += ",";
      xi_grid_text += "xi" + std::to_string(i + 1) + "=-2:2:5";
    }
  }
  auto xi_points = parse_grid(xi_grid_text, xi_index, n);
  int table_scale = 1 << opt.refine;
  QuadratureGrid y_table = uniform_grid(n, y_width, y_order * table_scale);
  Json table = Json::array();
  for (const RealVector& xi : xi_points) {
    HermitianMatrix gt = metric_laplace_transform(t.metric, xi, y_table, tol);
    table.push_back(Json{{"xi", real_vector_json(xi)}, {"value", matrix_json(gt.mat())}});
    human << "gtilde(" << format_point(xi) << ") = " << matrix_text(gt.mat()) << "\n";
  }

  int code = final_rel <= opt.threshold ? 0 : 2;
  human << "parseval: lhs=" << fmt(final_lhs) << " rhs=" << fmt(final_rhs)
        << " rel_err=" << fmt(final_rel) << " threshold=" << fmt(opt.threshold) << "\n";
  if (opt.json) {
    Json params{{"xi_grid", xi_grid_text}, {"test_f", opt.test_f},
                {"refine", opt.refine},    {"threshold", opt.threshold}};
    Json report = report_envelope("pw", t.info, params);
    report["parseval"] = Json{{"sequence", std::move(sequence)},
                              {"lhs", final_lhs},
                              {"rhs", final_rhs},
                              {"rel_err", final_rel},
                              {"threshold", opt.threshold}};
    report["gtilde_table"] = std::move(table);
    report["exit_code"] = code;
    std::cout << render_json(report);
  } else {
    std::cout << human.str();
    std::cout << "exit: " << code << "\n";
  }
  return code;
}

// -------------------------------------------------------------- gallery ----

int run_gallery_list(bool json) {
  if (json) {
    Json entries = Json::array();
    for (const GalleryEntry& e : gallery_list()) {
      entries.push_back(Json{{"name", e.name},
                             {"description", e.description},
                             {"dim", e.metric.dim},
                             {"rank", e.metric.rank},
                             {"exportable", e.spec.has_value()}});
    }
    Json report = report_envelope("gallery-list", nullptr, Json::object());
    report["entries"] = std::move(entries);
    std::cout << render_json(report);
  } else {
    for (const GalleryEntry& e : gallery_list()) {
      std::cout << e.name << "  (dim " << e.metric.dim << ", rank " << e.metric.rank << ")  "
                << e.description << "\n";
    }
  }
  return 0;
}

int run_gallery_export(const std::string& name, const std::string& out) {
  const GalleryEntry& e = gallery_entry(name);
  if (!e.spec) {
    throw DomainError("gallery entry '" + name + "' is programmatic and has no spec form");
  }
  std::string toml = spec_to_toml(*e.spec);
  if (out.empty() || out == "-") {
    std::cout << toml;
  } else {
    std::ofstream file(out, std::ios::binary);
    if (!file) throw DomainError("cannot open '" + out + "' for writing");
    file << toml;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"curvature verdicts, marginal integration and transform checks "
               "for matrix-valued metrics"};
  app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);
  app.require_subcommand(1);

  CheckOptions check;
  auto* c = app.add_subcommand("check", "log-concavity/convexity verdict sweep over a grid");
  c->add_option("spec", check.spec, "spec file path or builtin:<name>")->required();
  c->add_option("--grid", check.grid, "evaluation grid, var=lo:hi:count[,var2=...]");
  c->add_option("--mode", check.mode, "nakano|griffiths|both")->capture_default_str();
  c->add_option("--want", check.want, "concave|convex|both")->capture_default_str();
  c->add_option("--fd-step", check.fd_step, "finite-difference base step")->capture_default_str();
  c->add_option("--tol", check.tol, "absolute eigenvalue tolerance")->capture_default_str();
  c->add_flag("--json", check.json, "emit a JSON report on stdout");
  c->add_option("--seed", check.seed, "search seed")->capture_default_str();
  c->add_option("--threads", check.threads, "worker threads")->capture_default_str();

  PrekopaOptions prekopa;
  auto* p = app.add_subcommand("prekopa", "integrate out variables and test the marginal");
  p->add_option("spec", prekopa.spec, "spec file path or builtin:<name>")->required();
  p->add_option("--integrate", prekopa.integrate, "comma-separated variables to integrate");
  p->add_option("--domain", prekopa.domain, "integration window lo:hi or var=lo:hi,...");
  p->add_option("--region", prekopa.region, "restrict integration: box:lo:hi or ball:r");
  p->add_option("--quad", prekopa.quad, "gauss-legendre:k|trapezoid:k|gauss-hermite:k")
      ->capture_default_str();
  p->add_option("--tgrid", prekopa.tgrid, "marginal evaluation grid, var=lo:hi:count[,...]");
  p->add_option("--fd-step", prekopa.fd_step, "finite-difference base step")
      ->capture_default_str();
  p->add_option("--tol", prekopa.tol, "absolute eigenvalue tolerance")->capture_default_str();
  p->add_flag("--json", prekopa.json, "emit a JSON report on stdout");

  PwOptions pw;
  auto* w = app.add_subcommand("pw", "transform-side isometry check");
  w->add_option("spec", pw.spec, "spec file path or builtin:<name>")->required();
  w->add_option("--xi-grid", pw.xi_grid, "table grid for the transformed metric");
  w->add_option("--test-f", pw.test_f, "gauss or hermite:k")->capture_default_str();
  w->add_option("--refine", pw.refine, "number of grid doublings")->capture_default_str();
  w->add_option("--threshold", pw.threshold, "relative-error acceptance threshold")
      ->capture_default_str();
  w->add_flag("--json", pw.json, "emit a JSON report on stdout");

  auto* g = app.add_subcommand("gallery", "built-in example metrics");
  bool gallery_json = false;
  std::string export_name, export_out;
  auto* gl = g->add_subcommand("list", "list built-in metrics");
  gl->add_flag("--json", gallery_json, "emit a JSON report on stdout");
  auto* ge = g->add_subcommand("export", "write a built-in metric as a spec file");
  ge->add_option("name", export_name, "gallery entry name")->required();
  ge->add_option("--out", export_out, "output path (default stdout)");
  g->require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return e.get_exit_code() == 0 ? app.exit(e) : (app.exit(e), 1);
  }

  try {
    if (*c) return run_check(check);
    if (*p) return run_prekopa(prekopa);
    if (*w) return run_pw(pw);
    if (*gl) return run_gallery_list(gallery_json);
    if (*ge) return run_gallery_export(export_name, export_out);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
