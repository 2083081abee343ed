#include "mvlc/quadrature.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <numbers>

#include "mvlc/errors.hpp"
#include "mvlc/metric.hpp"

namespace mvlc {

namespace {

constexpr int kMaxOrder = 4096;

void check_order(int order) {
  if (order < 2 || order > kMaxOrder) {
    throw DomainError("quadrature order must be in [2, " + std::to_string(kMaxOrder) + "], got " +
                      std::to_string(order));
  }
}

void check_box(double lo, double hi) {
  if (!(lo < hi)) {
    throw DomainError("quadrature box needs lo < hi, got [" + std::to_string(lo) + ", " +
                      std::to_string(hi) + "]");
  }
}

// Golub-Welsch: nodes/weights from the symmetric tridiagonal Jacobi matrix.
// Weight of node i is mu0 * (first eigenvector component)^2.
Nodes1D golub_welsch(const RealVector& subdiag, double mu0) {
  int n = static_cast<int>(subdiag.size()) + 1;
  RealVector diag = RealVector::Zero(n);
  Eigen::SelfAdjointEigenSolver<RealMatrix> solver;
  solver.computeFromTridiagonal(diag, subdiag, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw NoConvergence("quadrature node computation failed");
  }
  Nodes1D out;
  out.x.resize(n);
  out.w.resize(n);
  for (int i = 0; i < n; ++i) {
    out.x[i] = solver.eigenvalues()(i);
    double v0 = solver.eigenvectors()(0, i);
    out.w[i] = mu0 * v0 * v0;
  }
  return out;
}

Nodes1D materialize_gauss_legendre(const Rule1D& r) {
  RealVector sub(r.order - 1);
  for (int k = 1; k < r.order; ++k) {
    sub(k - 1) = k / std::sqrt(4.0 * k * k - 1.0);
  }
  Nodes1D base = golub_welsch(sub, 2.0);
  double mid = 0.5 * (r.lo + r.hi);
  double half = 0.5 * (r.hi - r.lo);
  Nodes1D out;
  out.x.resize(base.x.size());
  out.w.resize(base.w.size());
  for (size_t i = 0; i < base.x.size(); ++i) {
    out.x[i] = mid + half * base.x[i];
    out.w[i] = half * base.w[i];
  }
  return out;
}

Nodes1D materialize_trapezoid(const Rule1D& r) {
  Nodes1D out;
  int n = r.order;
  double h = (r.hi - r.lo) / (n - 1);
  out.x.resize(n);
  out.w.resize(n);
  for (int i = 0; i < n; ++i) {
    out.x[i] = r.lo + h * i;
    out.w[i] = (i == 0 || i == n - 1) ? 0.5 * h : h;
  }
  return out;
}

Nodes1D materialize_gauss_hermite(const Rule1D& r) {
  RealVector sub(r.order - 1);
  for (int k = 1; k < r.order; ++k) {
    sub(k - 1) = std::sqrt(0.5 * k);
  }
  double mu0 = std::sqrt(std::numbers::pi);
  Nodes1D base = golub_welsch(sub, mu0);
  Nodes1D out;
  out.x.resize(base.x.size());
  out.w.resize(base.w.size());
  for (size_t i = 0; i < base.x.size(); ++i) {
    double s = base.x[i];
    out.x[i] = r.center + r.scale * s;
    if (base.w[i] <= 0.0) {
      out.w[i] = 0.0;
      continue;
    }
    // w * e^{s^2} computed in log space: w underflows long before the product.
    out.w[i] = r.scale * std::exp(std::log(base.w[i]) + s * s);
  }
  return out;
}

}  // namespace

Rule1D gauss_legendre(int order, double lo, double hi) {
  check_order(order);
  check_box(lo, hi);
  Rule1D r;
  r.kind = RuleKind::GaussLegendre;
  r.order = order;
  r.lo = lo;
  r.hi = hi;
  return r;
}

Rule1D trapezoid(int points, double lo, double hi) {
  check_order(points);
  check_box(lo, hi);
  Rule1D r;
  r.kind = RuleKind::Trapezoid;
  r.order = points;
  r.lo = lo;
  r.hi = hi;
  return r;
}

Rule1D gauss_hermite(int order, double center, double scale) {
  check_order(order);
  if (!(scale > 0.0)) {
    throw DomainError("gauss_hermite scale must be positive");
  }
  Rule1D r;
  r.kind = RuleKind::GaussHermite;
  r.order = order;
  r.center = center;
  r.scale = scale;
  return r;
}

Nodes1D materialize_rule(const Rule1D& rule) {
  switch (rule.kind) {
    case RuleKind::GaussLegendre:
      return materialize_gauss_legendre(rule);
    case RuleKind::Trapezoid:
      return materialize_trapezoid(rule);
    case RuleKind::GaussHermite:
      return materialize_gauss_hermite(rule);
  }
  throw DomainError("unknown quadrature rule kind");
}

QuadratureGrid::QuadratureGrid(std::vector<Rule1D> rules, size_t node_cap)
    : rules_(std::move(rules)), node_cap_(node_cap) {
  if (rules_.empty()) {
    throw DomainError("quadrature grid needs at least one dimension");
  }
  for (const Rule1D& r : rules_) {
    check_order(r.order);
    if (r.bounded()) check_box(r.lo, r.hi);
    size_t next = total_nodes_ * static_cast<size_t>(r.order);
    if (next / static_cast<size_t>(r.order) != total_nodes_ || next > node_cap_) {
      throw BudgetError("quadrature grid exceeds the node budget of " +
                        std::to_string(node_cap_) + " nodes");
    }
    total_nodes_ = next;
  }
}

QuadratureGrid::QuadratureGrid(const QuadratureGrid& other)
    : rules_(other.rules_), node_cap_(other.node_cap_), total_nodes_(other.total_nodes_) {
  std::lock_guard<std::mutex> lock(other.cache_mutex_);
  nodes_ = other.nodes_;
}

QuadratureGrid& QuadratureGrid::operator=(const QuadratureGrid& other) {
  if (this == &other) return *this;
  std::shared_ptr<const std::vector<Nodes1D>> shared;
  {
    std::lock_guard<std::mutex> lock(other.cache_mutex_);
    shared = other.nodes_;
  }
  std::lock_guard<std::mutex> lock(cache_mutex_);
  rules_ = other.rules_;
  node_cap_ = other.node_cap_;
  total_nodes_ = other.total_nodes_;
  nodes_ = std::move(shared);
  return *this;
}

const std::vector<Nodes1D>& QuadratureGrid::all_nodes() const {
  std::lock_guard<std::mutex> lock(cache_mutex_);
  if (!nodes_) {
    auto built = std::make_shared<std::vector<Nodes1D>>();
    built->reserve(rules_.size());
    for (const Rule1D& r : rules_) built->push_back(materialize_rule(r));
    nodes_ = std::move(built);
  }
  return *nodes_;
}

void QuadratureGrid::node(size_t index, RealVector& x, double& w) const {
  const std::vector<Nodes1D>& nds = all_nodes();
  x.resize(dims());
  w = 1.0;
  size_t rest = index;
  for (int d = 0; d < dims(); ++d) {
    const Nodes1D& nd = nds[static_cast<size_t>(d)];
    size_t i = rest % nd.x.size();
    rest /= nd.x.size();
    x(d) = nd.x[i];
    w *= nd.w[i];
  }
}

QuadratureGrid QuadratureGrid::refined() const {
  std::vector<Rule1D> rules = rules_;
  for (Rule1D& r : rules) r.order *= 2;
  return QuadratureGrid(std::move(rules), node_cap_);
}

double QuadratureGrid::probe_lo(int d) const {
  const Rule1D& r = rules_[static_cast<size_t>(d)];
  return r.bounded() ? r.lo : r.center - 8.0 * r.scale;
}

double QuadratureGrid::probe_hi(int d) const {
  const Rule1D& r = rules_[static_cast<size_t>(d)];
  return r.bounded() ? r.hi : r.center + 8.0 * r.scale;
}

double QuadratureGrid::probe_mid(int d) const {
  const Rule1D& r = rules_[static_cast<size_t>(d)];
  return r.bounded() ? 0.5 * (r.lo + r.hi) : r.center;
}

IntegrationResult integrate_matrix(const MatrixIntegrand& F, const QuadratureGrid& grid) {
  const size_t n = grid.total_nodes();
  const std::vector<Nodes1D>& nds = grid.all_nodes();
  RealVector x(grid.dims());

  ComplexMatrix sum, comp;
  bool first = true;
  double abs_mass = 0.0;

  for (size_t i = 0; i < n; ++i) {
    double w = 1.0;
    size_t rest = i;
    for (int d = 0; d < grid.dims(); ++d) {
      const Nodes1D& nd = nds[static_cast<size_t>(d)];
      size_t idx = rest % nd.x.size();
      rest /= nd.x.size();
      x(d) = nd.x[idx];
      w *= nd.w[idx];
    }
    ComplexMatrix f = F(x);
    if (!f.allFinite()) {
      throw EvalError("integrand is not finite at node " + format_point(x));
    }
    if (first) {
      sum = ComplexMatrix::Zero(f.rows(), f.cols());
      comp = ComplexMatrix::Zero(f.rows(), f.cols());
      first = false;
    } else if (f.rows() != sum.rows() || f.cols() != sum.cols()) {
      throw DimensionError("integrand changed shape between nodes");
    }
    // Kahan step per entry: term + running compensation.
    ComplexMatrix term = w * f;
    abs_mass += std::abs(w) * f.norm();
    ComplexMatrix y = term - comp;
    ComplexMatrix t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }

  IntegrationResult out;
  out.value = sum;

  double denom = std::max(abs_mass, std::numeric_limits<double>::min());
  double worst = 0.0;
  for (int d = 0; d < grid.dims(); ++d) {
    double cross = 1.0;
    for (int e = 0; e < grid.dims(); ++e) {
      if (e != d) cross *= grid.probe_hi(e) - grid.probe_lo(e);
    }
    for (double face : {grid.probe_lo(d), grid.probe_hi(d)}) {
      RealVector p(grid.dims());
      for (int e = 0; e < grid.dims(); ++e) p(e) = (e == d) ? face : grid.probe_mid(e);
      ComplexMatrix f = F(p);
      if (f.allFinite()) {
        worst = std::max(worst, f.norm() * cross / denom);
      }
    }
  }
  out.tail.boundary_mass_ratio = worst;
  return out;
}

RefinementResult refine_until(const MatrixIntegrand& F, const QuadratureGrid& grid,
                              double target_rel, int max_doublings) {
  if (!(target_rel > 0.0)) {
    throw DomainError("refine_until needs target_rel > 0");
  }
  QuadratureGrid current = grid;
  ComplexMatrix prev = integrate_matrix(F, current).value;
  for (int k = 1; k <= max_doublings; ++k) {
    current = current.refined();
    ComplexMatrix next = integrate_matrix(F, current).value;
    double scale = std::max(next.norm(), std::numeric_limits<double>::min());
    double rel = (next - prev).norm() / scale;
    if (rel <= target_rel) {
      RefinementResult out;
      out.value = next;
      out.achieved_rel = rel;
      out.doublings = k;
      return out;
    }
    prev = next;
  }
  throw NoConvergence("quadrature did not reach relative target " + std::to_string(target_rel) +
                      " after " + std::to_string(max_doublings) + " doublings");
}

}  // namespace mvlc
