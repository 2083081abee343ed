#include "mvlc/prekopa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "mvlc/errors.hpp"

namespace mvlc {

namespace {

// Minimizes the worst normalized constraint violation by subgradient steps;
// succeeds when a strictly interior point is found.
RealVector interior_point(const std::vector<std::pair<RealVector, double>>& constraints,
                          int dim) {
  auto violation = [&](const RealVector& x) {
    double worst = -std::numeric_limits<double>::infinity();
    size_t arg = 0;
    for (size_t i = 0; i < constraints.size(); ++i) {
      const auto& [a, b] = constraints[i];
      double v = (a.dot(x) - b) / a.norm();
      if (v > worst) {
        worst = v;
        arg = i;
      }
    }
    return std::make_pair(worst, arg);
  };

  RealVector x = RealVector::Zero(dim);
  RealVector best_x = x;
  double best = violation(x).first;
  for (int k = 1; k <= 2000 && best >= -1e-6; ++k) {
    auto [v, i] = violation(x);
    const RealVector& a = constraints[i].first;
    x -= (2.0 / std::sqrt(static_cast<double>(k))) * a / a.norm();
    double nv = violation(x).first;
    if (nv < best) {
      best = nv;
      best_x = x;
    }
  }
  if (best >= 0.0) {
    throw DomainError("halfspace intersection has empty interior (best margin " +
                      std::to_string(best) + ")");
  }
  return best_x;
}

}  // namespace

ConvexRegion ConvexRegion::box(std::vector<std::pair<double, double>> bounds) {
  if (bounds.empty()) {
    throw DomainError("box region needs at least one dimension");
  }
  for (const auto& [lo, hi] : bounds) {
    if (!(lo < hi)) {
      throw DomainError("box region needs lo < hi, got [" + std::to_string(lo) + ", " +
                        std::to_string(hi) + "]");
    }
  }
  ConvexRegion r;
  r.kind_ = Kind::Box;
  r.dim_ = static_cast<int>(bounds.size());
  r.box_ = std::move(bounds);
  return r;
}

ConvexRegion ConvexRegion::ball(RealVector center, double radius) {
  if (center.size() == 0) {
    throw DomainError("ball region needs at least one dimension");
  }
  if (!(radius > 0.0)) {
    throw DomainError("ball region needs a positive radius");
  }
  ConvexRegion r;
  r.kind_ = Kind::Ball;
  r.dim_ = static_cast<int>(center.size());
  r.center_ = std::move(center);
  r.radius_ = radius;
  return r;
}

ConvexRegion ConvexRegion::halfspaces(std::vector<std::pair<RealVector, double>> constraints,
                                      int dim) {
  if (dim < 1 || constraints.empty()) {
    throw DomainError("halfspace region needs a dimension and at least one constraint");
  }
  for (const auto& [a, b] : constraints) {
    if (a.size() != dim || a.norm() == 0.0) {
      throw DomainError("halfspace normals must be nonzero vectors of dimension " +
                        std::to_string(dim));
    }
  }
  interior_point(constraints, dim);  // throws when the interior is empty
  ConvexRegion r;
  r.kind_ = Kind::HalfspaceIntersection;
  r.dim_ = dim;
  r.halfspaces_ = std::move(constraints);
  return r;
}

bool ConvexRegion::bounded_within(const std::vector<std::pair<double, double>>& box) const {
  if (static_cast<int>(box.size()) != dim_) return false;
  switch (kind_) {
    case Kind::Box:
      for (int i = 0; i < dim_; ++i) {
        if (box_[static_cast<size_t>(i)].first < box[static_cast<size_t>(i)].first ||
            box_[static_cast<size_t>(i)].second > box[static_cast<size_t>(i)].second) {
          return false;
        }
      }
      return true;
    case Kind::Ball:
      for (int i = 0; i < dim_; ++i) {
        if (center_(i) - radius_ < box[static_cast<size_t>(i)].first ||
            center_(i) + radius_ > box[static_cast<size_t>(i)].second) {
          return false;
        }
      }
      return true;
    case Kind::HalfspaceIntersection:
      return false;
  }
  return false;
}

bool ConvexRegion::contains(const RealVector& y) const {
  if (y.size() != dim_) {
    throw DimensionError("region expects points of dimension " + std::to_string(dim_));
  }
  switch (kind_) {
    case Kind::Box:
      for (int i = 0; i < dim_; ++i) {
        if (y(i) < box_[static_cast<size_t>(i)].first ||
            y(i) > box_[static_cast<size_t>(i)].second) {
          return false;
        }
      }
      return true;
    case Kind::Ball:
      return (y - center_).norm() <= radius_;
    case Kind::HalfspaceIntersection:
      for (const auto& [a, b] : halfspaces_) {
        if (a.dot(y) > b) return false;
      }
      return true;
  }
  return false;
}

struct MarginalMetric::State {
  MetricFunction base;
  std::vector<int> integrated;
  std::vector<int> kept;
  QuadratureGrid grid;
  std::optional<ConvexRegion> region;
  TolerancePolicy tol;
  std::string name;

  mutable std::mutex mutex;
  mutable std::map<std::vector<double>, HermitianMatrix> cache;
  mutable double worst_tail = 0.0;
  bool compactly_restricted = false;

  State(MetricFunction b, std::vector<int> idx, QuadratureGrid g, std::optional<ConvexRegion> reg,
        TolerancePolicy t)
      : base(std::move(b)), integrated(std::move(idx)), grid(std::move(g)),
        region(std::move(reg)), tol(t) {
    if (region) {
      std::vector<std::pair<double, double>> box;
      for (int d = 0; d < grid.dims(); ++d) box.emplace_back(grid.probe_lo(d), grid.probe_hi(d));
      // A region inside the quadrature box cannot lose mass to truncation;
      // the boundary probe would only report the restriction itself.
      compactly_restricted = region->bounded_within(box);
    }
  }

  HermitianMatrix compute(const RealVector& t) const {
    auto integrand = [&](const RealVector& y) -> ComplexMatrix {
      if (region && !region->contains(y)) {
        return ComplexMatrix::Zero(base.rank, base.rank);
      }
      RealVector full(base.dim);
      for (size_t i = 0; i < integrated.size(); ++i) {
        full(integrated[i]) = y(static_cast<Eigen::Index>(i));
      }
      for (size_t i = 0; i < kept.size(); ++i) {
        full(kept[i]) = t(static_cast<Eigen::Index>(i));
      }
      return base.eval_raw(full, tol.herm_warn).mat();
    };

    IntegrationResult res = integrate_matrix(integrand, grid);
    if (!compactly_restricted) {
      if (res.tail.boundary_mass_ratio > 1e-4) {
        throw TruncationError(
            "marginal integral of '" + base.name + "' is badly truncated at t = " +
            format_point(t) + " (boundary mass ratio " +
            std::to_string(res.tail.boundary_mass_ratio) + "); enlarge the integration domain");
      }
      if (res.tail.warning()) {
        emit_warning("marginal integral of '" + base.name + "' at t = " + format_point(t) +
                     " has boundary mass ratio " + std::to_string(res.tail.boundary_mass_ratio));
      }
      std::lock_guard<std::mutex> lock(mutex);
      worst_tail = std::max(worst_tail, res.tail.boundary_mass_ratio);
    }

    HermitianMatrix h(res.value);
    EigenDecomposition d = eig_hermitian(h);
    double lo = d.eigenvalues(0);
    double hi = d.eigenvalues(d.eigenvalues.size() - 1);
    if (lo <= tol.threshold(lo, hi)) {
      throw NotPositiveDefinite("marginal metric is not positive definite at t = " +
                                format_point(t) + " (min eigenvalue " + std::to_string(lo) +
                                "); the integral may be divergent or over-truncated");
    }
    return h;
  }

  HermitianMatrix value(const RealVector& t) const {
    std::vector<double> key(t.data(), t.data() + t.size());
    {
      std::lock_guard<std::mutex> lock(mutex);
      auto it = cache.find(key);
      if (it != cache.end()) return it->second;
    }
    HermitianMatrix h = compute(t);
    std::lock_guard<std::mutex> lock(mutex);
    return cache.emplace(std::move(key), std::move(h)).first->second;
  }
};

MarginalMetric::MarginalMetric(MetricFunction base, std::vector<int> integrated_dims,
                               QuadratureGrid grid, std::optional<ConvexRegion> region,
                               TolerancePolicy tol) {
  if (integrated_dims.empty()) {
    throw DomainError("marginalize needs at least one integrated dimension");
  }
  std::set<int> seen;
  for (int d : integrated_dims) {
    if (d < 0 || d >= base.dim || !seen.insert(d).second) {
      throw DomainError("integrated dimensions must be distinct indices into the metric domain");
    }
  }
  if (static_cast<int>(integrated_dims.size()) >= base.dim) {
    throw DomainError("marginalize must keep at least one free dimension");
  }
  if (grid.dims() != static_cast<int>(integrated_dims.size())) {
    throw DimensionError("quadrature grid has " + std::to_string(grid.dims()) +
                         " dimensions but " + std::to_string(integrated_dims.size()) +
                         " dimensions are integrated");
  }
  if (region && region->dim() != grid.dims()) {
    throw DimensionError("region dimension does not match the integrated block");
  }
  std::sort(integrated_dims.begin(), integrated_dims.end());
  std::vector<int> kept;
  for (int d = 0; d < base.dim; ++d) {
    if (!seen.count(d)) kept.push_back(d);
  }
  state_ = std::make_shared<State>(std::move(base), std::move(integrated_dims), std::move(grid),
                                   std::move(region), tol);
  state_->kept = std::move(kept);
  state_->name = state_->base.name.empty() ? "marginal" : state_->base.name + "-marginal";
}

int MarginalMetric::dim_t() const { return static_cast<int>(state_->kept.size()); }

int MarginalMetric::rank() const { return state_->base.rank; }

const QuadratureGrid& MarginalMetric::grid() const { return state_->grid; }

HermitianMatrix MarginalMetric::value(const RealVector& t) const {
  if (t.size() != dim_t()) {
    throw DimensionError("marginal metric expects " + std::to_string(dim_t()) +
                         " variables, got " + std::to_string(t.size()));
  }
  return state_->value(t);
}

double MarginalMetric::worst_tail() const {
  std::lock_guard<std::mutex> lock(state_->mutex);
  return state_->worst_tail;
}

MetricFunction MarginalMetric::as_metric() const {
  MetricFunction m;
  m.dim = dim_t();
  m.rank = rank();
  m.name = state_->name;
  auto state = state_;
  m.value = [state](const RealVector& t) -> ComplexMatrix { return state->value(t).mat(); };
  return m;
}

MarginalMetric marginalize(const MetricFunction& g, const std::optional<ConvexRegion>& region,
                           const QuadratureGrid& grid, const TolerancePolicy& tol) {
  std::vector<int> integrated(static_cast<size_t>(grid.dims()));
  for (int i = 0; i < grid.dims(); ++i) integrated[static_cast<size_t>(i)] = i;
  return MarginalMetric(g, std::move(integrated), grid, region, tol);
}

MarginalMetric calibrated_marginal(const MetricFunction& g,
                                   const std::optional<ConvexRegion>& region,
                                   const QuadratureGrid& grid, const RealVector& t0,
                                   double target_rel, int max_doublings,
                                   const TolerancePolicy& tol) {
  MarginalMetric probe = marginalize(g, region, grid, tol);
  if (t0.size() != probe.dim_t()) {
    throw DimensionError("calibration point has the wrong dimension");
  }

  QuadratureGrid current = grid;
  ComplexMatrix prev = marginalize(g, region, current, tol).value(t0).mat();
  for (int k = 1; k <= max_doublings; ++k) {
    QuadratureGrid finer = current.refined();
    ComplexMatrix next = marginalize(g, region, finer, tol).value(t0).mat();
    double scale = std::max(next.norm(), std::numeric_limits<double>::min());
    if ((next - prev).norm() / scale <= target_rel) {
      return marginalize(g, region, finer, tol);
    }
    current = finer;
    prev = next;
  }
  throw NoConvergence("marginal integral did not reach relative target " +
                      std::to_string(target_rel) + " after " + std::to_string(max_doublings) +
                      " grid doublings");
}

std::vector<PositivityVerdict> prekopa_verdict(const MarginalMetric& M,
                                               const std::vector<RealVector>& t_grid,
                                               const FDScheme& scheme,
                                               const TolerancePolicy& tol) {
  MetricFunction m = M.as_metric();
  std::vector<PositivityVerdict> verdicts;
  verdicts.reserve(t_grid.size());
  for (const RealVector& t : t_grid) {
    CurvatureTensor T = theta(m, t, scheme, tol);
    verdicts.push_back(nakano_verdict(T, tol, ConcavityMode::Concave));
  }
  return verdicts;
}

MetricFunction corollary_builder(const ExprPtr& phi, int dim_y, int dim_t,
                                 const MetricFunction& A, const FDScheme& scheme,
                                 const TolerancePolicy& tol) {
  if (dim_y < 1 || dim_t < 1) {
    throw DomainError("corollary_builder needs dim_y >= 1 and dim_t >= 1");
  }
  if (A.dim != dim_y) {
    throw DimensionError("A is a metric in y and must have dimension " + std::to_string(dim_y));
  }

  std::vector<std::string> names;
  for (int i = 0; i < dim_y; ++i) names.push_back("y" + std::to_string(i + 1));
  for (int i = 0; i < dim_t; ++i) names.push_back("t" + std::to_string(i + 1));
  {
    std::set<std::string> allowed(names.begin(), names.end());
    for (const std::string& v : expr_variables(*phi)) {
      if (!allowed.count(v)) {
        throw DomainError("phi uses unknown variable '" + v + "'");
      }
    }
  }

  const int dim = dim_y + dim_t;
  auto phi_at = [phi, names](const RealVector& p) {
    Bindings b;
    for (size_t i = 0; i < names.size(); ++i) b[names[i]] = p(static_cast<Eigen::Index>(i));
    return eval_expr(*phi, b);
  };

  auto sample_points = [](int d) {
    std::vector<RealVector> pts;
    pts.push_back(RealVector::Zero(d));
    for (int i = 0; i < d; ++i) {
      for (double s : {-1.0, -0.5, 0.5, 1.0}) {
        RealVector p = RealVector::Zero(d);
        p(i) = s;
        pts.push_back(p);
      }
    }
    pts.push_back(RealVector::Constant(d, 0.5));
    pts.push_back(RealVector::Constant(d, -0.5));
    return pts;
  };

  for (const RealVector& y : sample_points(dim_y)) {
    CurvatureTensor T = theta(A, y, scheme, tol);
    PositivityVerdict v = nakano_verdict(T, tol, ConcavityMode::Concave);
    EigenDecomposition d = eig_hermitian(nakano_matrix(T));
    double tau = tol.threshold(d.eigenvalues(0), d.eigenvalues(d.eigenvalues.size() - 1));
    if (v.extreme_value > -tau) {
      throw DomainError("curvature of A is not strictly negative at y = " + format_point(y) +
                        " (max eigenvalue " + std::to_string(v.extreme_value) + ")");
    }
  }

  for (const RealVector& p : sample_points(dim)) {
    RealMatrix hess(dim, dim);
    for (int j = 0; j < dim; ++j) {
      double hj = scheme.step(p(j));
      for (int k = j; k < dim; ++k) {
        double hk = scheme.step(p(k));
        auto second = [&](double sj, double sk) {
          if (j == k) {
            RealVector a = p, b = p;
            a(j) += sj;
            b(j) -= sj;
            return (phi_at(a) - 2.0 * phi_at(p) + phi_at(b)) / (sj * sj);
          }
          RealVector pp = p, pm = p, mp = p, mm = p;
          pp(j) += sj; pp(k) += sk;
          pm(j) += sj; pm(k) -= sk;
          mp(j) -= sj; mp(k) += sk;
          mm(j) -= sj; mm(k) -= sk;
          return (phi_at(pp) - phi_at(pm) - phi_at(mp) + phi_at(mm)) / (4.0 * sj * sk);
        };
        double d = second(hj, hk);
        if (scheme.richardson) {
          d = (4.0 * second(0.5 * hj, 0.5 * hk) - d) / 3.0;
        }
        hess(j, k) = d;
        hess(k, j) = d;
      }
    }
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(hess);
    double lo = es.eigenvalues()(0);
    double hi = es.eigenvalues()(dim - 1);
    if (lo < -tol.threshold(lo, hi)) {
      throw DomainError("phi is not convex: Hessian has eigenvalue " + std::to_string(lo) +
                        " at " + format_point(p));
    }
  }

  MetricFunction out;
  out.dim = dim;
  out.rank = A.rank;
  out.name = "corollary(" + (A.name.empty() ? "A" : A.name) + ")";
  MetricFunction base = A;
  TolerancePolicy tolc = tol;
  out.value = [base, phi_at, dim_y, tolc](const RealVector& p) -> ComplexMatrix {
    RealVector y = p.head(dim_y);
    return std::exp(-phi_at(p)) * base.eval_raw(y, tolc.herm_warn).mat();
  };
  return out;
}

}  // namespace mvlc
