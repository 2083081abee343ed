#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <utility>
#include <vector>

#include "mvlc/curvature.hpp"
#include "mvlc/expr.hpp"
#include "mvlc/linalg.hpp"
#include "mvlc/metric.hpp"
#include "mvlc/quadrature.hpp"

namespace mvlc {

// Convex integration region. Restriction is indicator-weighted: quadrature
// nodes outside the region contribute zero. For best accuracy choose the
// quadrature box to match (Box regions are then integrated exactly).
class ConvexRegion {
 public:
  enum class Kind { Box, Ball, HalfspaceIntersection };

  static ConvexRegion box(std::vector<std::pair<double, double>> bounds);
  static ConvexRegion ball(RealVector center, double radius);
  // Each pair (a, b) is the constraint a.y <= b. The interior must be
  // non-empty; feasibility is established by locating an interior point.
  static ConvexRegion halfspaces(std::vector<std::pair<RealVector, double>> constraints, int dim);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  bool contains(const RealVector& y) const;
  const std::vector<std::pair<double, double>>& box_bounds() const { return box_; }

  // True when the region provably fits inside the axis box (halfspace
  // intersections may be unbounded, so they conservatively report false).
  // A restricted integral over such a region cannot be truncated by the box.
  bool bounded_within(const std::vector<std::pair<double, double>>& box) const;

 private:
  ConvexRegion() = default;

  Kind kind_ = Kind::Box;
  int dim_ = 0;
  std::vector<std::pair<double, double>> box_;
  RealVector center_;
  double radius_ = 0.0;
  std::vector<std::pair<RealVector, double>> halfspaces_;
};

// The marginal metric: value(t) integrates the base metric over the y-block
// on a fixed quadrature grid. Evaluations are memoized on the exact bit
// pattern of t so finite-difference stencils reuse the expensive integrals.
class MarginalMetric {
 public:
  MarginalMetric(MetricFunction base, std::vector<int> integrated_dims, QuadratureGrid grid,
                 std::optional<ConvexRegion> region, TolerancePolicy tol = {});

  int dim_t() const;
  int rank() const;
  const QuadratureGrid& grid() const;

  // Hermitian positive definite; throws NotPositiveDefinite otherwise and
  // TruncationError when the boundary mass ratio exceeds 1e-4.
  HermitianMatrix value(const RealVector& t) const;

  // Largest boundary_mass_ratio seen so far.
  double worst_tail() const;

  // Adapter for the curvature operations; shares this object's cache.
  MetricFunction as_metric() const;

 private:
  struct State;
  std::shared_ptr<State> state_;
};

MarginalMetric marginalize(const MetricFunction& g, const std::optional<ConvexRegion>& region,
                           const QuadratureGrid& grid, const TolerancePolicy& tol = {});

// Refines the grid at the calibration point t0 until the integral changes by
// at most target_rel, then freezes the refined grid for all t (one fixed node
// set keeps g-tilde smooth for finite differences).
MarginalMetric calibrated_marginal(const MetricFunction& g,
                                   const std::optional<ConvexRegion>& region,
                                   const QuadratureGrid& grid, const RealVector& t0,
                                   double target_rel = 1e-9, int max_doublings = 6,
                                   const TolerancePolicy& tol = {});

// Nakano concavity verdict of the marginal metric at each t.
std::vector<PositivityVerdict> prekopa_verdict(const MarginalMetric& M,
                                               const std::vector<RealVector>& t_grid,
                                               const FDScheme& scheme = {},
                                               const TolerancePolicy& tol = {});

// Builds g(y,t) = e^{-phi(y,t)} * A(y) after verifying that phi has a PSD
// Hessian on a (y,t)-sample and that A's curvature is negative definite on a
// y-sample. Precondition failures carry the violating sample point.
MetricFunction corollary_builder(const ExprPtr& phi, int dim_y, int dim_t,
                                 const MetricFunction& A, const FDScheme& scheme = {},
                                 const TolerancePolicy& tol = {});

}  // namespace mvlc
