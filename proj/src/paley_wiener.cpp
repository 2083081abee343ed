#include "mvlc/paley_wiener.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "mvlc/errors.hpp"

namespace mvlc {

namespace {

void escalate_tail(const TailReport& tail, const std::string& what) {
  if (tail.boundary_mass_ratio > 1e-4) {
    throw TruncationError(what + " is badly truncated (boundary mass ratio " +
                          std::to_string(tail.boundary_mass_ratio) +
                          "); enlarge the integration domain");
  }
  if (tail.warning()) {
    emit_warning(what + " has boundary mass ratio " +
                 std::to_string(tail.boundary_mass_ratio));
  }
}

void check_vector(const ComplexVector& v, int rank, const std::string& what,
                  const RealVector& at) {
  if (v.size() != rank) {
    throw DimensionError(what + " returned " + std::to_string(v.size()) +
                         " components, expected " + std::to_string(rank));
  }
  if (!v.allFinite()) {
    throw EvalError(what + " is not finite at " + format_point(at));
  }
}

}  // namespace

HermitianMatrix metric_laplace_transform(const MetricFunction& g, const RealVector& xi,
                                         const QuadratureGrid& grid,
                                         const TolerancePolicy& tol) {
  if (xi.size() != g.dim || grid.dims() != g.dim) {
    throw DimensionError("metric_laplace_transform: xi and grid must match the metric dimension " +
                         std::to_string(g.dim));
  }
  auto integrand = [&](const RealVector& y) -> ComplexMatrix {
    return std::exp(2.0 * xi.dot(y)) * g.eval_raw(y, tol.herm_warn).mat();
  };
  IntegrationResult res = integrate_matrix(integrand, grid);
  escalate_tail(res.tail, "transform of '" + g.name + "' at xi = " + format_point(xi));

  double prefactor = std::pow(2.0 * std::numbers::pi, g.dim);
  // Symmetrize first, scale second: scaling an exactly Hermitian matrix keeps
  // the evaluation bit-identical to scaling the plain marginal integral.
  return HermitianMatrix(prefactor * HermitianMatrix(res.value).mat());
}

ComplexVector fourier_extension(const SampledVectorFunction& f, const RealVector& x,
                                const RealVector& y, const QuadratureGrid& xi_grid) {
  if (x.size() != f.dim_in || y.size() != f.dim_in || xi_grid.dims() != f.dim_in) {
    throw DimensionError("fourier_extension: x, y, and grid must match dimension " +
                         std::to_string(f.dim_in));
  }
  auto integrand = [&](const RealVector& xi) -> ComplexMatrix {
    ComplexVector v = f.evaluator(xi);
    check_vector(v, f.rank, "sampled function '" + f.name + "'", xi);
    Complex phase = std::exp(Complex(xi.dot(y), -xi.dot(x)));
    return (phase * v).eval();
  };
  IntegrationResult res = integrate_matrix(integrand, xi_grid);
  escalate_tail(res.tail, "extension of '" + f.name + "'");
  return res.value.col(0);
}

HolomorphicSamples extend(const SampledVectorFunction& f, const QuadratureGrid& xi_grid) {
  HolomorphicSamples F;
  F.dim = f.dim_in;
  F.rank = f.rank;
  F.name = f.name.empty() ? "extension" : f.name + "-extension";
  SampledVectorFunction base = f;
  QuadratureGrid grid = xi_grid;
  F.evaluator = [base, grid](const RealVector& x, const RealVector& y) {
    return fourier_extension(base, x, y, grid);
  };
  return F;
}

double a2_norm(const HolomorphicSamples& F, const MetricFunction& g,
               const QuadratureGrid& grid_x, const QuadratureGrid& grid_y,
               const TolerancePolicy& tol) {
  const int n = F.dim;
  if (g.dim != n || grid_x.dims() != n || grid_y.dims() != n) {
    throw DimensionError("a2_norm: metric and grids must match dimension " + std::to_string(n));
  }
  std::vector<Rule1D> rules = grid_x.rules();
  for (const Rule1D& r : grid_y.rules()) rules.push_back(r);
  QuadratureGrid joint(rules, grid_x.node_cap());

  auto integrand = [&](const RealVector& xy) -> ComplexMatrix {
    RealVector x = xy.head(n);
    RealVector y = xy.tail(n);
    ComplexVector v = F.evaluator(x, y);
    check_vector(v, F.rank, "holomorphic samples '" + F.name + "'", xy);
    ComplexMatrix out(1, 1);
    out(0, 0) = (v.adjoint() * g.eval_raw(y, tol.herm_warn).mat() * v).value();
    return out;
  };
  IntegrationResult res = integrate_matrix(integrand, joint);
  escalate_tail(res.tail, "squared norm of '" + F.name + "'");
  return res.value(0, 0).real();
}

double l2_norm(const SampledVectorFunction& f,
               const std::function<HermitianMatrix(const RealVector&)>& g_tilde,
               const QuadratureGrid& xi_grid) {
  if (xi_grid.dims() != f.dim_in) {
    throw DimensionError("l2_norm: grid must match dimension " + std::to_string(f.dim_in));
  }
  auto integrand = [&](const RealVector& xi) -> ComplexMatrix {
    ComplexVector v = f.evaluator(xi);
    check_vector(v, f.rank, "sampled function '" + f.name + "'", xi);
    ComplexMatrix out(1, 1);
    out(0, 0) = (v.adjoint() * g_tilde(xi).mat() * v).value();
    return out;
  };
  IntegrationResult res = integrate_matrix(integrand, xi_grid);
  escalate_tail(res.tail, "squared norm of '" + f.name + "'");
  return res.value(0, 0).real();
}

ParsevalResult parseval_check(const SampledVectorFunction& f, const MetricFunction& g,
                              const QuadratureGrid& xi_grid, const QuadratureGrid& x_grid,
                              const QuadratureGrid& y_grid, const TolerancePolicy& tol) {
  ParsevalResult out;
  out.lhs = a2_norm(extend(f, xi_grid), g, x_grid, y_grid, tol);
  auto g_tilde = [&](const RealVector& xi) {
    return metric_laplace_transform(g, xi, y_grid, tol);
  };
  out.rhs = l2_norm(f, g_tilde, xi_grid);
  double scale = std::max(std::abs(out.lhs), std::abs(out.rhs));
  out.rel_err = scale > 0.0 ? std::abs(out.lhs - out.rhs) / scale : 0.0;
  return out;
}

}  // namespace mvlc
