#pragma once

#include <functional>

#include "mvlc/linalg.hpp"
#include "mvlc/metric.hpp"
#include "mvlc/quadrature.hpp"

namespace mvlc {

// A sampled function xi -> C^r, the transform-side object.
struct SampledVectorFunction {
  int dim_in = 0;
  int rank = 0;
  std::function<ComplexVector(const RealVector&)> evaluator;
  std::string name;
};

// Samples of F(x+iy) as a function of the real pair (x, y).
struct HolomorphicSamples {
  int dim = 0;
  int rank = 0;
  std::function<ComplexVector(const RealVector&, const RealVector&)> evaluator;
  std::string name;
};

// g-tilde(xi) = (2pi)^n * integral of e^{2 xi.y} g(y) dy over the grid.
// Positive definite by construction; truncation escalates like the marginal
// integrals (warning above 1e-8, error above 1e-4 boundary mass ratio).
HermitianMatrix metric_laplace_transform(const MetricFunction& g, const RealVector& xi,
                                         const QuadratureGrid& grid,
                                         const TolerancePolicy& tol = {});

// F(x+iy) = integral of f(xi) e^{-i xi.x} e^{xi.y} dxi over the grid.
ComplexVector fourier_extension(const SampledVectorFunction& f, const RealVector& x,
                                const RealVector& y, const QuadratureGrid& xi_grid);

// Convenience wrapper: the extension of f as a HolomorphicSamples object.
HolomorphicSamples extend(const SampledVectorFunction& f, const QuadratureGrid& xi_grid);

// Integral of F(x+iy)^* g(y) F(x+iy) over the product of the two grids.
double a2_norm(const HolomorphicSamples& F, const MetricFunction& g,
               const QuadratureGrid& grid_x, const QuadratureGrid& grid_y,
               const TolerancePolicy& tol = {});

// Integral of f(xi)^* g_tilde(xi) f(xi) over the grid.
double l2_norm(const SampledVectorFunction& f,
               const std::function<HermitianMatrix(const RealVector&)>& g_tilde,
               const QuadratureGrid& xi_grid);

struct ParsevalResult {
  double lhs = 0.0;       // a2_norm of the extension of f
  double rhs = 0.0;       // l2_norm of f under the transformed metric
  double rel_err = 0.0;
};

ParsevalResult parseval_check(const SampledVectorFunction& f, const MetricFunction& g,
                              const QuadratureGrid& xi_grid, const QuadratureGrid& x_grid,
                              const QuadratureGrid& y_grid, const TolerancePolicy& tol = {});

}  // namespace mvlc
