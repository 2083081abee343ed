#pragma once

#include <functional>
#include <optional>
#include <string>

#include "mvlc/linalg.hpp"

namespace mvlc {

std::string format_point(const RealVector& x);

// A matrix-valued metric: x in R^n -> Hermitian positive definite r x r.
// `value` returns the raw matrix; eval() symmetrizes and enforces strict
// positive definiteness. Derivative callbacks are optional; curvature
// falls back to finite differences when they are absent.
struct MetricFunction {
  int dim = 0;   // number of real variables
  int rank = 0;  // matrix dimension r
  std::function<ComplexMatrix(const RealVector&)> value;
  std::function<ComplexMatrix(const RealVector&, int)> first_derivative;
  std::function<ComplexMatrix(const RealVector&, int, int)> second_derivative;
  std::string name;

  bool has_derivatives() const {
    return static_cast<bool>(first_derivative) && static_cast<bool>(second_derivative);
  }

  HermitianMatrix eval(const RealVector& x, const TolerancePolicy& tol = {}) const;

  // Shape/finiteness checks and symmetrization only. Integrands use this:
  // deep in an exponential tail a metric value is legitimately below any
  // absolute positive-definiteness floor.
  HermitianMatrix eval_raw(const RealVector& x,
                           double herm_warn = TolerancePolicy{}.herm_warn) const;
};

// Scalar weight f(x) with optional analytic gradient/Hessian.
struct ScalarFunction {
  int dim = 0;
  std::function<double(const RealVector&)> value;
  std::function<double(const RealVector&, int)> gradient;          // optional
  std::function<double(const RealVector&, int, int)> hessian;      // optional
  std::string name;

  bool has_derivatives() const {
    return static_cast<bool>(gradient) && static_cast<bool>(hessian);
  }
};

}  // namespace mvlc
