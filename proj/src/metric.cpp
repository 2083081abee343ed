#include "mvlc/metric.hpp"

#include <sstream>

#include "mvlc/errors.hpp"

namespace mvlc {

std::string format_point(const RealVector& x) {
  std::ostringstream os;
  os.precision(17);
  os << "(";
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (i > 0) os << ", ";
    os << x(i);
  }
  os << ")";
  return os.str();
}

HermitianMatrix MetricFunction::eval_raw(const RealVector& x, double herm_warn) const {
  if (x.size() != dim) {
    throw DimensionError("metric '" + name + "' expects " + std::to_string(dim) +
                         " variables, got " + std::to_string(x.size()));
  }
  ComplexMatrix raw = value(x);
  if (raw.rows() != rank || raw.cols() != rank) {
    throw DimensionError("metric '" + name + "' returned a " + std::to_string(raw.rows()) + "x" +
                         std::to_string(raw.cols()) + " matrix, expected rank " +
                         std::to_string(rank));
  }
  if (!raw.allFinite()) {
    throw EvalError("metric '" + name + "' is not finite at " + format_point(x));
  }
  return HermitianMatrix(raw, herm_warn);
}

HermitianMatrix MetricFunction::eval(const RealVector& x, const TolerancePolicy& tol) const {
  HermitianMatrix g = eval_raw(x, tol.herm_warn);
  EigenDecomposition d = eig_hermitian(g);
  double min_eig = d.eigenvalues(0);
  double max_eig = d.eigenvalues(d.eigenvalues.size() - 1);
  if (min_eig <= tol.threshold(min_eig, max_eig)) {
    throw NotPositiveDefinite("metric '" + name + "' is not positive definite at " +
                              format_point(x) + " (min eigenvalue " + std::to_string(min_eig) +
                              ")");
  }
  return g;
}

}  // namespace mvlc
