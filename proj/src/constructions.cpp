#include "mvlc/constructions.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "mvlc/errors.hpp"

namespace mvlc {

MetricFunction inverse_metric(const MetricFunction& g) {
  MetricFunction out;
  out.dim = g.dim;
  out.rank = g.rank;
  out.name = g.name.empty() ? "inverse" : g.name + "-inverse";
  MetricFunction base = g;
  out.value = [base](const RealVector& x) -> ComplexMatrix {
    return base.eval(x).mat().inverse();
  };
  if (g.has_derivatives()) {
    out.first_derivative = [base](const RealVector& x, int j) -> ComplexMatrix {
      ComplexMatrix gi = base.eval(x).mat().inverse();
      return -gi * base.first_derivative(x, j) * gi;
    };
    out.second_derivative = [base](const RealVector& x, int j, int k) -> ComplexMatrix {
      ComplexMatrix gi = base.eval(x).mat().inverse();
      ComplexMatrix dj = base.first_derivative(x, j);
      ComplexMatrix dk = base.first_derivative(x, k);
      ComplexMatrix djk = base.second_derivative(x, j, k);
      return gi * dk * gi * dj * gi + gi * dj * gi * dk * gi - gi * djk * gi;
    };
  }
  return out;
}

MetricFunction scale_by_function(const ScalarFunction& f, const MetricFunction& g) {
  if (f.dim != g.dim) {
    throw DimensionError("scale_by_function: f has dimension " + std::to_string(f.dim) +
                         ", metric has " + std::to_string(g.dim));
  }
  MetricFunction out;
  out.dim = g.dim;
  out.rank = g.rank;
  out.name = (f.name.empty() ? "f" : f.name) + "*" + (g.name.empty() ? "g" : g.name);
  MetricFunction base = g;
  ScalarFunction weight = f;
  auto positive_weight = [weight](const RealVector& x) {
    double v = weight.value(x);
    if (!(v > 0.0)) {
      throw DomainError("scaling function '" + (weight.name.empty() ? "f" : weight.name) +
                        "' is not positive at " + format_point(x));
    }
    return v;
  };
  out.value = [base, positive_weight](const RealVector& x) -> ComplexMatrix {
    return positive_weight(x) * base.eval(x).mat();
  };
  if (f.has_derivatives() && g.has_derivatives()) {
    out.first_derivative = [base, weight, positive_weight](const RealVector& x,
                                                           int j) -> ComplexMatrix {
      return weight.gradient(x, j) * base.eval(x).mat() +
             positive_weight(x) * base.first_derivative(x, j);
    };
    out.second_derivative = [base, weight, positive_weight](const RealVector& x, int j,
                                                            int k) -> ComplexMatrix {
      return weight.hessian(x, j, k) * base.eval(x).mat() +
             weight.gradient(x, j) * base.first_derivative(x, k) +
             weight.gradient(x, k) * base.first_derivative(x, j) +
             positive_weight(x) * base.second_derivative(x, j, k);
    };
  }
  return out;
}

MetricFunction demailly_skoda(const MetricFunction& g) {
  MetricFunction out;
  out.dim = g.dim;
  out.rank = g.rank;
  out.name = (g.name.empty() ? "g" : g.name) + "*det";
  MetricFunction base = g;
  out.value = [base](const RealVector& x) -> ComplexMatrix {
    ComplexMatrix v = base.eval(x).mat();
    double det = v.determinant().real();
    return det * v;
  };
  return out;
}

CurvatureTensor demailly_skoda_curvature(const CurvatureTensor& T) {
  CurvatureTensor out;
  out.n = T.n;
  out.r = T.r;
  out.point = T.point;
  double det = T.metric_value.mat().determinant().real();
  out.metric_value = HermitianMatrix(det * T.metric_value.mat());
  out.blocks.assign(static_cast<size_t>(T.n),
                    std::vector<ComplexMatrix>(static_cast<size_t>(T.n)));
  ComplexMatrix id = ComplexMatrix::Identity(T.r, T.r);
  for (int j = 0; j < T.n; ++j) {
    for (int k = 0; k < T.n; ++k) {
      const ComplexMatrix& b = T.blocks[static_cast<size_t>(j)][static_cast<size_t>(k)];
      out.blocks[static_cast<size_t>(j)][static_cast<size_t>(k)] = b + b.trace() * id;
    }
  }
  return out;
}

HermitianMatrix logdet_hessian(const CurvatureTensor& T) {
  ComplexMatrix h(T.n, T.n);
  for (int j = 0; j < T.n; ++j) {
    for (int k = 0; k < T.n; ++k) {
      h(j, k) = T.blocks[static_cast<size_t>(j)][static_cast<size_t>(k)].trace();
    }
  }
  return HermitianMatrix(h);
}

Complex roots_of_unity_average(int q, const ComplexVector& x, const ComplexVector& y, int alpha,
                               int beta) {
  if (q < 3) {
    throw DomainError("roots_of_unity_average needs q >= 3, got " + std::to_string(q));
  }
  if (x.size() != y.size() || x.size() == 0) {
    throw DimensionError("roots_of_unity_average needs nonempty x, y of equal size");
  }
  const int r = static_cast<int>(x.size());
  if (alpha < 1 || alpha > r || beta < 1 || beta > r) {
    throw DomainError("roots_of_unity_average indices must lie in [1, " + std::to_string(r) +
                      "]");
  }
  double total = std::pow(static_cast<double>(q), r);
  if (total > 1e7) {
    throw BudgetError("roots_of_unity_average: q^r = " + std::to_string(total) +
                      " exceeds the enumeration budget of 1e7");
  }

  std::vector<Complex> roots(static_cast<size_t>(q));
  for (int d = 0; d < q; ++d) {
    roots[static_cast<size_t>(d)] = std::polar(1.0, 2.0 * std::numbers::pi * d / q);
  }

  const size_t count = static_cast<size_t>(total + 0.5);
  const int a = alpha - 1;
  const int b = beta - 1;
  std::vector<int> digits(static_cast<size_t>(r), 0);

  Complex sum = 0.0;
  Complex comp = 0.0;
  for (size_t idx = 0; idx < count; ++idx) {
    size_t rest = idx;
    Complex xs = 0.0;
    Complex ys = 0.0;
    for (int mu = 0; mu < r; ++mu) {
      int d = static_cast<int>(rest % static_cast<size_t>(q));
      rest /= static_cast<size_t>(q);
      digits[static_cast<size_t>(mu)] = d;
      Complex sigma = roots[static_cast<size_t>(d)];
      xs += x(mu) * std::conj(sigma);
      ys += y(mu) * std::conj(sigma);
    }
    Complex term = xs * std::conj(ys) * roots[static_cast<size_t>(digits[static_cast<size_t>(a)])] *
                   std::conj(roots[static_cast<size_t>(digits[static_cast<size_t>(b)])]);
    Complex t1 = term - comp;
    Complex t2 = sum + t1;
    comp = (t2 - sum) - t1;
    sum = t2;
  }
  return sum / static_cast<double>(count);
}

double schur_mixed_form(const HermitianMatrix& hessian_neg,
                        const std::vector<ComplexVector>& vectors, const HermitianMatrix& g) {
  HermitianMatrix gram = gram_matrix(vectors, g);
  if (gram.dim() != hessian_neg.dim()) {
    throw DimensionError("schur_mixed_form: Hessian is " + std::to_string(hessian_neg.dim()) +
                         "x" + std::to_string(hessian_neg.dim()) + " but " +
                         std::to_string(vectors.size()) + " vectors were given");
  }
  HermitianMatrix m = schur_product(hessian_neg, gram);
  return -m.mat().sum().real();
}

}  // namespace mvlc
