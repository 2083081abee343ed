#pragma once

#include <vector>

#include "mvlc/curvature.hpp"
#include "mvlc/linalg.hpp"
#include "mvlc/metric.hpp"

namespace mvlc {

// Pointwise matrix inverse; when g carries derivative callbacks they are
// propagated via d(g^{-1}) = -g^{-1}(dg)g^{-1}.
MetricFunction inverse_metric(const MetricFunction& g);

// Pointwise f(x)*g(x); f must stay strictly positive. Derivative callbacks
// are propagated when both f and g provide them.
MetricFunction scale_by_function(const ScalarFunction& f, const MetricFunction& g);

// Pointwise g(x)*det g(x).
MetricFunction demailly_skoda(const MetricFunction& g);

// Formula path for the curvature of g*det g from the curvature of g:
// blocks become Theta_jk + tr(Theta_jk)*I. Cross-checks the FD path.
CurvatureTensor demailly_skoda_curvature(const CurvatureTensor& T);

// n x n matrix with entry (j,k) = tr(Theta_jk); the Hessian of log det g.
HermitianMatrix logdet_hessian(const CurvatureTensor& T);

// Average over all q^r tuples of q-th roots of unity of
// (x,sigma)*conj((y,sigma))*sigma_alpha*conj(sigma_beta), with
// (x,sigma) = sum_mu x_mu*conj(sigma_mu). Indices alpha, beta are 1-based.
// Equals x_alpha*conj(y_beta) for alpha != beta and sum_mu x_mu*conj(y_mu)
// for alpha == beta.
Complex roots_of_unity_average(int q, const ComplexVector& x, const ComplexVector& y, int alpha,
                               int beta);

// sum_{j,k} (d2 log f)_{jk} (u_j,u_k)_g computed as -(M*1, 1) where M is the
// Schur product of hessian_neg = -Hessian(log f) with the Gram matrix of the
// vectors under g. Nonpositive whenever hessian_neg is PSD.
double schur_mixed_form(const HermitianMatrix& hessian_neg,
                        const std::vector<ComplexVector>& vectors, const HermitianMatrix& g);

}  // namespace mvlc
