#include "mvlc/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <mutex>

namespace mvlc {

namespace {

std::mutex g_warning_mutex;
WarningHandler g_warning_handler;

bool all_finite(const ComplexMatrix& m) {
  return m.array().isFinite().all();
}

}  // namespace

double TolerancePolicy::threshold(double min_eig, double max_eig) const {
  const double scale = std::max(std::abs(min_eig), std::abs(max_eig));
  return std::max(abs_eig, rel_eig * scale);
}

void TolerancePolicy::validate() const {
  const bool ok = std::isfinite(abs_eig) && abs_eig >= 0 &&
                  std::isfinite(rel_eig) && rel_eig >= 0 &&
                  std::isfinite(herm_warn) && herm_warn >= 0;
  if (!ok) throw DomainError("TolerancePolicy fields must be finite and non-negative");
}

void set_warning_handler(WarningHandler handler) {
  std::lock_guard<std::mutex> lock(g_warning_mutex);
  g_warning_handler = std::move(handler);
}

void emit_warning(const std::string& message) {
  WarningHandler handler;
  {
    std::lock_guard<std::mutex> lock(g_warning_mutex);
    handler = g_warning_handler;
  }
  if (handler) {
    handler(message);
  } else {
    std::cerr << "[mvlc warning] " << message << "\n";
  }
}

HermitianMatrix::HermitianMatrix(const ComplexMatrix& m, double herm_warn) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw InvalidMatrix("HermitianMatrix requires a square matrix of dim >= 1, got " +
                        std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
  if (!all_finite(m)) throw InvalidMatrix("HermitianMatrix: non-finite entries");
  deviation_ = (m - m.adjoint()).cwiseAbs().maxCoeff();
  mat_ = 0.5 * (m + m.adjoint());
  if (deviation_ > herm_warn) {
    emit_warning("symmetrized matrix deviated from Hermitian by " +
                 std::to_string(deviation_));
  }
}

HermitianMatrix HermitianMatrix::identity(int dim) {
  return HermitianMatrix(ComplexMatrix::Identity(dim, dim));
}

HermitianMatrix HermitianMatrix::zero(int dim) {
  return HermitianMatrix(ComplexMatrix::Zero(dim, dim));
}

std::string to_string(Definiteness d) {
  switch (d) {
    case Definiteness::PositiveDefinite: return "positive-definite";
    case Definiteness::PositiveSemidefinite: return "positive-semidefinite";
    case Definiteness::NegativeDefinite: return "negative-definite";
    case Definiteness::NegativeSemidefinite: return "negative-semidefinite";
    case Definiteness::Indefinite: return "indefinite";
    case Definiteness::Zero: return "zero";
  }
  return "unknown";
}

EigenDecomposition eig_hermitian(const HermitianMatrix& m) {
  if (!all_finite(m.mat())) throw InvalidMatrix("eig_hermitian: non-finite entries");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m.mat());
  if (solver.info() != Eigen::Success) {
    throw InvalidMatrix("eig_hermitian: eigensolver failed to converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

DefinitenessVerdict classify_definiteness(const HermitianMatrix& m,
                                          const TolerancePolicy& tol) {
  tol.validate();
  const EigenDecomposition eig = eig_hermitian(m);
  const int n = m.dim();

  DefinitenessVerdict v;
  v.min_eig = eig.eigenvalues(0);
  v.max_eig = eig.eigenvalues(n - 1);
  v.witness_min = eig.eigenvectors.col(0);
  v.witness_max = eig.eigenvectors.col(n - 1);

  const double tau = tol.threshold(v.min_eig, v.max_eig);
  if (std::abs(v.min_eig) <= tau && std::abs(v.max_eig) <= tau) {
    v.classification = Definiteness::Zero;
  } else if (v.min_eig > tau) {
    v.classification = Definiteness::PositiveDefinite;
  } else if (v.min_eig >= -tau) {
    v.classification = Definiteness::PositiveSemidefinite;
  } else if (v.max_eig < -tau) {
    v.classification = Definiteness::NegativeDefinite;
  } else if (v.max_eig <= tau) {
    v.classification = Definiteness::NegativeSemidefinite;
  } else {
    v.classification = Definiteness::Indefinite;
  }
  return v;
}

HermitianMatrix schur_product(const HermitianMatrix& a,
                              const HermitianMatrix& b) {
  if (a.dim() != b.dim()) {
    throw DimensionError("schur_product: dimension mismatch " +
                         std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
  }
  return HermitianMatrix(a.mat().cwiseProduct(b.mat()));
}

HermitianMatrix gram_matrix(const std::vector<ComplexVector>& vectors,
                            const HermitianMatrix& g) {
  if (vectors.empty()) throw DimensionError("gram_matrix: empty vector tuple");
  const int r = g.dim();
  for (const auto& u : vectors) {
    if (u.size() != r) {
      throw DimensionError("gram_matrix: vector length " + std::to_string(u.size()) +
                           " does not match metric dim " + std::to_string(r));
    }
  }
  if (classify_definiteness(g).classification != Definiteness::PositiveDefinite) {
    throw NotPositiveDefinite("gram_matrix: metric is not positive definite");
  }
  const int n = static_cast<int>(vectors.size());
  ComplexMatrix b(n, n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      // (u_j, u_k)_g = u_k* g u_j
      b(j, k) = (vectors[k].adjoint() * g.mat() * vectors[j]).value();
    }
  }
  return HermitianMatrix(b);
}

}  // namespace mvlc
