#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "mvlc/errors.hpp"

namespace mvlc {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

// Eigenvalue thresholds used by every definiteness decision. Mixing an
// absolute and a relative tolerance keeps verdicts meaningful when metric
// scales vary across a grid.
struct TolerancePolicy {
  double abs_eig = 1e-8;
  double rel_eig = 1e-6;
  double herm_warn = 1e-9;

  // tau = max(abs_eig, rel_eig * spectral scale)
  double threshold(double min_eig, double max_eig) const;
  void validate() const;
};

// Sink for non-fatal diagnostics (e.g. a matrix that needed noticeable
// symmetrization). Default writes one line to stderr.
using WarningHandler = std::function<void(const std::string&)>;
void set_warning_handler(WarningHandler handler);
void emit_warning(const std::string& message);

// Dense Hermitian matrix. Construction symmetrizes via (M + M*)/2 and
// records how far the input was from Hermitian; a deviation above
// `herm_warn` triggers a warning (finite-difference output is Hermitian
// only up to truncation error).
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(const ComplexMatrix& m,
                           double herm_warn = TolerancePolicy{}.herm_warn);

  static HermitianMatrix identity(int dim);
  static HermitianMatrix zero(int dim);

  int dim() const { return static_cast<int>(mat_.rows()); }
  const ComplexMatrix& mat() const { return mat_; }
  Complex operator()(int row, int col) const { return mat_(row, col); }

  // max-norm distance of the pre-symmetrization input from Hermitian
  double hermitian_deviation() const { return deviation_; }

  double frobenius_norm() const { return mat_.norm(); }

 private:
  ComplexMatrix mat_;
  double deviation_ = 0.0;
};

enum class Definiteness {
  PositiveDefinite,
  PositiveSemidefinite,
  NegativeDefinite,
  NegativeSemidefinite,
  Indefinite,
  Zero,
};

std::string to_string(Definiteness d);

struct DefinitenessVerdict {
  double min_eig = 0.0;
  double max_eig = 0.0;
  Definiteness classification = Definiteness::Zero;
  ComplexVector witness_min;  // unit eigenvector for min_eig
  ComplexVector witness_max;  // unit eigenvector for max_eig
};

struct EigenDecomposition {
  RealVector eigenvalues;     // ascending
  ComplexMatrix eigenvectors; // unitary, columns match eigenvalues
};

// Hermitian eigendecomposition, eigenvalues ascending.
EigenDecomposition eig_hermitian(const HermitianMatrix& m);

DefinitenessVerdict classify_definiteness(const HermitianMatrix& m,
                                          const TolerancePolicy& tol = {});

// Entrywise (Hadamard) product; preserves positive semidefiniteness.
HermitianMatrix schur_product(const HermitianMatrix& a,
                              const HermitianMatrix& b);

// Gram matrix of a vector tuple under the inner product (u,v)_g = v* g u;
// entry (j,k) = u_k* g u_j. Always positive semidefinite.
HermitianMatrix gram_matrix(const std::vector<ComplexVector>& vectors,
                            const HermitianMatrix& g);

}  // namespace mvlc
