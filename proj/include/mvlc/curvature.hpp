#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mvlc/linalg.hpp"
#include "mvlc/metric.hpp"

namespace mvlc {

// Central finite differences with per-coordinate step h_i = step_base*(1+|x_i|).
// With richardson on, steps h and h/2 are combined for fourth-order accuracy.
struct FDScheme {
  double step_base = 1e-3;
  bool richardson = true;

  double step(double xi) const;
  void validate() const;
};

// The curvature blocks of a metric at one point: blocks[j][k] holds
// Theta_jk = -g^{-1}(d_k g) g^{-1}(d_j g) + g^{-1} d2_jk g.
struct CurvatureTensor {
  int n = 0;
  int r = 0;
  std::vector<std::vector<ComplexMatrix>> blocks;
  RealVector point;
  HermitianMatrix metric_value;

  const ComplexMatrix& block(int j, int k) const { return blocks[j][k]; }

  // Metric pairing block g*Theta_jk, Hermitian-symmetrized across (j,k)<->(k,j).
  ComplexMatrix pairing_block(int j, int k) const;
};

CurvatureTensor theta(const MetricFunction& g, const RealVector& x, const FDScheme& scheme = {},
                      const TolerancePolicy& tol = {});

// Max over (j,k) of ||(g Theta_jk)^* - g Theta_kj||_F; zero for exact data.
double pairing_symmetry_residual(const CurvatureTensor& T);

// Stacked form: block row k, block column j holds g*Theta_jk, so that for
// u = (u_1;...;u_n), u^* N u = sum_{j,k} (Theta_jk u_j, u_k)_g.
HermitianMatrix nakano_matrix(const CurvatureTensor& T);

enum class ConcavityMode { Concave, Convex };

enum class VerdictMode { NakanoConcave, NakanoConvex, GriffithsConcave, GriffithsConvex };
std::string to_string(VerdictMode mode);

enum class VerdictHolds { Certified, ViolationFound, NoViolationFound };
std::string to_string(VerdictHolds holds);

struct PositivityVerdict {
  VerdictMode mode = VerdictMode::NakanoConcave;
  VerdictHolds holds = VerdictHolds::NoViolationFound;
  double extreme_value = 0.0;
  // Nakano: stacked nr-vector; Griffiths: pair (u, v), unit Euclidean norm.
  ComplexVector witness_stacked;
  ComplexVector witness_u;
  ComplexVector witness_v;
  RealVector point;
};

PositivityVerdict nakano_verdict(const CurvatureTensor& T, const TolerancePolicy& tol,
                                 ConcavityMode want);

// sum_{j,k} (Theta_jk u, u)_g v_j conj(v_k); throws SymmetryError when the
// value has a relative imaginary part above 1e-10 (corrupted curvature data).
double griffiths_form(const CurvatureTensor& T, const ComplexVector& u, const ComplexVector& v);

struct SearchBudget {
  int starts = 16;
  int iterations = 50;
  uint64_t seed = 0x9e3779b97f4a7c15ull;
};

// Exact (eigen test) when n=1 or r=1; otherwise certifies through the Nakano
// verdict when possible and falls back to a multistart alternating search.
// NoViolationFound is explicitly not a certificate.
PositivityVerdict griffiths_verdict(const CurvatureTensor& T, const TolerancePolicy& tol,
                                    ConcavityMode want, const SearchBudget& budget = {});

struct SweepEntry {
  RealVector point;
  std::optional<PositivityVerdict> verdict;
  std::string error;
};

struct SweepSummary {
  std::vector<SweepEntry> entries;
  int certified = 0;
  int violations = 0;
  int no_violation = 0;
  int errors = 0;
  double worst_extreme = 0.0;  // meaningful when any verdict exists
  RealVector worst_point;

  bool has_verdicts() const { return certified + violations + no_violation > 0; }
};

SweepSummary grid_sweep(const MetricFunction& g, const std::vector<RealVector>& points,
                        const FDScheme& scheme, const TolerancePolicy& tol, VerdictMode mode,
                        const SearchBudget& budget = {}, int threads = 1);

}  // namespace mvlc
