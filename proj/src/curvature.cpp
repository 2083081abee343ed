#include "mvlc/curvature.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

#include "mvlc/errors.hpp"

namespace mvlc {

namespace {

// Hermitian part; the true derivative of a Hermitian family is Hermitian, so
// this only removes callback/FD noise.
ComplexMatrix herm(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

void check_finite(const ComplexMatrix& m, const std::string& what, const RealVector& x) {
  if (!m.allFinite()) {
    throw EvalError(what + " is not finite at " + format_point(x));
  }
}

class StencilEvaluator {
 public:
  StencilEvaluator(const MetricFunction& g, const RealVector& x, const TolerancePolicy& tol)
      : g_(g), x_(x), tol_(tol) {}

  ComplexMatrix at(double dj, int j, double dk = 0.0, int k = 0) const {
    RealVector p = x_;
    p(j) += dj;
    if (dk != 0.0) p(k) += dk;
    return g_.eval(p, tol_).mat();
  }

 private:
  const MetricFunction& g_;
  const RealVector& x_;
  const TolerancePolicy& tol_;
};

ComplexMatrix fd_first(const StencilEvaluator& ev, int j, double h, bool richardson) {
  auto diff = [&](double step) {
    return ((ev.at(step, j) - ev.at(-step, j)) / (2.0 * step)).eval();
  };
  ComplexMatrix d = diff(h);
  if (!richardson) return d;
  ComplexMatrix dh = diff(0.5 * h);
  return (4.0 * dh - d) / 3.0;
}

ComplexMatrix fd_second_diag(const StencilEvaluator& ev, const ComplexMatrix& g0, int j, double h,
                             bool richardson) {
  auto diff = [&](double step) {
    return ((ev.at(step, j) - 2.0 * g0 + ev.at(-step, j)) / (step * step)).eval();
  };
  ComplexMatrix d = diff(h);
  if (!richardson) return d;
  ComplexMatrix dh = diff(0.5 * h);
  return (4.0 * dh - d) / 3.0;
}

ComplexMatrix fd_second_mixed(const StencilEvaluator& ev, int j, int k, double hj, double hk,
                              bool richardson) {
  auto diff = [&](double sj, double sk) {
    ComplexMatrix pp = ev.at(sj, j, sk, k);
    ComplexMatrix pm = ev.at(sj, j, -sk, k);
    ComplexMatrix mp = ev.at(-sj, j, sk, k);
    ComplexMatrix mm = ev.at(-sj, j, -sk, k);
    return ((pp - pm - mp + mm) / (4.0 * sj * sk)).eval();
  };
  ComplexMatrix d = diff(hj, hk);
  if (!richardson) return d;
  ComplexMatrix dh = diff(0.5 * hj, 0.5 * hk);
  return (4.0 * dh - d) / 3.0;
}

// First index attaining the extreme of an ascending eigenvalue list.
int pick_index(const RealVector& eigs, bool want_max) {
  int n = static_cast<int>(eigs.size());
  if (!want_max) return 0;
  double top = eigs(n - 1);
  for (int i = 0; i < n; ++i) {
    if (eigs(i) == top) return i;
  }
  return n - 1;
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

ComplexVector random_unit(std::mt19937_64& rng, int dim) {
  ComplexVector v(dim);
  for (int i = 0; i < dim; ++i) {
    v(i) = Complex(2.0 * uniform01(rng) - 1.0, 2.0 * uniform01(rng) - 1.0);
  }
  double norm = v.norm();
  if (norm < 1e-12) {
    v.setZero();
    v(0) = 1.0;
    return v;
  }
  return v / norm;
}

struct SearchOutcome {
  double value = 0.0;
  ComplexVector u;
  ComplexVector v;
};

// Alternating eigenvector ascent on the rank-one-restricted quadratic form.
// S[j][k] are the symmetrized pairing blocks g*Theta_jk.
SearchOutcome alternating_search(const std::vector<std::vector<ComplexMatrix>>& S, int n, int r,
                                 bool maximize, const SearchBudget& budget) {
  std::mt19937_64 rng(budget.seed);
  SearchOutcome best;
  bool have_best = false;

  for (int start = 0; start < budget.starts; ++start) {
    ComplexVector u = random_unit(rng, r);
    ComplexVector v = random_unit(rng, n);
    double value = 0.0;
    double prev = std::numeric_limits<double>::quiet_NaN();

    for (int it = 0; it < budget.iterations; ++it) {
      ComplexMatrix A = ComplexMatrix::Zero(r, r);
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
          A += v(j) * std::conj(v(k)) * S[static_cast<size_t>(j)][static_cast<size_t>(k)];
        }
      }
      EigenDecomposition du = eig_hermitian(HermitianMatrix(herm(A)));
      int iu = pick_index(du.eigenvalues, maximize);
      u = du.eigenvectors.col(iu);

      ComplexMatrix B(n, n);
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
          B(j, k) = (u.adjoint() * S[static_cast<size_t>(j)][static_cast<size_t>(k)] * u).value();
        }
      }
      EigenDecomposition dv = eig_hermitian(HermitianMatrix(herm(B)));
      int iv = pick_index(dv.eigenvalues, maximize);
      v = dv.eigenvectors.col(iv).conjugate();
      value = dv.eigenvalues(iv);

      if (std::isfinite(prev) && std::abs(value - prev) <= 1e-13 * std::max(1.0, std::abs(value))) {
        break;
      }
      prev = value;
    }

    if (!have_best || (maximize ? value > best.value : value < best.value)) {
      best.value = value;
      best.u = u;
      best.v = v;
      have_best = true;
    }
  }
  return best;
}

}  // namespace

double FDScheme::step(double xi) const { return step_base * (1.0 + std::abs(xi)); }

void FDScheme::validate() const {
  if (!(step_base > 0.0)) {
    throw DomainError("FD step_base must be positive");
  }
}

ComplexMatrix CurvatureTensor::pairing_block(int j, int k) const {
  const ComplexMatrix& g = metric_value.mat();
  ComplexMatrix a = g * blocks[static_cast<size_t>(j)][static_cast<size_t>(k)];
  ComplexMatrix b = g * blocks[static_cast<size_t>(k)][static_cast<size_t>(j)];
  return 0.5 * (a + b.adjoint());
}

CurvatureTensor theta(const MetricFunction& g, const RealVector& x, const FDScheme& scheme,
                      const TolerancePolicy& tol) {
  scheme.validate();
  tol.validate();
  if (x.size() != g.dim) {
    throw DimensionError("theta: point has dimension " + std::to_string(x.size()) +
                         ", metric expects " + std::to_string(g.dim));
  }

  const int n = g.dim;
  const int r = g.rank;
  CurvatureTensor T;
  T.n = n;
  T.r = r;
  T.point = x;
  T.metric_value = g.eval(x, tol);

  const ComplexMatrix g0 = T.metric_value.mat();
  ComplexMatrix ginv = g0.inverse();
  check_finite(ginv, "metric inverse", x);

  StencilEvaluator ev(g, x, tol);
  bool analytic = g.has_derivatives();

  std::vector<ComplexMatrix> d1(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j) {
    ComplexMatrix d = analytic ? g.first_derivative(x, j)
                               : fd_first(ev, j, scheme.step(x(j)), scheme.richardson);
    check_finite(d, "first derivative", x);
    d1[static_cast<size_t>(j)] = herm(d);
  }

  std::vector<std::vector<ComplexMatrix>> d2(static_cast<size_t>(n),
                                             std::vector<ComplexMatrix>(static_cast<size_t>(n)));
  for (int j = 0; j < n; ++j) {
    for (int k = j; k < n; ++k) {
      ComplexMatrix d;
      if (analytic) {
        d = g.second_derivative(x, j, k);
      } else if (j == k) {
        d = fd_second_diag(ev, g0, j, scheme.step(x(j)), scheme.richardson);
      } else {
        d = fd_second_mixed(ev, j, k, scheme.step(x(j)), scheme.step(x(k)), scheme.richardson);
      }
      check_finite(d, "second derivative", x);
      d2[static_cast<size_t>(j)][static_cast<size_t>(k)] = herm(d);
      d2[static_cast<size_t>(k)][static_cast<size_t>(j)] =
          d2[static_cast<size_t>(j)][static_cast<size_t>(k)];
    }
  }

  T.blocks.assign(static_cast<size_t>(n), std::vector<ComplexMatrix>(static_cast<size_t>(n)));
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      const ComplexMatrix& dj = d1[static_cast<size_t>(j)];
      const ComplexMatrix& dk = d1[static_cast<size_t>(k)];
      T.blocks[static_cast<size_t>(j)][static_cast<size_t>(k)] =
          -ginv * dk * ginv * dj + ginv * d2[static_cast<size_t>(j)][static_cast<size_t>(k)];
    }
  }
  return T;
}

double pairing_symmetry_residual(const CurvatureTensor& T) {
  const ComplexMatrix& g = T.metric_value.mat();
  double worst = 0.0;
  for (int j = 0; j < T.n; ++j) {
    for (int k = 0; k < T.n; ++k) {
      ComplexMatrix a = g * T.blocks[static_cast<size_t>(j)][static_cast<size_t>(k)];
      ComplexMatrix b = g * T.blocks[static_cast<size_t>(k)][static_cast<size_t>(j)];
      worst = std::max(worst, (a.adjoint() - b).norm());
    }
  }
  return worst;
}

HermitianMatrix nakano_matrix(const CurvatureTensor& T) {
  const int n = T.n;
  const int r = T.r;
  const ComplexMatrix& g = T.metric_value.mat();
  ComplexMatrix N(n * r, n * r);
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      N.block(k * r, j * r, r, r) = g * T.blocks[static_cast<size_t>(j)][static_cast<size_t>(k)];
    }
  }
  return HermitianMatrix(N);
}

std::string to_string(VerdictMode mode) {
  switch (mode) {
    case VerdictMode::NakanoConcave: return "NakanoConcave";
    case VerdictMode::NakanoConvex: return "NakanoConvex";
    case VerdictMode::GriffithsConcave: return "GriffithsConcave";
    case VerdictMode::GriffithsConvex: return "GriffithsConvex";
  }
  return "?";
}

std::string to_string(VerdictHolds holds) {
  switch (holds) {
    case VerdictHolds::Certified: return "Certified";
    case VerdictHolds::ViolationFound: return "ViolationFound";
    case VerdictHolds::NoViolationFound: return "NoViolationFound";
  }
  return "?";
}

PositivityVerdict nakano_verdict(const CurvatureTensor& T, const TolerancePolicy& tol,
                                 ConcavityMode want) {
  HermitianMatrix N = nakano_matrix(T);
  EigenDecomposition d = eig_hermitian(N);
  int last = static_cast<int>(d.eigenvalues.size()) - 1;
  double lo = d.eigenvalues(0);
  double hi = d.eigenvalues(last);
  double tau = tol.threshold(lo, hi);

  PositivityVerdict v;
  v.point = T.point;
  if (want == ConcavityMode::Concave) {
    v.mode = VerdictMode::NakanoConcave;
    int i = pick_index(d.eigenvalues, true);
    v.extreme_value = d.eigenvalues(i);
    v.witness_stacked = d.eigenvectors.col(i);
    v.holds = (hi <= tau) ? VerdictHolds::Certified : VerdictHolds::ViolationFound;
  } else {
    v.mode = VerdictMode::NakanoConvex;
    int i = pick_index(d.eigenvalues, false);
    v.extreme_value = d.eigenvalues(i);
    v.witness_stacked = d.eigenvectors.col(i);
    v.holds = (lo >= -tau) ? VerdictHolds::Certified : VerdictHolds::ViolationFound;
  }
  return v;
}

double griffiths_form(const CurvatureTensor& T, const ComplexVector& u, const ComplexVector& v) {
  if (u.size() != T.r || v.size() != T.n) {
    throw DimensionError("griffiths_form: expected u of size " + std::to_string(T.r) +
                         " and v of size " + std::to_string(T.n));
  }
  const ComplexMatrix& g = T.metric_value.mat();
  Complex sum = 0.0;
  double mass = 0.0;
  for (int j = 0; j < T.n; ++j) {
    for (int k = 0; k < T.n; ++k) {
      Complex pairing =
          (u.adjoint() * g * T.blocks[static_cast<size_t>(j)][static_cast<size_t>(k)] * u).value();
      Complex term = pairing * v(j) * std::conj(v(k));
      sum += term;
      mass += std::abs(term);
    }
  }
  double scale = std::max(mass, std::numeric_limits<double>::min());
  if (std::abs(sum.imag()) > 1e-10 * scale) {
    throw SymmetryError("griffiths form is not real (relative imaginary part " +
                        std::to_string(std::abs(sum.imag()) / scale) +
                        "); curvature data violates pairing symmetry");
  }
  return sum.real();
}

PositivityVerdict griffiths_verdict(const CurvatureTensor& T, const TolerancePolicy& tol,
                                    ConcavityMode want, const SearchBudget& budget) {
  const int n = T.n;
  const int r = T.r;
  const bool concave = want == ConcavityMode::Concave;

  PositivityVerdict v;
  v.point = T.point;
  v.mode = concave ? VerdictMode::GriffithsConcave : VerdictMode::GriffithsConvex;

  std::vector<std::vector<ComplexMatrix>> S(static_cast<size_t>(n),
                                            std::vector<ComplexMatrix>(static_cast<size_t>(n)));
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      S[static_cast<size_t>(j)][static_cast<size_t>(k)] = T.pairing_block(j, k);
    }
  }

  if (n == 1 || r == 1) {
    // Exact path: the form is a Hermitian quadratic form in the free vector.
    ComplexMatrix A;
    if (n == 1) {
      A = S[0][0];
    } else {
      A.resize(n, n);
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
          A(j, k) = S[static_cast<size_t>(j)][static_cast<size_t>(k)](0, 0);
        }
      }
    }
    EigenDecomposition d = eig_hermitian(HermitianMatrix(A));
    int last = static_cast<int>(d.eigenvalues.size()) - 1;
    double tau = tol.threshold(d.eigenvalues(0), d.eigenvalues(last));
    int i = pick_index(d.eigenvalues, concave);
    v.extreme_value = d.eigenvalues(i);
    if (n == 1) {
      v.witness_u = d.eigenvectors.col(i);
      v.witness_v = ComplexVector::Ones(1);
    } else {
      v.witness_u = ComplexVector::Ones(1);
      v.witness_v = d.eigenvectors.col(i).conjugate();
    }
    bool ok = concave ? d.eigenvalues(last) <= tau : d.eigenvalues(0) >= -tau;
    v.holds = ok ? VerdictHolds::Certified : VerdictHolds::ViolationFound;
    return v;
  }

  PositivityVerdict nak = nakano_verdict(T, tol, want);
  EigenDecomposition nd = eig_hermitian(nakano_matrix(T));
  int nlast = static_cast<int>(nd.eigenvalues.size()) - 1;
  double tau = tol.threshold(nd.eigenvalues(0), nd.eigenvalues(nlast));

  SearchOutcome found = alternating_search(S, n, r, concave, budget);
  v.witness_u = found.u;
  v.witness_v = found.v;
  v.extreme_value = griffiths_form(T, found.u, found.v);

  if (nak.holds == VerdictHolds::Certified) {
    v.holds = VerdictHolds::Certified;
  } else if (concave ? v.extreme_value > tau : v.extreme_value < -tau) {
    v.holds = VerdictHolds::ViolationFound;
  } else {
    v.holds = VerdictHolds::NoViolationFound;
  }
  return v;
}

SweepSummary grid_sweep(const MetricFunction& g, const std::vector<RealVector>& points,
                        const FDScheme& scheme, const TolerancePolicy& tol, VerdictMode mode,
                        const SearchBudget& budget, int threads) {
  SweepSummary summary;
  summary.entries.resize(points.size());

  auto work = [&](size_t i) {
    SweepEntry& entry = summary.entries[i];
    entry.point = points[i];
    try {
      CurvatureTensor T = theta(g, points[i], scheme, tol);
      switch (mode) {
        case VerdictMode::NakanoConcave:
          entry.verdict = nakano_verdict(T, tol, ConcavityMode::Concave);
          break;
        case VerdictMode::NakanoConvex:
          entry.verdict = nakano_verdict(T, tol, ConcavityMode::Convex);
          break;
        case VerdictMode::GriffithsConcave:
          entry.verdict = griffiths_verdict(T, tol, ConcavityMode::Concave, budget);
          break;
        case VerdictMode::GriffithsConvex:
          entry.verdict = griffiths_verdict(T, tol, ConcavityMode::Convex, budget);
          break;
      }
    } catch (const std::exception& e) {
      entry.error = e.what();
      if (entry.error.empty()) entry.error = "unknown error";
    }
  };

  if (threads <= 1 || points.size() <= 1) {
    for (size_t i = 0; i < points.size(); ++i) work(i);
  } else {
    std::atomic<size_t> next{0};
    auto runner = [&] {
      for (size_t i = next.fetch_add(1); i < points.size(); i = next.fetch_add(1)) {
        work(i);
      }
    };
    std::vector<std::thread> pool;
    int count = std::min<int>(threads, static_cast<int>(points.size()));
    pool.reserve(static_cast<size_t>(count));
    for (int t = 0; t < count; ++t) pool.emplace_back(runner);
    for (std::thread& t : pool) t.join();
  }

  const bool concave =
      mode == VerdictMode::NakanoConcave || mode == VerdictMode::GriffithsConcave;
  bool first = true;
  for (const SweepEntry& entry : summary.entries) {
    if (!entry.verdict) {
      ++summary.errors;
      continue;
    }
    switch (entry.verdict->holds) {
      case VerdictHolds::Certified: ++summary.certified; break;
      case VerdictHolds::ViolationFound: ++summary.violations; break;
      case VerdictHolds::NoViolationFound: ++summary.no_violation; break;
    }
    double e = entry.verdict->extreme_value;
    if (first || (concave ? e > summary.worst_extreme : e < summary.worst_extreme)) {
      summary.worst_extreme = e;
      summary.worst_point = entry.point;
      first = false;
    }
  }
  return summary;
}

}  // namespace mvlc
