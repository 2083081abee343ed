#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <vector>

#include "mvlc/linalg.hpp"

namespace mvlc {

enum class RuleKind { GaussLegendre, Trapezoid, GaussHermite };

// One integration rule along a single axis. Bounded rules live on [lo, hi];
// Gauss-Hermite integrates over the whole line via y = center + scale*s and
// absorbs the e^{s^2} reweighting into the stored weights.
struct Rule1D {
  RuleKind kind = RuleKind::GaussLegendre;
  int order = 2;
  double lo = -1.0;
  double hi = 1.0;
  double center = 0.0;
  double scale = 1.0;

  bool bounded() const { return kind != RuleKind::GaussHermite; }
};

Rule1D gauss_legendre(int order, double lo, double hi);
Rule1D trapezoid(int points, double lo, double hi);
Rule1D gauss_hermite(int order, double center = 0.0, double scale = 1.0);

struct Nodes1D {
  std::vector<double> x;
  std::vector<double> w;
};

// Nodes/weights for a single rule (used directly by the Fourier transforms).
Nodes1D materialize_rule(const Rule1D& rule);

// Truncation diagnostic: largest face term |F(face center)| * cross-sectional
// measure, relative to the total absolute mass of the quadrature sum.
struct TailReport {
  double boundary_mass_ratio = 0.0;
  bool warning() const { return boundary_mass_ratio > 1e-8; }
};

class QuadratureGrid {
 public:
  static constexpr size_t kDefaultNodeCap = 10'000'000;

  explicit QuadratureGrid(std::vector<Rule1D> rules, size_t node_cap = kDefaultNodeCap);

  QuadratureGrid(const QuadratureGrid& other);
  QuadratureGrid& operator=(const QuadratureGrid& other);

  int dims() const { return static_cast<int>(rules_.size()); }
  size_t total_nodes() const { return total_nodes_; }
  const std::vector<Rule1D>& rules() const { return rules_; }
  size_t node_cap() const { return node_cap_; }

  // Materializes on first use; the result is shared by copies of this grid.
  const std::vector<Nodes1D>& all_nodes() const;

  // Decodes the mixed-radix node index into a point and its tensor weight.
  void node(size_t index, RealVector& x, double& w) const;

  // Same rules with per-dim order doubled.
  QuadratureGrid refined() const;

  // Effective bounds used for tail probes (Gauss-Hermite: center +- 8*scale).
  double probe_lo(int d) const;
  double probe_hi(int d) const;
  double probe_mid(int d) const;

 private:
  std::vector<Rule1D> rules_;
  size_t node_cap_;
  size_t total_nodes_ = 1;
  mutable std::mutex cache_mutex_;
  mutable std::shared_ptr<const std::vector<Nodes1D>> nodes_;
};

struct IntegrationResult {
  ComplexMatrix value;
  TailReport tail;
};

using MatrixIntegrand = std::function<ComplexMatrix(const RealVector&)>;

IntegrationResult integrate_matrix(const MatrixIntegrand& F, const QuadratureGrid& grid);

struct RefinementResult {
  ComplexMatrix value;
  double achieved_rel = 0.0;
  int doublings = 0;
};

RefinementResult refine_until(const MatrixIntegrand& F, const QuadratureGrid& grid,
                              double target_rel, int max_doublings);

}  // namespace mvlc
