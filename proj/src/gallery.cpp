#include "mvlc/gallery.hpp"

#include <cmath>
#include <random>

#include "mvlc/constructions.hpp"
#include "mvlc/errors.hpp"

namespace mvlc {

namespace {

ComplexMatrix mat2(double a, double b, double c, double d) {
  ComplexMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

// diag(e^{-x^2}, e^{-2x^2})
GalleryEntry make_diag_gauss() {
  GalleryEntry e;
  e.name = "diag-gauss";
  e.description =
      "diag(exp(-x^2), exp(-2x^2)), n=1 r=2; each diagonal weight is log "
      "concave, so the metric is Nakano log concave; at 0 the stacked "
      "curvature pairing is diag(-2, -4)";
  e.spec = parse_metric_spec(
      "name = \"diag-gauss\"\n"
      "rank = 2\n"
      "dims = { x = 1 }\n"
      "\n[entries]\n"
      "g_1_1 = \"exp(-x1^2)\"\n"
      "g_2_1 = \"0\"\n"
      "g_2_2 = \"exp(-2*x1^2)\"\n");
  MetricFunction m;
  m.dim = 1;
  m.rank = 2;
  m.name = e.name;
  m.value = [](const RealVector& x) {
    double t = x(0);
    return mat2(std::exp(-t * t), 0, 0, std::exp(-2 * t * t));
  };
  m.first_derivative = [](const RealVector& x, int) {
    double t = x(0);
    return mat2(-2 * t * std::exp(-t * t), 0, 0, -4 * t * std::exp(-2 * t * t));
  };
  m.second_derivative = [](const RealVector& x, int, int) {
    double t = x(0);
    return mat2((4 * t * t - 2) * std::exp(-t * t), 0, 0,
                (16 * t * t - 4) * std::exp(-2 * t * t));
  };
  e.metric = std::move(m);
  return e;
}

// e^{-|x|^2} * [[2,1],[1,1]]
GalleryEntry make_scalar_times_c() {
  GalleryEntry e;
  e.name = "scalar-times-C";
  e.description =
      "exp(-x1^2-x2^2) * [[2,1],[1,1]], n=2 r=2; curvature blocks are "
      "-2*delta_jk*I, Nakano log concave everywhere";
  e.spec = parse_metric_spec(
      "name = \"scalar-times-C\"\n"
      "rank = 2\n"
      "dims = { x = 2 }\n"
      "\n[entries]\n"
      "g_1_1 = \"2*exp(-(x1^2 + x2^2))\"\n"
      "g_2_1 = \"exp(-(x1^2 + x2^2))\"\n"
      "g_2_2 = \"exp(-(x1^2 + x2^2))\"\n");
  ComplexMatrix C = mat2(2, 1, 1, 1);
  MetricFunction m;
  m.dim = 2;
  m.rank = 2;
  m.name = e.name;
  m.value = [C](const RealVector& x) { return (std::exp(-x.squaredNorm()) * C).eval(); };
  m.first_derivative = [C](const RealVector& x, int j) {
    return (-2.0 * x(j) * std::exp(-x.squaredNorm()) * C).eval();
  };
  m.second_derivative = [C](const RealVector& x, int j, int k) {
    double d = (j == k) ? -2.0 : 0.0;
    return ((4.0 * x(j) * x(k) + d) * std::exp(-x.squaredNorm()) * C).eval();
  };
  e.metric = std::move(m);
  return e;
}

// e^{-(y^2+yt+t^2)} * A(y), A(y) = exp(yB - y^2 I) = e^{-y^2} [[cosh y, sinh y],[sinh y, cosh y]]
GalleryEntry make_corollary() {
  GalleryEntry e;
  e.name = "corollary";
  e.description =
      "exp(-(y^2+y*t+t^2)) * A(y) with A(y) = exp(y*B - y^2*I), B = "
      "[[0,1],[1,0]]; the weight is convex and A has curvature -2I, so the "
      "metric and its y-marginal are Nakano log concave";
  e.spec = parse_metric_spec(
      "name = \"corollary\"\n"
      "rank = 2\n"
      "dims = { y = 1, t = 1 }\n"
      "\n[entries]\n"
      "g_1_1 = \"exp(-(2*y1^2 + y1*t1 + t1^2)) * cosh(y1)\"\n"
      "g_2_1 = \"exp(-(2*y1^2 + y1*t1 + t1^2)) * sinh(y1)\"\n"
      "g_2_2 = \"exp(-(2*y1^2 + y1*t1 + t1^2)) * cosh(y1)\"\n");
  MetricFunction m;
  m.dim = 2;
  m.rank = 2;
  m.name = e.name;
  auto K = [](double y) { return mat2(std::cosh(y), std::sinh(y), std::sinh(y), std::cosh(y)); };
  auto KB = [](double y) { return mat2(std::sinh(y), std::cosh(y), std::cosh(y), std::sinh(y)); };
  auto s = [](double y, double t) { return -(2 * y * y + y * t + t * t); };
  m.value = [K, s](const RealVector& p) {
    return (std::exp(s(p(0), p(1))) * K(p(0))).eval();
  };
  m.first_derivative = [K, KB, s](const RealVector& p, int j) {
    double y = p(0), t = p(1);
    double es = std::exp(s(y, t));
    if (j == 0) {
      double sy = -(4 * y + t);
      return (es * (sy * K(y) + KB(y))).eval();
    }
    double st = -(y + 2 * t);
    return (es * st * K(y)).eval();
  };
  m.second_derivative = [K, KB, s](const RealVector& p, int j, int k) {
    double y = p(0), t = p(1);
    double es = std::exp(s(y, t));
    double sy = -(4 * y + t);
    double st = -(y + 2 * t);
    if (j == 0 && k == 0) {
      return (es * ((sy * sy - 4 + 1) * K(y) + 2 * sy * KB(y))).eval();
    }
    if (j == 1 && k == 1) {
      return (es * (st * st - 2) * K(y)).eval();
    }
    return (es * ((sy * st - 1) * K(y) + st * KB(y))).eval();
  };
  e.metric = std::move(m);
  return e;
}

// The explicit rank-2 polynomial dual spec; loaded through the TOML route so
// its curvature always runs through finite differences.
GalleryEntry make_example4_dual() {
  GalleryEntry e;
  e.name = "example4-dual";
  e.description =
      "[[1 + x1 + x2^2/2, x2],[x2, 1]], n=2 r=2; equals I at the origin, "
      "Nakano log concave there with stacked eigenvalues {-2, 0, 0, 0}";
  e.spec = parse_metric_spec(
      "name = \"example4-dual\"\n"
      "rank = 2\n"
      "dims = { x = 2 }\n"
      "\n[entries]\n"
      "g_1_1 = \"1 + x1 + x2^2/2\"\n"
      "g_2_1 = \"x2\"\n"
      "g_2_2 = \"1\"\n");
  e.metric = metric_from_spec(*e.spec);
  return e;
}

GalleryEntry make_example4() {
  GalleryEntry e;
  e.name = "example4";
  e.description =
      "pointwise inverse of example4-dual; at the origin it is neither "
      "Nakano log concave nor log convex, yet Griffiths log convex";
  e.spec = parse_metric_spec(
      "name = \"example4\"\n"
      "rank = 2\n"
      "dims = { x = 2 }\n"
      "\n[entries]\n"
      "g_1_1 = \"1/(1 + x1 - x2^2/2)\"\n"
      "g_2_1 = \"-x2/(1 + x1 - x2^2/2)\"\n"
      "g_2_2 = \"(1 + x1 + x2^2/2)/(1 + x1 - x2^2/2)\"\n");
  e.metric = inverse_metric(make_example4_dual().metric);
  e.metric.name = e.name;
  return e;
}

GalleryEntry make_random_smooth() {
  GalleryEntry e;
  e.name = "random-smooth";
  e.description =
      "exp(M(x)) for a fixed seeded random Hermitian quadratic M, n=2 r=2; "
      "positive definite by construction, no definiteness ground truth";
  e.metric = random_metric(0x5eed, 2, 2, 2);
  e.metric.name = e.name;
  return e;
}

// e^{-(y^2+t^2)} * C: the separable Gaussian whose marginal has the closed
// form sqrt(pi) e^{-t^2} C.
GalleryEntry make_gauss_c_yt() {
  GalleryEntry e;
  e.name = "gauss-C-yt";
  e.description =
      "exp(-(y^2+t^2)) * [[2,1],[1,1]] split as (y,t); the y-marginal is "
      "sqrt(pi)*exp(-t^2)*C with curvature pairing -2I";
  e.spec = parse_metric_spec(
      "name = \"gauss-C-yt\"\n"
      "rank = 2\n"
      "dims = { y = 1, t = 1 }\n"
      "\n[entries]\n"
      "g_1_1 = \"2*exp(-(y1^2 + t1^2))\"\n"
      "g_2_1 = \"exp(-(y1^2 + t1^2))\"\n"
      "g_2_2 = \"exp(-(y1^2 + t1^2))\"\n");
  ComplexMatrix C = mat2(2, 1, 1, 1);
  MetricFunction m;
  m.dim = 2;
  m.rank = 2;
  m.name = e.name;
  m.value = [C](const RealVector& p) { return (std::exp(-p.squaredNorm()) * C).eval(); };
  m.first_derivative = [C](const RealVector& p, int j) {
    return (-2.0 * p(j) * std::exp(-p.squaredNorm()) * C).eval();
  };
  m.second_derivative = [C](const RealVector& p, int j, int k) {
    double d = (j == k) ? -2.0 : 0.0;
    return ((4.0 * p(j) * p(k) + d) * std::exp(-p.squaredNorm()) * C).eval();
  };
  e.metric = std::move(m);
  return e;
}

GalleryEntry make_scalar_prekopa() {
  GalleryEntry e;
  e.name = "scalar-prekopa";
  e.description =
      "exp(-(y^2+y*t+t^2)), r=1; the classical case: the y-marginal is "
      "sqrt(pi)*exp(-3t^2/4), whose -log has Hessian 3/2";
  e.spec = parse_metric_spec(
      "name = \"scalar-prekopa\"\n"
      "rank = 1\n"
      "dims = { y = 1, t = 1 }\n"
      "\n[entries]\n"
      "g_1_1 = \"exp(-(y1^2 + y1*t1 + t1^2))\"\n");
  MetricFunction m;
  m.dim = 2;
  m.rank = 1;
  m.name = e.name;
  auto s = [](double y, double t) { return -(y * y + y * t + t * t); };
  m.value = [s](const RealVector& p) {
    ComplexMatrix g(1, 1);
    g(0, 0) = std::exp(s(p(0), p(1)));
    return g;
  };
  m.first_derivative = [s](const RealVector& p, int j) {
    double y = p(0), t = p(1);
    double d = (j == 0) ? -(2 * y + t) : -(y + 2 * t);
    ComplexMatrix g(1, 1);
    g(0, 0) = d * std::exp(s(y, t));
    return g;
  };
  m.second_derivative = [s](const RealVector& p, int j, int k) {
    double y = p(0), t = p(1);
    double dj = (j == 0) ? -(2 * y + t) : -(y + 2 * t);
    double dk = (k == 0) ? -(2 * y + t) : -(y + 2 * t);
    double djk = (j == k) ? -2.0 : -1.0;
    ComplexMatrix g(1, 1);
    g(0, 0) = (dj * dk + djk) * std::exp(s(y, t));
    return g;
  };
  e.metric = std::move(m);
  return e;
}

GalleryEntry make_gauss_scalar() {
  GalleryEntry e;
  e.name = "gauss-scalar";
  e.description =
      "exp(-y^2), n=1 r=1; transform side 2*pi*sqrt(pi)*exp(xi^2), curvature "
      "-2 everywhere";
  e.spec = parse_metric_spec(
      "name = \"gauss-scalar\"\n"
      "rank = 1\n"
      "dims = { y = 1 }\n"
      "\n[entries]\n"
      "g_1_1 = \"exp(-y1^2)\"\n");
  MetricFunction m;
  m.dim = 1;
  m.rank = 1;
  m.name = e.name;
  m.value = [](const RealVector& p) {
    ComplexMatrix g(1, 1);
    g(0, 0) = std::exp(-p(0) * p(0));
    return g;
  };
  m.first_derivative = [](const RealVector& p, int) {
    ComplexMatrix g(1, 1);
    g(0, 0) = -2 * p(0) * std::exp(-p(0) * p(0));
    return g;
  };
  m.second_derivative = [](const RealVector& p, int, int) {
    ComplexMatrix g(1, 1);
    g(0, 0) = (4 * p(0) * p(0) - 2) * std::exp(-p(0) * p(0));
    return g;
  };
  e.metric = std::move(m);
  return e;
}

GalleryEntry make_gauss_r2() {
  GalleryEntry e;
  e.name = "gauss-r2";
  e.description =
      "exp(-y^2) * [[2,1],[1,1]], n=1 r=2; the rank-2 transform-side test "
      "metric, curvature pairing -2*g";
  e.spec = parse_metric_spec(
      "name = \"gauss-r2\"\n"
      "rank = 2\n"
      "dims = { y = 1 }\n"
      "\n[entries]\n"
      "g_1_1 = \"2*exp(-y1^2)\"\n"
      "g_2_1 = \"exp(-y1^2)\"\n"
      "g_2_2 = \"exp(-y1^2)\"\n");
  ComplexMatrix C = mat2(2, 1, 1, 1);
  MetricFunction m;
  m.dim = 1;
  m.rank = 2;
  m.name = e.name;
  m.value = [C](const RealVector& p) { return (std::exp(-p(0) * p(0)) * C).eval(); };
  m.first_derivative = [C](const RealVector& p, int) {
    return (-2 * p(0) * std::exp(-p(0) * p(0)) * C).eval();
  };
  m.second_derivative = [C](const RealVector& p, int, int) {
    return ((4 * p(0) * p(0) - 2) * std::exp(-p(0) * p(0)) * C).eval();
  };
  e.metric = std::move(m);
  return e;
}

}  // namespace

const std::vector<GalleryEntry>& gallery_list() {
  static const std::vector<GalleryEntry> entries = [] {
    std::vector<GalleryEntry> v;
    v.push_back(make_diag_gauss());
    v.push_back(make_scalar_times_c());
    v.push_back(make_corollary());
    v.push_back(make_example4_dual());
    v.push_back(make_example4());
    v.push_back(make_random_smooth());
    v.push_back(make_gauss_c_yt());
    v.push_back(make_scalar_prekopa());
    v.push_back(make_gauss_scalar());
    v.push_back(make_gauss_r2());
    return v;
  }();
  return entries;
}

const GalleryEntry& gallery_entry(const std::string& name) {
  for (const GalleryEntry& e : gallery_list()) {
    if (e.name == name) return e;
  }
  throw DomainError("unknown gallery entry '" + name + "'; run the gallery list command");
}

MetricFunction random_metric(uint64_t seed, int n, int r, int degree) {
  if (n < 1 || r < 1) {
    throw DomainError("random_metric needs n >= 1 and r >= 1");
  }
  if (degree < 0 || degree > 4) {
    throw DomainError("random_metric supports degree in [0, 4]");
  }

  std::mt19937_64 rng(seed);
  auto uniform = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

  // Multi-indices of total degree <= degree, constant term first.
  std::vector<std::vector<int>> monomials;
  std::vector<int> current(static_cast<size_t>(n), 0);
  auto emit = [&](auto&& self, int pos, int left) -> void {
    if (pos == n) {
      monomials.push_back(current);
      return;
    }
    for (int d = 0; d <= left; ++d) {
      current[static_cast<size_t>(pos)] = d;
      self(self, pos + 1, left - d);
    }
    current[static_cast<size_t>(pos)] = 0;
  };
  emit(emit, 0, degree);

  struct Term {
    std::vector<int> powers;
    ComplexMatrix coeff;
  };
  std::vector<Term> terms;
  terms.reserve(monomials.size());
  for (const auto& alpha : monomials) {
    int total = 0;
    for (int d : alpha) total += d;
    double scale = (total == 0) ? 0.4 : std::pow(0.15, total);
    ComplexMatrix raw(r, r);
    for (int i = 0; i < r; ++i) {
      for (int j = 0; j < r; ++j) {
        raw(i, j) = Complex(2.0 * uniform() - 1.0, 2.0 * uniform() - 1.0);
      }
    }
    Term t;
    t.powers = alpha;
    t.coeff = scale * 0.5 * (raw + raw.adjoint());
    terms.push_back(std::move(t));
  }

  MetricFunction m;
  m.dim = n;
  m.rank = r;
  m.name = "random-smooth(seed=" + std::to_string(seed) + ",n=" + std::to_string(n) +
           ",r=" + std::to_string(r) + ",degree=" + std::to_string(degree) + ")";
  m.value = [terms, n, r](const RealVector& x) {
    ComplexMatrix M = ComplexMatrix::Zero(r, r);
    for (const Term& t : terms) {
      double mono = 1.0;
      for (int i = 0; i < n; ++i) {
        for (int d = 0; d < t.powers[static_cast<size_t>(i)]; ++d) mono *= x(i);
      }
      M += mono * t.coeff;
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(M);
    ComplexMatrix out = es.eigenvectors() *
                        es.eigenvalues().array().exp().matrix().asDiagonal() *
                        es.eigenvectors().adjoint();
    return out;
  };
  return m;
}

}  // namespace mvlc
