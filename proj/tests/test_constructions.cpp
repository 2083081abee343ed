#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "mvlc/constructions.hpp"
#include "mvlc/gallery.hpp"

using namespace mvlc;

namespace {

RealVector pt(double a) {
  RealVector x(1);
  x << a;
  return x;
}

RealVector pt(double a, double b) {
  RealVector x(2);
  x << a, b;
  return x;
}

}  // namespace

TEST_CASE("pointwise inversion inverts") {
  const GalleryEntry& dual = gallery_entry("example4-dual");
  const GalleryEntry& orig = gallery_entry("example4");
  MetricFunction inv = inverse_metric(dual.metric);

  for (auto x : {pt(0.0, 0.0), pt(0.2, -0.1), pt(-0.3, 0.25)}) {
    ComplexMatrix a = inv.value(x);
    ComplexMatrix b = orig.metric.value(x);
    CHECK((a - b).norm() < 1e-12);
    // g * g^{-1} = I
    CHECK((dual.metric.value(x) * a - ComplexMatrix::Identity(2, 2)).norm() < 1e-12);
  }

  // inverting twice returns to the start
  MetricFunction twice = inverse_metric(inv);
  CHECK((twice.value(pt(0.1, 0.2)) - dual.metric.value(pt(0.1, 0.2))).norm() < 1e-12);
}

TEST_CASE("inversion flips the curvature of a scalar gaussian") {
  MetricFunction g;
  g.dim = 1;
  g.rank = 1;
  g.value = [](const RealVector& x) {
    ComplexMatrix m(1, 1);
    m(0, 0) = std::exp(-x(0) * x(0));
    return m;
  };
  MetricFunction inv = inverse_metric(g);
  CurvatureTensor T = theta(inv, pt(0.6));
  CHECK(T.block(0, 0)(0, 0).real() == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("duality identities relate a metric and its inverse") {
  // (Theta^g_jk)^* = -Theta^{g^{-1}}_jk  and  Theta^g_jk = -g^{-1} Theta^{g^{-1}}_kj g
  auto check_metric = [](const MetricFunction& g, const RealVector& x, double tol) {
    MetricFunction ginv = inverse_metric(g);
    CurvatureTensor Tg = theta(g, x);
    CurvatureTensor Ti = theta(ginv, x);
    ComplexMatrix gx = g.value(x);
    ComplexMatrix gx_inv = gx.inverse();

    for (int j = 0; j < Tg.n; ++j) {
      for (int k = 0; k < Tg.n; ++k) {
        CHECK((Tg.block(j, k).adjoint() + Ti.block(j, k)).norm() < tol);
        CHECK((Tg.block(j, k) + gx_inv * Ti.block(k, j) * gx).norm() < tol);
      }
    }
  };

  check_metric(gallery_entry("scalar-times-C").metric, pt(0.3, -0.2), 1e-6);
  check_metric(gallery_entry("example4-dual").metric, pt(0.1, 0.15), 1e-6);
  check_metric(random_metric(7, 2, 2), pt(0.2, -0.1), 1e-5);
}

TEST_CASE("scaling by a positive weight shifts curvature by the log hessian") {
  ScalarFunction f;
  f.dim = 1;
  f.name = "gauss-weight";
  f.value = [](const RealVector& x) { return std::exp(-x(0) * x(0)); };

  const GalleryEntry& e = gallery_entry("gauss-r2");
  MetricFunction scaled = scale_by_function(f, e.metric);
  CHECK(scaled.dim == 1);
  CHECK(scaled.rank == 2);

  for (double x : {0.0, 0.5}) {
    ComplexMatrix v = scaled.value(pt(x));
    CHECK((v - std::exp(-x * x) * e.metric.value(pt(x))).norm() < 1e-13);

    // Theta^{fg} = Theta^g + (log f)'' I = Theta^g - 2I
    CurvatureTensor Tg = theta(e.metric, pt(x));
    CurvatureTensor Ts = theta(scaled, pt(x));
    ComplexMatrix shift = Ts.block(0, 0) - Tg.block(0, 0);
    CHECK((shift + 2.0 * ComplexMatrix::Identity(2, 2)).norm() < 1e-6);
  }
}

TEST_CASE("a weight that dips non-positive is rejected at evaluation") {
  ScalarFunction f;
  f.dim = 1;
  f.name = "dipper";
  f.value = [](const RealVector& x) { return 1.0 - x(0) * x(0); };

  MetricFunction scaled = scale_by_function(f, gallery_entry("gauss-r2").metric);
  CHECK_NOTHROW(scaled.value(pt(0.5)));
  CHECK_THROWS_AS(scaled.value(pt(2.0)), DomainError);
}

TEST_CASE("det-twisting multiplies by the determinant pointwise") {
  const GalleryEntry& e = gallery_entry("diag-gauss");
  MetricFunction ds = demailly_skoda(e.metric);
  for (double x : {0.0, 0.4, -1.1}) {
    ComplexMatrix g = e.metric.value(pt(x));
    ComplexMatrix want = g * g.determinant();
    CHECK((ds.value(pt(x)) - want).norm() < 1e-13);
  }
}

TEST_CASE("det-twist curvature: formula path equals the direct path") {
  for (const char* name : {"scalar-times-C", "example4-dual", "gauss-r2", "diag-gauss"}) {
    CAPTURE(name);
    const GalleryEntry& e = gallery_entry(name);
    RealVector x = RealVector::Zero(e.metric.dim);
    x(0) = 0.2;

    CurvatureTensor T = theta(e.metric, x);
    CurvatureTensor formula = demailly_skoda_curvature(T);
    CurvatureTensor direct = theta(demailly_skoda(e.metric), x);

    for (int j = 0; j < T.n; ++j) {
      for (int k = 0; k < T.n; ++k) {
        CHECK((formula.block(j, k) - direct.block(j, k)).norm() < 1e-5);
        // and the formula itself: Theta_jk + tr(Theta_jk) I
        ComplexMatrix want =
            T.block(j, k) + T.block(j, k).trace() * ComplexMatrix::Identity(T.r, T.r);
        CHECK((formula.block(j, k) - want).norm() < 1e-12);
      }
    }
  }
}

TEST_CASE("det-twisting the constant-matrix gaussian lands at -6 kronecker blocks") {
  const GalleryEntry& e = gallery_entry("scalar-times-C");
  CurvatureTensor formula = demailly_skoda_curvature(theta(e.metric, pt(0.25, -0.4)));
  for (int j = 0; j < 2; ++j) {
    for (int k = 0; k < 2; ++k) {
      ComplexMatrix want = (j == k) ? (-6.0 * ComplexMatrix::Identity(2, 2)).eval()
                                    : ComplexMatrix::Zero(2, 2).eval();
      CHECK((formula.block(j, k) - want).norm() < 1e-6);
    }
  }
}

TEST_CASE("the log determinant hessian collects block traces") {
  CurvatureTensor T = theta(gallery_entry("scalar-times-C").metric, pt(0.0, 0.0));
  HermitianMatrix H = logdet_hessian(T);
  CHECK(H.dim() == 2);
  CHECK((H.mat() + 4.0 * ComplexMatrix::Identity(2, 2)).norm() < 1e-7);

  CurvatureTensor S = theta(gallery_entry("scalar-prekopa").metric, pt(0.0, 0.0));
  HermitianMatrix Hs = logdet_hessian(S);
  ComplexMatrix want(2, 2);
  want << -2.0, -1.0, -1.0, -2.0;
  CHECK((Hs.mat() - want).norm() < 1e-7);
}

TEST_CASE("roots-of-unity averages collapse to the closed form") {
  // deterministic pseudo-random complex data
  uint64_t state = 42;
  auto next = [&state]() {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    return static_cast<double>(state >> 11) / static_cast<double>(1ull << 53) - 0.5;
  };

  for (int q : {3, 4, 5}) {
    for (int r : {1, 2, 3}) {
      ComplexVector x(r), y(r);
      for (int i = 0; i < r; ++i) {
        x(i) = Complex(next(), next());
        y(i) = Complex(next(), next());
      }
      for (int alpha = 1; alpha <= r; ++alpha) {
        for (int beta = 1; beta <= r; ++beta) {
          Complex got = roots_of_unity_average(q, x, y, alpha, beta);
          Complex want = (alpha != beta)
                             ? x(alpha - 1) * std::conj(y(beta - 1))
                             : Complex((x.array() * y.array().conjugate()).sum());
          CAPTURE(q);
          CAPTURE(r);
          CAPTURE(alpha);
          CAPTURE(beta);
          CHECK(std::abs(got - want) < 1e-12);
        }
      }
    }
  }
}

TEST_CASE("the average needs at least cube roots and in-range indices") {
  ComplexVector x(2), y(2);
  x << 1.0, Complex(0.0, 1.0);
  y << 0.5, 2.0;
  CHECK_THROWS_AS(roots_of_unity_average(2, x, y, 1, 1), DomainError);
  CHECK_THROWS_AS(roots_of_unity_average(3, x, y, 0, 1), DomainError);
  CHECK_THROWS_AS(roots_of_unity_average(3, x, y, 1, 3), DomainError);
}

TEST_CASE("the schur-product mixed form matches a direct double sum") {
  HermitianMatrix H(([] {
    ComplexMatrix m(2, 2);
    m << 2.0, Complex(0.5, 0.25), Complex(0.5, -0.25), 1.0;
    return m;
  })());
  HermitianMatrix g(([] {
    ComplexMatrix m(2, 2);
    m << 2.0, 1.0, 1.0, 1.0;
    return m;
  })());
  std::vector<ComplexVector> u(2, ComplexVector(2));
  u[0] << Complex(1.0, 0.0), Complex(0.0, 1.0);
  u[1] << Complex(0.5, 0.0), Complex(-0.2, 0.3);

  double got = schur_mixed_form(H, u, g);

  Complex acc = 0.0;
  for (int j = 0; j < 2; ++j) {
    for (int k = 0; k < 2; ++k) {
      Complex inner = (u[k].adjoint() * g.mat() * u[j])(0, 0);
      acc += -H(j, k) * inner;
    }
  }
  CHECK(std::abs(acc.imag()) < 1e-12);
  CHECK(got == doctest::Approx(acc.real()).epsilon(1e-12));

  // H is positive definite here, so the mixed form cannot be positive
  CHECK(classify_definiteness(H).min_eig > 0.0);
  CHECK(got <= 1e-12);
}
