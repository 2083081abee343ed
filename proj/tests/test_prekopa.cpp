#include <doctest.h>

#include <atomic>
#include <cmath>
#include <complex>
#include <vector>

#include "mvlc/constructions.hpp"
#include "mvlc/gallery.hpp"
#include "mvlc/prekopa.hpp"

using namespace mvlc;

namespace {

const double kSqrtPi = std::sqrt(M_PI);

RealVector vec1(double a) {
  RealVector x(1);
  x << a;
  return x;
}

QuadratureGrid ygrid(int order = 64, double w = 8.0) {
  return QuadratureGrid({gauss_legendre(order, -w, w)});
}

}  // namespace

TEST_CASE("the scalar marginal reproduces the classical gaussian reduction") {
  const GalleryEntry& e = gallery_entry("scalar-prekopa");
  MarginalMetric M = marginalize(e.metric, std::nullopt, ygrid());
  CHECK(M.dim_t() == 1);
  CHECK(M.rank() == 1);

  // integrating e^{-(y^2+yt+t^2)} over y leaves sqrt(pi) e^{-3t^2/4}
  for (double t : {-1.0, 0.0, 0.7, 2.0}) {
    double got = M.value(vec1(t))(0, 0).real();
    double want = kSqrtPi * std::exp(-0.75 * t * t);
    CHECK(got == doctest::Approx(want).epsilon(1e-10));
  }

  std::vector<RealVector> ts = {vec1(-1.0), vec1(0.0), vec1(1.0)};
  auto verdicts = prekopa_verdict(M, ts);
  REQUIRE(verdicts.size() == 3);
  for (size_t i = 0; i < ts.size(); ++i) {
    CHECK(verdicts[i].holds == VerdictHolds::Certified);
    // -log gtilde has second derivative 3/2
    double want = -1.5 * kSqrtPi * std::exp(-0.75 * ts[i](0) * ts[i](0));
    CHECK(verdicts[i].extreme_value == doctest::Approx(want).epsilon(1e-6));
  }
}

TEST_CASE("a gaussian weight times a constant matrix marginalizes to the same shape") {
  const GalleryEntry& e = gallery_entry("gauss-C-yt");
  MarginalMetric M = marginalize(e.metric, std::nullopt, ygrid());

  ComplexMatrix C(2, 2);
  C << 2.0, 1.0, 1.0, 1.0;

  for (double t : {-1.5, 0.0, 0.5}) {
    ComplexMatrix got = M.value(vec1(t)).mat();
    ComplexMatrix want = kSqrtPi * std::exp(-t * t) * C;
    CHECK((got - want).norm() / want.norm() < 1e-12);
  }

  // curvature of the marginal: Theta = -2 I, so the pairing extreme is
  // -2 lambda_min(gtilde)
  auto verdicts = prekopa_verdict(M, {vec1(0.0)});
  const double lam_min = (3.0 - std::sqrt(5.0)) / 2.0;
  CHECK(verdicts[0].holds == VerdictHolds::Certified);
  CHECK(verdicts[0].extreme_value ==
        doctest::Approx(-2.0 * kSqrtPi * lam_min).epsilon(1e-6));

  CurvatureTensor T = theta(M.as_metric(), vec1(0.4));
  CHECK((T.block(0, 0) + 2.0 * ComplexMatrix::Identity(2, 2)).norm() < 1e-5);
}

TEST_CASE("the built corollary metric has a certified concave marginal") {
  const GalleryEntry& e = gallery_entry("corollary");
  MarginalMetric M = marginalize(e.metric, std::nullopt, ygrid());

  // at t = 0 the marginal is sqrt(pi/2) e^{1/8} I
  ComplexMatrix g0 = M.value(vec1(0.0)).mat();
  const double want = std::sqrt(M_PI / 2.0) * std::exp(0.125);
  CHECK(g0(0, 0).real() == doctest::Approx(want).epsilon(1e-9));
  CHECK(g0(1, 1).real() == doctest::Approx(want).epsilon(1e-9));
  CHECK(std::abs(g0(0, 1)) < 1e-12);

  for (double t : {-1.0, 0.0, 1.0}) {
    auto v = prekopa_verdict(M, {vec1(t)});
    CHECK(v[0].holds == VerdictHolds::Certified);
    CHECK(v[0].extreme_value < -1e-3);
  }
}

TEST_CASE("marginal evaluations are memoized on the exact t bits") {
  auto counter = std::make_shared<std::atomic<int>>(0);
  MetricFunction g;
  g.dim = 2;
  g.rank = 1;
  g.name = "counted";
  g.value = [counter](const RealVector& x) {
    ++*counter;
    ComplexMatrix m(1, 1);
    m(0, 0) = std::exp(-x(0) * x(0) - x(1) * x(1));
    return m;
  };

  MarginalMetric M = marginalize(g, std::nullopt, ygrid(16));
  M.value(vec1(0.5));
  int after_first = counter->load();
  CHECK(after_first == 18);  // 16 nodes + 2 boundary probes

  M.value(vec1(0.5));
  CHECK(counter->load() == after_first);  // cache hit

  M.value(vec1(0.25));
  CHECK(counter->load() == 2 * after_first);

  // the curvature adapter shares the same cache
  MetricFunction adapter = M.as_metric();
  adapter.value(vec1(0.5));
  CHECK(counter->load() == 2 * after_first);

  theta(adapter, vec1(0.5));
  int after_theta = counter->load();
  CHECK(after_theta % after_first == 0);
  theta(adapter, vec1(0.5));
  CHECK(counter->load() == after_theta);  // the whole stencil is cached
}

TEST_CASE("convex regions know their membership and boundedness") {
  ConvexRegion box = ConvexRegion::box({{-1.0, 1.0}, {0.0, 2.0}});
  CHECK(box.dim() == 2);
  RealVector in(2), out(2);
  in << 0.5, 1.0;
  out << 0.5, 2.5;
  CHECK(box.contains(in));
  CHECK(!box.contains(out));
  CHECK(box.bounded_within({{-2.0, 2.0}, {-1.0, 3.0}}));
  CHECK(!box.bounded_within({{-0.5, 2.0}, {-1.0, 3.0}}));

  ConvexRegion ball = ConvexRegion::ball(RealVector::Zero(2), 1.5);
  RealVector edge(2);
  edge << 1.2, 1.2;  // norm ~1.7
  CHECK(ball.contains(in));
  CHECK(!ball.contains(edge));
  CHECK(ball.bounded_within({{-2.0, 2.0}, {-2.0, 2.0}}));
  CHECK(!ball.bounded_within({{-1.0, 1.0}, {-2.0, 2.0}}));

  RealVector a(1);
  a << 1.0;
  ConvexRegion half = ConvexRegion::halfspaces({{a, 0.0}}, 1);  // y <= 0
  CHECK(half.contains(vec1(-3.0)));
  CHECK(!half.contains(vec1(0.5)));
  // halfspace intersections may be unbounded: conservatively not nested
  CHECK(!half.bounded_within({{-100.0, 100.0}}));

  // an infeasible intersection is rejected up front
  RealVector b(1);
  b << -1.0;
  CHECK_THROWS_AS(ConvexRegion::halfspaces({{a, 0.0}, {b, -1.0}}, 1), DomainError);
}

TEST_CASE("restricting to a matched box integrates the region exactly") {
  const GalleryEntry& e = gallery_entry("gauss-C-yt");

  // quadrature box equal to the region: indicator costs nothing
  ConvexRegion box = ConvexRegion::box({{-1.0, 1.0}});
  MarginalMetric M = marginalize(e.metric, box, QuadratureGrid({gauss_legendre(64, -1.0, 1.0)}));
  double got = M.value(vec1(0.0))(0, 0).real();
  double want = 2.0 * kSqrtPi * std::erf(1.0);  // C(0,0) = 2
  CHECK(got == doctest::Approx(want).epsilon(1e-12));
  CHECK(M.worst_tail() == 0.0);  // compact restriction: no tail to escalate

  // a ball in one dimension is an interval
  ConvexRegion ball = ConvexRegion::ball(RealVector::Zero(1), 2.0);
  MarginalMetric Mb = marginalize(e.metric, ball, QuadratureGrid({gauss_legendre(64, -2.0, 2.0)}));
  CHECK(Mb.value(vec1(0.0))(0, 0).real() == doctest::Approx(2.0 * kSqrtPi * std::erf(2.0)).epsilon(1e-12));

  // region wider than the full window changes nothing
  ConvexRegion wide = ConvexRegion::box({{-50.0, 50.0}});
  MarginalMetric Mw = marginalize(e.metric, wide, ygrid());
  MarginalMetric Mn = marginalize(e.metric, std::nullopt, ygrid());
  CHECK(Mw.value(vec1(0.3))(0, 0).real() ==
        doctest::Approx(Mn.value(vec1(0.3))(0, 0).real()).epsilon(1e-14));
}

TEST_CASE("a divergent slice escalates to a truncation error") {
  MetricSpec s = parse_metric_spec(
      "name = \"divergent\"\nrank = 1\ndims = { y = 1, t = 1 }\n[entries]\ng_1_1 = \"exp(y1^2 - t1^2)\"\n");
  MetricFunction g = metric_from_spec(s);
  MarginalMetric M = marginalize(g, std::nullopt, ygrid());
  CHECK_THROWS_AS(M.value(vec1(0.0)), TruncationError);
}

TEST_CASE("a marginal that loses positivity is refused") {
  MetricFunction g;
  g.dim = 2;
  g.rank = 2;
  g.name = "odd";
  g.value = [](const RealVector& x) {
    ComplexMatrix m(2, 2);
    // odd in y: the y-integral of the (0,0) entry cancels to zero
    m << x(0) * std::exp(-x(0) * x(0)), 0.0, 0.0, std::exp(-x(0) * x(0) - x(1) * x(1));
    return m;
  };
  MarginalMetric M = marginalize(g, std::nullopt, ygrid());
  CHECK_THROWS_AS(M.value(vec1(0.0)), NotPositiveDefinite);
}

TEST_CASE("wrong t dimension is a dimension error") {
  MarginalMetric M = marginalize(gallery_entry("scalar-prekopa").metric, std::nullopt, ygrid());
  RealVector t2(2);
  t2 << 0.0, 1.0;
  CHECK_THROWS_AS(M.value(t2), DimensionError);
}

TEST_CASE("calibration refines the grid until the value settles") {
  const GalleryEntry& e = gallery_entry("scalar-prekopa");
  MarginalMetric M = calibrated_marginal(e.metric, std::nullopt, ygrid(8), vec1(0.0), 1e-11, 6);
  CHECK(M.grid().rules()[0].order > 8);
  for (double t : {0.0, 1.0}) {
    CHECK(M.value(vec1(t))(0, 0).real() ==
          doctest::Approx(kSqrtPi * std::exp(-0.75 * t * t)).epsilon(1e-10));
  }
}

TEST_CASE("the corollary builder verifies both preconditions") {
  const GalleryEntry& a2 = gallery_entry("gauss-r2");
  ExprPtr phi = parse_expr("y1^2 + y1*t1 + t1^2", {"y1", "t1"});

  MetricFunction built = corollary_builder(phi, 1, 1, a2.metric);
  CHECK(built.dim == 2);
  CHECK(built.rank == 2);
  RealVector p(2);
  p << 0.4, -0.3;
  ComplexMatrix want = std::exp(-(0.16 - 0.12 + 0.09)) * a2.metric.value(vec1(0.4));
  CHECK((built.value(p) - want).norm() < 1e-12);

  SUBCASE("concave phi is rejected with the sample point") {
    ExprPtr bad = parse_expr("-(y1^2) - t1^2", {"y1", "t1"});
    try {
      corollary_builder(bad, 1, 1, a2.metric);
      FAIL_CHECK("expected a convexity failure");
    } catch (const DomainError& err) {
      CHECK(std::string(err.what()).find("not convex") != std::string::npos);
      CHECK(std::string(err.what()).find("(") != std::string::npos);  // carries a point
    }
  }

  SUBCASE("log convex A is rejected") {
    MetricFunction bad_a = inverse_metric(a2.metric);  // curvature +2
    try {
      corollary_builder(phi, 1, 1, bad_a);
      FAIL_CHECK("expected a curvature failure");
    } catch (const DomainError& err) {
      CHECK(std::string(err.what()).find("not strictly negative") != std::string::npos);
    }
  }

  SUBCASE("unknown variables and shape mismatches are rejected") {
    ExprPtr stray = parse_expr("y1^2 + q1^2", {"y1", "q1"});
    CHECK_THROWS_AS(corollary_builder(stray, 1, 1, a2.metric), DomainError);
    CHECK_THROWS_AS(corollary_builder(phi, 2, 1, a2.metric), DimensionError);
    CHECK_THROWS_AS(corollary_builder(phi, 1, 0, a2.metric), DomainError);
  }
}

TEST_CASE("tail bookkeeping reports the worst ratio seen") {
  const GalleryEntry& e = gallery_entry("scalar-prekopa");

  MarginalMetric wide = marginalize(e.metric, std::nullopt, ygrid());
  wide.value(vec1(0.0));
  CHECK(wide.worst_tail() < 1e-8);

  // a narrow window leaves visible boundary mass but below the error level
  std::vector<std::string> warnings;
  set_warning_handler([&](const std::string& w) { warnings.push_back(w); });
  MarginalMetric narrow = marginalize(e.metric, std::nullopt, QuadratureGrid({gauss_legendre(64, -3.0, 3.0)}));
  narrow.value(vec1(0.0));
  set_warning_handler(nullptr);
  CHECK(narrow.worst_tail() > 1e-8);
  CHECK(narrow.worst_tail() < 1e-4);
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("boundary mass ratio") != std::string::npos);
}
