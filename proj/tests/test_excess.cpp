#include "doctest.h"

#include "conic/excess.hpp"
#include "conic/rng.hpp"

#include <cmath>

using namespace conic;

namespace {

Vec v1(double a) { return (Vec(1) << a).finished(); }
Vec v2(double a, double b) { return (Vec(2) << a, b).finished(); }

Vec random_vec(CounterRng& rng, Eigen::Index n, double lo, double hi) {
  Vec v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = rng.uniform(lo, hi);
  return v;
}

GenSet random_polytope(CounterRng& rng, Eigen::Index dim, double scale, double max_radius = 0.0) {
  PointList pts;
  const int np = 1 + rng.index(4);
  for (int i = 0; i < np; ++i) pts.push_back(random_vec(rng, dim, -scale, scale));
  const double r = max_radius > 0 && rng.coin(0.5) ? rng.uniform(0.0, max_radius) : 0.0;
  return GenSet(pts, {}, r);
}

UnionSet example_b() {
  return UnionSet({GenSet::ball(v2(0, -1), 0.1), GenSet::ball(v2(-2, 1), 0.1)});
}

constexpr double kFeas = 1e-9;

}  // namespace

TEST_CASE("excess: examples") {
  const UnionSet b = example_b();
  CHECK(excess(b, b).value == doctest::Approx(0.0));
  const ExcessReport e0 = excess(UnionSet(GenSet::point(v2(0, 0))), b);
  CHECK(e0.value == doctest::Approx(0.9));
  CHECK(e0.exact());
  const ExcessReport seg = excess(UnionSet(GenSet({v2(0, 0), v2(1, 0)})), UnionSet(GenSet::point(v2(0, 0))));
  CHECK(seg.value == doctest::Approx(1.0));
  CHECK((seg.attained_at - v2(1, 0)).norm() <= 1e-12);
  CHECK(seg.method == ExcessMethod::vertex_max);
  CHECK_THROWS_AS(excess(b, UnionSet(GenSet::point(v1(0)))), Error);
}

TEST_CASE("excess: infinite when a ray escapes") {
  const UnionSet a(GenSet({v2(0, 0)}, {v2(1, 0)}));
  CHECK(std::isinf(excess(a, UnionSet(GenSet::point(v2(0, 0)))).value));
  CHECK(excess(a, UnionSet(GenSet({v2(0, 1)}, {v2(1, 0)}))).value == doctest::Approx(1.0));
  // Union target, ray absorbed by no component.
  const UnionSet u({GenSet({v2(0, 0)}, {v2(0, 1)}), GenSet::point(v2(5, 5))});
  CHECK(std::isinf(excess(UnionSet(GenSet({v2(0, 0), v2(1, 0)}, {v2(1, 0)})), u).value));
}

TEST_CASE("excess: ball-inflated left side") {
  // Ball inside a square: e = max(0, r - depth).
  const GenSet square({v2(-1, -1), v2(1, -1), v2(-1, 1), v2(1, 1)});
  CHECK(excess(UnionSet(GenSet::ball(v2(0, 0), 0.5)), UnionSet(square)).value == doctest::Approx(0.0));
  CHECK(excess(UnionSet(GenSet::ball(v2(0, 0), 1.5)), UnionSet(square)).value == doctest::Approx(0.5));
  CHECK(excess(UnionSet(GenSet::ball(v2(0.5, 0), 1.0)), UnionSet(square)).value == doctest::Approx(0.5));
  CHECK(excess(UnionSet(GenSet::ball(v2(3, 0), 1.0)), UnionSet(square)).value == doctest::Approx(3.0));
}

TEST_CASE("conic_excess: examples") {
  const auto orth = PolyhedralCone::orthant(2);
  const ConicExcess c = conic_excess(UnionSet::finite({v2(1, 2), v2(2, 1)}), UnionSet(GenSet::point(v2(0, 2))),
                                     orth, true);
  CHECK(c.report.value == doctest::Approx(1.0));
  CHECK((c.report.attained_at - v2(2, 1)).norm() <= 1e-12);
  CHECK(c.chain_consistent);
  CHECK(conic_excess(UnionSet(GenSet::point(v2(0, 0))), UnionSet(GenSet::point(v2(0, 0))), orth).report.value ==
        doctest::Approx(0.0));
  // A K-bounded polytope has finite excess to anything plus K.
  const UnionSet a(GenSet({v2(-3, 4), v2(2, 2)}, {v2(1, 1)}));
  const ConicExcess f = conic_excess(a, example_b(), orth, true);
  CHECK(std::isfinite(f.report.value));
  CHECK(f.chain_consistent);
}

TEST_CASE("conic_excess: the identity chain on random instances") {
  CounterRng rng(51);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index dim = 2 + rng.index(2);
    PointList kg;
    for (int i = 0; i < 1 + rng.index(3); ++i) kg.push_back(random_vec(rng, dim, 0, 1));
    const auto k = PolyhedralCone::from_generators(dim, kg);
    PointList arays;
    if (rng.coin(0.4)) arays.push_back(k.generators().front());
    const GenSet ag = random_polytope(rng, dim, 2.0);
    const UnionSet a(GenSet(ag.points(), arays, 0.0));
    GenSet b = random_polytope(rng, dim, 2.0, 0.5);
    if (b.radius() > 0 && rng.coin(0.5)) b = b.with_radius(b.radius(), true);
    const ConicExcess c = conic_excess(a, UnionSet(b), k, true);
    CHECK(c.chain_consistent);
    CHECK(std::isfinite(c.report.value));
  }
}

TEST_CASE("hausdorff: examples") {
  const UnionSet b = example_b();
  CHECK(hausdorff(b, b).value == doctest::Approx(0.0));
  CHECK(hausdorff(UnionSet(GenSet::point(v2(0, 0))), UnionSet(GenSet::point(v2(3, 4)))).value ==
        doctest::Approx(5.0));
  CHECK(hausdorff(UnionSet(GenSet({v1(0), v1(1)})), UnionSet(GenSet({v1(0), v1(2)}))).value ==
        doctest::Approx(1.0));
}

TEST_CASE("excess: rel1 equivalence with inflated inclusion") {
  CounterRng rng(52);
  const double eps = 10 * kFeas;
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const Eigen::Index dim = 2 + rng.index(2);
    const UnionSet a(random_polytope(rng, dim, 2.0, 0.5));
    const GenSet b = random_polytope(rng, dim, 2.0, 0.5);
    const double v = excess(a, UnionSet(b)).value;
    if (!(b.radius() + v > eps) || std::isinf(v) || v <= 0.0) continue;
    CHECK(includes(a, b.with_radius(b.radius() + v + eps, false)).holds);
    CHECK_FALSE(includes(a, b.with_radius(b.radius() + v - eps, false)).holds);
    ++checked;
  }
  CHECK(checked > 150);
}

TEST_CASE("excess: insensitive to open flags") {
  CounterRng rng(53);
  for (int trial = 0; trial < 100; ++trial) {
    const GenSet a = random_polytope(rng, 2, 2.0, 0.5);
    const GenSet b = random_polytope(rng, 2, 2.0, 0.5);
    const double closed = excess(UnionSet(a), UnionSet(b)).value;
    const GenSet ao = a.radius() > 0 ? a.with_radius(a.radius(), true) : a;
    const GenSet bo = b.radius() > 0 ? b.with_radius(b.radius(), true) : b;
    CHECK(excess(UnionSet(ao), UnionSet(bo)).value == closed);
  }
}

TEST_CASE("excess: zero iff included in the closure") {
  CounterRng rng(54);
  int zeros = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const UnionSet a(random_polytope(rng, 2, 1.0, 0.3));
    GenSet b = random_polytope(rng, 2, 1.5, 1.0);
    b = b.with_radius(b.radius() + 0.2, true);
    const double v = excess(a, UnionSet(b)).value;
    const bool inc = includes(a, b.closure()).holds;
    if (v <= kFeas) ++zeros;
    CHECK((v <= kFeas) == inc);
  }
  CHECK(zeros > 10);
}

TEST_CASE("hausdorff: triangle inequality") {
  CounterRng rng(55);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index dim = 1 + rng.index(3);
    const UnionSet a(random_polytope(rng, dim, 2.0, 0.5));
    const UnionSet b(random_polytope(rng, dim, 2.0, 0.5));
    const UnionSet c(random_polytope(rng, dim, 2.0, 0.5));
    const double ab = hausdorff(a, b).value, bc = hausdorff(b, c).value, ac = hausdorff(a, c).value;
    CHECK(ac <= ab + bc + 2 * kFeas);
  }
}

TEST_CASE("excess: definition scan brackets the true value on union targets") {
  CounterRng rng(56);
  for (int trial = 0; trial < 20; ++trial) {
    const GenSet a(PointList{random_vec(rng, 2, -1, 1), random_vec(rng, 2, -1, 1), random_vec(rng, 2, -1, 1)});
    const UnionSet b({GenSet::ball(random_vec(rng, 2, -1, 1), 0.3), GenSet::ball(random_vec(rng, 2, -1, 1), 0.3)});
    const ExcessReport r = excess(UnionSet(a), b);
    CHECK(r.method == ExcessMethod::definition_scan);
    // Dense oracle over barycentric coordinates of the triangle.
    double dense = 0.0;
    const int n = 300;
    for (int i = 0; i <= n; ++i) {
      for (int j = 0; i + j <= n; ++j) {
        const double l0 = double(i) / n, l1 = double(j) / n;
        const Vec x = l0 * a.points()[0] + l1 * a.points()[a.points().size() > 1 ? 1 : 0] +
                      (1 - l0 - l1) * a.points().back();
        dense = std::max(dense, distance_to_union(b, x));
      }
    }
    CHECK(r.value <= dense + 1e-9);
    CHECK(r.upper >= dense - 1e-2);
    CHECK(r.value >= dense - 2e-2);
  }
}

TEST_CASE("excess_invariance_check: examples") {
  const auto orth = PolyhedralCone::orthant(2);
  CounterRng rng(57);
  for (int trial = 0; trial < 50; ++trial) {
    const UnionSet a(random_polytope(rng, 2, 2.0));
    const UnionSet b(random_polytope(rng, 2, 2.0));
    const UnionSet c(random_polytope(rng, 2, 2.0));
    for (auto variant : {InvarianceVariant::open_ball, InvarianceVariant::closed_ball}) {
      const Verdict v = excess_invariance_check(a, b, c, orth, variant);
      CHECK(v.hypotheses_hold());
      CHECK(v.conclusion.margin >= -2e-9);
      CHECK(v.consistent);
    }
  }
  const UnionSet zero(GenSet::point(v2(0, 0)));
  const Verdict trivial = excess_invariance_check(UnionSet(GenSet::point(v2(3, -2))), example_b(), zero,
                                                  PolyhedralCone::from_generators(2, {v2(1, 0)}),
                                                  InvarianceVariant::open_ball);
  CHECK(trivial.conclusion.holds);

  // Two points that are not K-convex: no claim is made.
  const Verdict nc = excess_invariance_check(UnionSet(GenSet::point(v2(0, 0))), UnionSet::finite({v2(1, 2), v2(2, 1)}),
                                             UnionSet(GenSet({v2(0, 0), v2(1, -1)})),
                                             PolyhedralCone::from_generators(2, {v2(1, 0)}),
                                             InvarianceVariant::open_ball);
  CHECK_FALSE(nc.hypotheses_hold());
  CHECK(nc.consistent);
}

TEST_CASE("excess: semigroup property in a solid cone") {
  CounterRng rng(58);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index dim = 2 + rng.index(2);
    PointList kg;
    for (Eigen::Index i = 0; i < dim; ++i) kg.push_back(Vec::Unit(dim, i) + 0.3 * random_vec(rng, dim, 0, 1));
    const auto k = PolyhedralCone::from_generators(dim, kg);
    REQUIRE(k.solid());
    const UnionSet a(random_polytope(rng, dim, 2.0, 0.4));
    const UnionSet b(random_polytope(rng, dim, 2.0, 0.4));
    const UnionSet c(random_polytope(rng, dim, 2.0, 0.4));
    // int K is replaced by K: the excess only sees closures.
    const double lhs = excess(a.with_cone(k), b.with_cone(k)).value;
    const double rhs = excess(minkowski_sum(a, c).with_cone(k), minkowski_sum(b, c).with_cone(k)).value;
    CHECK(std::abs(lhs - rhs) <= 2 * kFeas);
  }
}
