#include "doctest.h"

#include "conic/gerstewitz.hpp"
#include "conic/rng.hpp"

#include <cmath>

using namespace conic;

namespace {

Vec v2(double a, double b) { return (Vec(2) << a, b).finished(); }

Vec random_vec(CounterRng& rng, Eigen::Index n, double lo, double hi) {
  Vec v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = rng.uniform(lo, hi);
  return v;
}

// inf{t : t e - x in K} by bisection on cone membership.
double phi_bisection(const PolyhedralCone& k, const Vec& e, const Vec& x) {
  double lo = -1.0, hi = 1.0;
  while (k.contains(lo * e - x, false, Tolerance{0.0, 0.0, 0.0}).inside) lo *= 2;
  while (!k.contains(hi * e - x, false, Tolerance{0.0, 0.0, 0.0}).inside) hi *= 2;
  for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (k.contains(mid * e - x, false, Tolerance{0.0, 0.0, 0.0}).inside) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

struct RandomG {
  PolyhedralCone k;
  Vec e;
};

RandomG random_solid(CounterRng& rng, Eigen::Index dim) {
  PointList g;
  for (Eigen::Index i = 0; i < dim; ++i) g.push_back(Vec::Unit(dim, i) + 0.5 * random_vec(rng, dim, -1, 1));
  for (int i = 0; i < rng.index(3); ++i) g.push_back(random_vec(rng, dim, -1, 1));
  auto k = PolyhedralCone::from_generators(dim, g);
  while (!k.solid() || !k.pointed()) {
    g.clear();
    for (Eigen::Index i = 0; i < dim; ++i) g.push_back(Vec::Unit(dim, i) + 0.3 * random_vec(rng, dim, 0, 1));
    k = PolyhedralCone::from_generators(dim, g);
  }
  Vec e = k.interior_direction();
  return {k, e};
}

}  // namespace

TEST_CASE("gerstewitz: examples") {
  const Gerstewitz g(PolyhedralCone::orthant(2), v2(1, 1));
  CHECK(g(v2(0, 0)) == 0.0);
  CHECK(g(v2(3, -1)) == doctest::Approx(3.0));
  CHECK(phi_bisection(g.cone(), g.e(), v2(3, -1)) == doctest::Approx(3.0).epsilon(1e-10));
  CounterRng rng(61);
  for (int i = 0; i < 200; ++i) {
    const Vec x = random_vec(rng, 2, -5, 5);
    const double lam = rng.uniform(-5, 5);
    CHECK(std::abs(g(x + lam * g.e()) - (g(x) + lam)) <= 1e-12);
  }
  CHECK_THROWS_AS(Gerstewitz(PolyhedralCone::orthant(2), v2(1, 0)), Error);
  CHECK_THROWS_AS(Gerstewitz(PolyhedralCone::from_generators(2, {v2(1, 0)}), v2(1, 0)), Error);
}

TEST_CASE("gerstewitz: closed form equals the definitional infimum") {
  CounterRng rng(62);
  for (int trial = 0; trial < 300; ++trial) {
    const Eigen::Index dim = 1 + rng.index(4);
    const RandomG r = random_solid(rng, dim);
    const Gerstewitz g(r.k, r.e);
    const Vec x = random_vec(rng, dim, -3, 3);
    CHECK(std::abs(g(x) - phi_bisection(r.k, r.e, x)) <= 1e-10 * std::max(1.0, std::abs(g(x))));
  }
}

TEST_CASE("gerstewitz: sublinear, monotone and level sets") {
  CounterRng rng(63);
  for (int trial = 0; trial < 1000; ++trial) {
    const Eigen::Index dim = 1 + rng.index(4);
    const RandomG r = random_solid(rng, dim);
    const Gerstewitz g(r.k, r.e);
    const Vec x = random_vec(rng, dim, -3, 3);
    const Vec y = random_vec(rng, dim, -3, 3);
    CHECK(g(x) + g(y) - g(x + y) >= -1e-10);
    const double t = rng.uniform(0, 5);
    CHECK(std::abs(g(t * x) - t * g(x)) <= 1e-10 * std::max(1.0, std::abs(t * g(x))));

    // K-monotone: x + k is above x.
    Vec k = Vec::Zero(dim);
    for (const auto& gen : r.k.generators()) k += rng.uniform() * gen;
    CHECK(g(x) <= g(x + k) + 1e-10);
    // strictly int K-monotone
    const Vec kint = k + rng.uniform(0.1, 1.0) * r.e;
    CHECK(g(x) < g(x + kint));

    // phi(x) <= lambda iff lambda e - x in K; strict version uses int K.
    const double lam = g(x) + rng.uniform(-1, 1);
    CHECK((g(x) <= lam) == r.k.contains(lam * r.e - x, false, Tolerance{0.0, 0.0, 0.0}).inside);
    if (std::abs(g(x) - lam) > 1e-6) {
      CHECK((g(x) < lam) == r.k.contains(lam * r.e - x, true).inside);
    }
  }
}

TEST_CASE("minimize_linear: examples") {
  const UnionSet square(GenSet({v2(0, 0), v2(2, 0), v2(0, 2), v2(2, 2)}));
  const Minimum m = minimize_linear(square, v2(1, 0));
  CHECK(m.value == doctest::Approx(0.0));
  const Minimum two = minimize_linear(UnionSet::finite({v2(1, 2), v2(2, 1)}), v2(1, 1));
  CHECK(two.value == doctest::Approx(3.0));
  CHECK_THROWS_AS(minimize_linear(UnionSet(GenSet({v2(0, 0)}, {v2(1, 0)})), v2(-1, 0)), Error);
  // Ball term.
  const Minimum b = minimize_linear(UnionSet(GenSet::ball(v2(1, 1), 0.5)), v2(3, 4));
  CHECK(b.value == doctest::Approx(7.0 - 2.5));
  CHECK(b.argmin.dot(v2(3, 4)) == doctest::Approx(b.value));
  const auto orth = PolyhedralCone::orthant(2);
  CHECK_FALSE(minimize_linear(square, v2(-1, 1), &orth).warning.empty());
  CHECK(minimize_linear(square, v2(1, 1), &orth).warning.empty());
}

TEST_CASE("minimize_gerstewitz: examples") {
  const Gerstewitz g(PolyhedralCone::orthant(2), v2(1, 1));
  CHECK(minimize_gerstewitz(UnionSet(GenSet::point(v2(0, 0))), g).value == doctest::Approx(0.0));
  const Minimum two = minimize_gerstewitz(UnionSet::finite({v2(1, 2), v2(2, 1)}), g);
  CHECK(two.value == doctest::Approx(2.0));
  // phi(-t, 0) = 0: bounded; phi(-t, -t) = -t: unbounded.
  CHECK(minimize_gerstewitz(UnionSet(GenSet({v2(0, 0)}, {v2(-1, 0)})), g).value == doctest::Approx(0.0));
  CHECK_THROWS_AS(minimize_gerstewitz(UnionSet(GenSet({v2(0, 0)}, {v2(-1, -1)})), g), Error);
}

TEST_CASE("minimize_gerstewitz: agrees with a polytope oracle, including balls") {
  CounterRng rng(64);
  for (int trial = 0; trial < 60; ++trial) {
    const RandomG r = random_solid(rng, 2);
    const Gerstewitz g(r.k, r.e);
    PointList pts;
    for (int i = 0; i < 1 + rng.index(3); ++i) pts.push_back(random_vec(rng, 2, -2, 2));
    const double rad = rng.coin(0.6) ? rng.uniform(0.05, 0.8) : 0.0;
    const NormId nrm = trial % 3 == 0 ? NormId::l2 : (trial % 3 == 1 ? NormId::l1 : NormId::linf);
    const GenSet s(pts, {}, rad, false, nrm);
    const Minimum m = minimize_gerstewitz(UnionSet(s), g);
    // argmin lies in S and attains the value.
    CHECK(membership(UnionSet(s), m.argmin, false).inside);
    CHECK(g(m.argmin) <= m.value + 1e-8);
    // Polytope oracle: core + rB = conv(points + r * ball vertices). Exact for
    // l1/linf; for l2, inscribed and circumscribed 96-gons bracket the value.
    auto expanded = [&](double scale) {
      PointList vs;
      for (const auto& p : pts) {
        if (rad == 0.0) {
          vs.push_back(p);
        } else if (nrm == NormId::l1) {
          for (const Vec& u : {v2(1, 0), v2(-1, 0), v2(0, 1), v2(0, -1)}) vs.push_back(p + rad * u);
        } else if (nrm == NormId::linf) {
          for (const Vec& u : {v2(1, 1), v2(-1, 1), v2(1, -1), v2(-1, -1)}) vs.push_back(p + rad * u);
        } else {
          for (int k = 0; k < 96; ++k) {
            const double th = 2 * M_PI * k / 96;
            vs.push_back(p + scale * rad * v2(std::cos(th), std::sin(th)));
          }
        }
      }
      return minimize_gerstewitz(UnionSet(GenSet(vs)), g).value;
    };
    const double inner = expanded(1.0);
    const double outer = nrm == NormId::l2 ? expanded(1.0 / std::cos(M_PI / 96)) : inner;
    CHECK(m.value <= inner + 1e-8);
    CHECK(m.value >= outer - 1e-8);
  }
}

TEST_CASE("compute_rho: examples") {
  const Gerstewitz g(PolyhedralCone::orthant(2), v2(1, 1));
  CHECK(compute_rho(UnionSet(GenSet::point(v2(2, 2))), g) == doctest::Approx(0.5));
  // phi is the max coordinate: both points give 3.
  CHECK(compute_rho(UnionSet::finite({v2(1, 3), v2(3, 1)}), g) == doctest::Approx(0.75));
  CHECK_THROWS_AS(compute_rho(UnionSet::finite({v2(0, 0), v2(3, 1)}), g), Error);
}
