#include "doctest.h"

#include "conic/genset.hpp"
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

// The nonconvex B of the plane example: two small balls.
UnionSet example_b() {
  return UnionSet({GenSet::ball(v2(0, -1), 0.1), GenSet::ball(v2(-2, 1), 0.1)});
}

PolyhedralCone halfline() { return PolyhedralCone::from_generators(2, {v2(1, 0)}); }

GenSet random_genset(CounterRng& rng, Eigen::Index dim, double scale, bool allow_rays, NormId nrm) {
  PointList pts;
  const int np = 1 + static_cast<int>(rng.index(4));
  for (int i = 0; i < np; ++i) pts.push_back(random_vec(rng, dim, -scale, scale));
  PointList rays;
  if (allow_rays && rng.coin(0.4)) rays.push_back(random_vec(rng, dim, -1, 1));
  const double r = rng.coin(0.5) ? rng.uniform(0.0, 0.4 * scale) : 0.0;
  return GenSet(pts, rays, r, false, nrm);
}

bool mutual(const UnionSet& a, const UnionSet& b) {
  return includes(a, b).holds && includes(b, a).holds;
}

}  // namespace

TEST_CASE("membership: examples") {
  CHECK(membership(UnionSet(GenSet::point(v2(0, 0))), v2(0, 0), false).inside);
  const Membership m = membership(example_b(), v2(0, 0), false);
  CHECK_FALSE(m.inside);
  CHECK(m.margin == doctest::Approx(-0.9));
  const GenSet hull({v2(0, -1), v2(-2, 1)}, {v2(1, 0)}, 0.1);
  CHECK(membership(UnionSet(hull), v2(0, 0), false).inside);
  CHECK(membership(UnionSet(hull), v2(0, 0), true).inside);
  CHECK_THROWS_AS(membership(UnionSet(hull), Vec::Zero(3), false), Error);
}

TEST_CASE("membership: strict and open balls") {
  const UnionSet open(GenSet::ball(v2(0, 0), 1.0, true));
  CHECK(membership(open, v2(1, 0), false).inside);
  CHECK_FALSE(membership(open, v2(1, 0), true).inside);
  CHECK(membership(open, v2(0.5, 0), true).inside);
}

TEST_CASE("distance_to_convex: examples") {
  // Closed form on the segment (0,-1) -> (-2,1): |(-2l, -1 + 2l)|^2 = 8l^2 - 4l + 1,
  // minimized at l = 1/4 with value 1/2.
  const GenSet seg({v2(0, -1), v2(-2, 1)});
  double oracle = 1e9;
  for (int i = 0; i <= 100000; ++i) {
    const double l = i / 100000.0;
    oracle = std::min(oracle, std::hypot(-2 * l, -1 + 2 * l));
  }
  CHECK(distance_to_convex(seg, v2(0, 0)) == doctest::Approx(oracle).epsilon(1e-9));
  CHECK(distance_to_convex(seg, v2(0, 0)) == doctest::Approx(std::sqrt(0.5)));
  CHECK(distance_to_convex(GenSet::ball(v2(3, 0), 1.0), v2(0, 0)) == doctest::Approx(2.0));
  CHECK(distance_to_convex(seg, v2(-1, 0)) == doctest::Approx(0.0));
  // The open flag is ignored.
  CHECK(distance_to_convex(GenSet::ball(v2(3, 0), 1.0, true), v2(0, 0)) == doctest::Approx(2.0));
}

TEST_CASE("support_value: examples") {
  CHECK(support_value(UnionSet(GenSet::ball(v2(0, 0), 1.0)), v2(1, 0)) == doctest::Approx(1.0));
  CHECK(std::isinf(support_value(UnionSet(GenSet({v2(0, 0)}, {v2(1, 0)})), v2(1, 0))));
  CHECK(support_value(UnionSet(GenSet({v2(1, 2), v2(2, 1)})), v2(1, 1)) == doctest::Approx(3.0));
  // Dual norm of the ball term: l1 ball pairs with linf.
  CHECK(support_value(UnionSet(GenSet::ball(v2(0, 0), 1.0, false, NormId::l1)), v2(1, 2)) ==
        doctest::Approx(2.0));
}

TEST_CASE("minkowski_sum: examples") {
  const UnionSet c = UnionSet::finite({v2(1, 2), v2(2, 1)});
  const UnionSet b = UnionSet::finite({v2(0, -1), v2(-2, 1)});
  const UnionSet s = minkowski_sum(c, b);
  CHECK(s.size() == 4);
  for (const Vec& want : {v2(1, 1), v2(-1, 3), v2(2, 0), v2(0, 2)}) {
    CHECK(membership(s, want, false).inside);
  }
  const UnionSet zero(GenSet::point(v2(0, 0)));
  CHECK(mutual(minkowski_sum(zero, b), b));

  const GenSet seg({v2(0, 0), v2(1, 1)});
  const GenSet inflated = minkowski_sum(seg, GenSet::ball(v2(0, 0), 0.3));
  CHECK(inflated.radius() == doctest::Approx(0.3));
  CHECK(inflated.points().size() == 2);

  CHECK_THROWS_AS(minkowski_sum(seg, GenSet::point(Vec::Zero(3))), Error);
  PointList many;
  for (int i = 0; i < 101; ++i) many.push_back(v2(i, 0));
  const UnionSet big = UnionSet::finite(many);
  try {
    minkowski_sum(big, big);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ComponentBlowup);
  }
}

TEST_CASE("convexify: examples") {
  const PolyhedralCone k = halfline();
  const Convexified h = convexify(example_b(), &k);
  CHECK_FALSE(h.approximate);
  CHECK(h.set.radius() == doctest::Approx(0.1));
  CHECK(h.set.rays().size() == 1);
  CHECK(membership(UnionSet(h.set), v2(0, 0), false).inside);

  const GenSet single({v2(0, 0), v2(1, 0)}, {}, 0.2);
  const Convexified same = convexify(UnionSet(single));
  CHECK(mutual(UnionSet(same.set), UnionSet(single)));

  const Convexified seg = convexify(UnionSet::finite({v2(0, 0), v2(1, 1)}));
  CHECK(membership(UnionSet(seg.set), v2(0.5, 0.5), false).inside);
  CHECK_FALSE(membership(UnionSet(seg.set), v2(0.5, 0.4), false).inside);

  const UnionSet mixed({GenSet::ball(v2(0, 0), 0.1), GenSet::ball(v2(1, 0), 0.2)});
  CHECK_THROWS_AS(convexify(mixed), Error);
  const Convexified over = convexify(mixed, nullptr, true);
  CHECK(over.approximate);
  CHECK(over.set.radius() == doctest::Approx(0.2));
}

TEST_CASE("recession_cone: examples") {
  CHECK(recession_cone(UnionSet(GenSet({v2(0, 0), v2(1, 0), v2(0, 1)}))).is_zero());
  const auto orth = PolyhedralCone::orthant(2);
  const auto rk = recession_cone(UnionSet(GenSet::point(v2(0, 0))).with_cone(orth));
  for (const auto& g : orth.generators()) CHECK(rk.contains(g, false).inside);
  for (const auto& g : rk.generators()) CHECK(orth.contains(g, false).inside);
  const auto strip = recession_cone(UnionSet(GenSet({v2(0, 0)}, {v2(1, 0)}, 0.5)));
  CHECK(strip.generators().size() == 1);
  CHECK((strip.generators()[0] - v2(1, 0)).norm() <= 1e-12);
}

TEST_CASE("conic_predicates: examples") {
  const auto orth = PolyhedralCone::orthant(2);
  const auto poly = conic_predicates(UnionSet(GenSet({v2(0, 0), v2(3, 1)})), halfline());
  CHECK(poly.k_bounded);
  const auto up = conic_predicates(UnionSet(GenSet({v2(0, 0)}, {v2(0, 1)})), orth);
  CHECK(up.k_bounded);
  CHECK(up.k_convex);
  CHECK(up.k_closed);
  const auto down = conic_predicates(UnionSet(GenSet({v2(0, 0)}, {v2(0, -1)})), orth);
  CHECK_FALSE(down.k_bounded);
  const auto two = conic_predicates(UnionSet::finite({v2(1, 2), v2(2, 1)}), halfline());
  CHECK_FALSE(two.k_convex);
  // Same two points with the orthant fill in: still not convex, (1.5,1.5) is missing.
  CHECK_FALSE(conic_predicates(UnionSet::finite({v2(1, 2), v2(2, 1)}), orth).k_convex);
  CHECK(conic_predicates(UnionSet::finite({v2(1, 2), v2(2, 1)}), PolyhedralCone::from_halfspaces(2, {}))
            .k_convex);
  CHECK(conic_predicates(UnionSet(GenSet::ball(v2(0, 0), 1.0, true)), orth).closure_caveat);
}

TEST_CASE("includes: examples") {
  const PolyhedralCone k = halfline();
  const UnionSet zero(GenSet::point(v2(0, 0)));
  const Inclusion conv = includes(zero, convexify(example_b(), &k).set);
  CHECK(conv.holds);
  const Inclusion plain = includes(zero, example_b().with_cone(k));
  CHECK_FALSE(plain.holds);
  CHECK(plain.exact);
  CHECK(plain.margin == doctest::Approx(-0.9));
  CHECK((plain.witness - v2(0, 0)).norm() <= 1e-15);
  const UnionSet b = example_b();
  CHECK(includes(b, b).holds);
  CHECK_THROWS_AS(includes(zero, GenSet::point(Vec::Zero(3))), Error);
}

TEST_CASE("includes: rays must lie in the recession cone of the target") {
  const GenSet target({v2(0, 0)}, {v2(1, 0), v2(0, 1)});
  CHECK(includes(UnionSet(GenSet({v2(1, 1)}, {v2(1, 2)})), target).holds);
  const Inclusion bad = includes(UnionSet(GenSet({v2(1, 1)}, {v2(-1, 2)})), target);
  CHECK_FALSE(bad.holds);
  CHECK(bad.ray_failure);
}

TEST_CASE("includes: balls inside polytopes") {
  const GenSet square({v2(-1, -1), v2(1, -1), v2(-1, 1), v2(1, 1)});
  for (NormId nrm : {NormId::l2, NormId::l1, NormId::linf}) {
    const GenSet sq({v2(-1, -1), v2(1, -1), v2(-1, 1), v2(1, 1)}, {}, 0.0, false, nrm);
    const Inclusion in = includes(UnionSet(GenSet::ball(v2(0, 0), 0.5, false, nrm)), sq);
    CHECK(in.holds);
    CHECK(in.margin == doctest::Approx(0.5));
    CHECK(includes(UnionSet(GenSet::ball(v2(0, 0), 1.0, false, nrm)), sq).holds);
    CHECK_FALSE(includes(UnionSet(GenSet::ball(v2(0, 0), 1.01, false, nrm)), sq).holds);
  }
  const GenSet seg({v2(-0.5, 0), v2(0.5, 0)}, {}, 0.5);
  CHECK(includes(UnionSet(seg), square).holds);
  CHECK_FALSE(includes(UnionSet(seg.translated(v2(0.1, 0))), square).holds);
  // A flat target has no depth.
  const GenSet flat({v2(-1, 0), v2(1, 0)});
  CHECK_FALSE(includes(UnionSet(GenSet::ball(v2(0, 0), 0.1)), flat).holds);
  // Radius beyond the target's own ball.
  const GenSet fat({v2(-1, 0), v2(1, 0)}, {}, 0.2);
  CHECK(includes(UnionSet(GenSet::ball(v2(0.5, 0.2), 0.3)), GenSet({v2(-1, 0), v2(1, 0)}, {v2(0, 1)}, 0.2))
            .holds);
  CHECK_FALSE(includes(UnionSet(GenSet::ball(v2(0.5, 0), 0.3)), fat).holds);
}

TEST_CASE("includes: strict inclusion and interior shifts") {
  const GenSet t = GenSet::ball(v2(0, 0), 1.0, true);
  CHECK(includes(UnionSet(GenSet::point(v2(0.5, 0))), t, {true, {}}).holds);
  CHECK_FALSE(includes(UnionSet(GenSet::point(v2(1, 0))), t, {true, {}}).holds);
  // Non-strict ignores the open flag.
  CHECK(includes(UnionSet(GenSet::point(v2(1, 0))), t).holds);

  const auto orth = PolyhedralCone::orthant(2);
  const GenSet tk = GenSet::point(v2(0, 0)).with_cone(orth);
  InclusionOptions interior;
  interior.interior_shift = orth.interior_direction();
  CHECK_FALSE(includes(UnionSet(GenSet::point(v2(1, 0))), tk, interior).holds);
  CHECK(includes(UnionSet(GenSet::point(v2(1, 0.5))), tk, interior).holds);
  CHECK(includes(UnionSet(GenSet::point(v2(1, 0))), tk).holds);
}

TEST_CASE("star_difference_contains: examples") {
  const UnionSet a(GenSet::ball(v2(0, 0), 2.0));
  const UnionSet b(GenSet::ball(v2(0, 0), 1.0));
  CHECK(star_difference_contains(a, b, v2(0, 0)));
  CHECK(star_difference_contains(a, b, v2(0.6, 0.8)));
  CHECK_FALSE(star_difference_contains(a, b, v2(0.9, 1.2)));
  // Triangle inequality oracle on a sweep.
  CounterRng rng(31);
  for (int i = 0; i < 100; ++i) {
    const Vec x = random_vec(rng, 2, -1.5, 1.5);
    if (std::abs(x.norm() - 1.0) < 1e-6) continue;
    CHECK(star_difference_contains(a, b, x) == (x.norm() <= 1.0));
  }
  const UnionSet c(GenSet({v2(0, 0), v2(2, 1), v2(1, 3)}));
  CHECK(star_difference_contains(c, c, v2(0, 0)));
}

TEST_CASE("sets: Minkowski identities") {
  CounterRng rng(41);
  for (int trial = 0; trial < 60; ++trial) {
    const Eigen::Index dim = 2 + static_cast<Eigen::Index>(rng.index(2));
    const UnionSet a(random_genset(rng, dim, 2.0, true, NormId::l2));
    const UnionSet b(random_genset(rng, dim, 2.0, true, NormId::l2));
    const UnionSet c(random_genset(rng, dim, 2.0, false, NormId::l2));
    const UnionSet zero(GenSet::point(Vec::Zero(dim)));
    CHECK(mutual(minkowski_sum(a, zero), a));
    CHECK(mutual(minkowski_sum(minkowski_sum(a, b), c), minkowski_sum(a, minkowski_sum(b, c))));
    CHECK(mutual(minkowski_sum(a, b), minkowski_sum(b, a)));
  }
}

TEST_CASE("sets: non-strict inclusion ignores open flags on the right") {
  CounterRng rng(42);
  for (int trial = 0; trial < 100; ++trial) {
    const UnionSet a(random_genset(rng, 2, 1.0, false, NormId::l2));
    GenSet t = random_genset(rng, 2, 1.0, true, NormId::l2);
    t = t.with_radius(t.radius() + 0.5, false);
    const GenSet t_open = t.with_radius(t.radius(), true);
    const Inclusion c = includes(a, t);
    const Inclusion o = includes(a, t_open);
    CHECK(c.holds == o.holds);
    CHECK(c.margin == o.margin);
  }
}

TEST_CASE("sets: inclusion is transitive") {
  CounterRng rng(43);
  int chains = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const GenSet c = random_genset(rng, 2, 1.0, true, NormId::l2).with_radius(rng.uniform(0.3, 1.0), false);
    // B a shrunken random subset candidate, A a point set near B.
    const GenSet b = random_genset(rng, 2, 0.8, false, NormId::l2);
    const UnionSet a = UnionSet::finite({random_vec(rng, 2, -0.8, 0.8), random_vec(rng, 2, -0.8, 0.8)});
    const Inclusion ab = includes(a, b);
    const Inclusion bc = includes(UnionSet(b), c);
    if (ab.holds && bc.holds) {
      ++chains;
      CHECK(includes(a, c).margin >= -2 * default_tolerance().feas_tol);
    }
  }
  // Guaranteed chains: A in B constructed, B in C constructed.
  for (int trial = 0; trial < 100; ++trial) {
    const GenSet b = random_genset(rng, 2, 1.0, false, NormId::l2);
    const GenSet c = minkowski_sum(b, GenSet::ball(Vec::Zero(2), rng.uniform(0.0, 0.5)));
    PointList pts;
    for (int i = 0; i < 3; ++i) {
      const double l = rng.uniform();
      pts.push_back((1 - l) * b.points().front() + l * b.points().back());
    }
    const UnionSet a = UnionSet::finite(pts);
    REQUIRE(includes(a, b).holds);
    REQUIRE(includes(UnionSet(b), c).holds);
    CHECK(includes(a, c).holds);
    ++chains;
  }
  CHECK(chains >= 100);
}

TEST_CASE("sets: includes of a singleton matches membership") {
  CounterRng rng(44);
  for (int trial = 0; trial < 300; ++trial) {
    const GenSet s = random_genset(rng, 2, 1.5, true, NormId::l2);
    const Vec x = random_vec(rng, 2, -2, 2);
    const Membership m = membership(UnionSet(s), x, false);
    const Inclusion i = includes(UnionSet(GenSet::point(x)), s);
    CHECK(m.inside == i.holds);
    CHECK(m.margin == doctest::Approx(i.margin).epsilon(1e-12));
    const UnionSet u({s, random_genset(rng, 2, 1.5, true, NormId::l2)});
    CHECK(membership(u, x, false).inside == includes(UnionSet(GenSet::point(x)), u).holds);
  }
}

TEST_CASE("sets: includes agrees with dense grid membership") {
  // Grid step 1e-2 over A: no grid point can decide inclusion closer to the
  // boundary than the half-diagonal of a cell, so those instances are skipped.
  CounterRng rng(45);
  const double step = 1e-2;
  const double resolution = step * std::sqrt(2.0);
  int decided = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const NormId nrm = trial % 3 == 0 ? NormId::l2 : (trial % 3 == 1 ? NormId::l1 : NormId::linf);
    const GenSet a = random_genset(rng, 2, 0.6, false, nrm);
    GenSet t = random_genset(rng, 2, 0.8, false, nrm);
    t = t.with_radius(rng.uniform(0.0, 0.5), false);
    const Inclusion inc = includes(UnionSet(a), t);
    if (std::abs(inc.margin) < resolution) continue;
    // Bounding box of A.
    Vec lo = a.points().front(), hi = lo;
    for (const auto& p : a.points()) {
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }
    lo.array() -= a.radius();
    hi.array() += a.radius();
    bool all_in = true;
    for (const auto& p : a.points()) all_in = all_in && membership(UnionSet(t), p, false).inside;
    for (double x = lo[0]; x <= hi[0] && all_in; x += step) {
      for (double y = lo[1]; y <= hi[1]; y += step) {
        const Vec g = v2(x, y);
        if (!membership(UnionSet(a), g, false).inside) continue;
        if (!membership(UnionSet(t), g, false).inside) {
          all_in = false;
          break;
        }
      }
    }
    CHECK(inc.holds == all_in);
    ++decided;
  }
  CHECK(decided >= 20);
}
