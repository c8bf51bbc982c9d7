#include "doctest.h"

#include "conic/rng.hpp"
#include "conic/setopt.hpp"

#include <cmath>

using namespace conic;

namespace {

Vec v1(double a) { return (Vec(1) << a).finished(); }

Poly lin1(double a, double c) { return Poly::affine(v1(a), c); }
BoxMap map1(const Poly& lo, const Poly& hi) { return BoxMap({lo}, {hi}, v1(-2), v1(2)); }
LinMap scalar(double t) { return LinMap{Mat::Constant(1, 1, t)}; }
PolyhedralCone rplus(Eigen::Index n = 1) { return PolyhedralCone::orthant(n); }
GenSet interval(double a, double b) { return GenSet({v1(a), v1(b)}); }

const HypothesisCheck* find_hyp(const Verdict& v, const std::string& name) {
  for (const auto& h : v.hypotheses)
    if (h.name == name) return &h;
  return nullptr;
}

SharpInstance lin_sharp(double mu = 1.0) {
  return SharpInstance{map1(lin1(1, 0), lin1(1, 1)), interval(0, 1), v1(0), mu, v1(1), rplus(), std::nullopt};
}

// mu = 1, L = 1/2, F = [z, z] on [0, 1], H = [-z/2, -z/2], z_eps = eps / (1 - L).
StabilityInstance tight_instance(double eps) {
  StabilityInstance s;
  s.f = map1(lin1(1, 0), lin1(1, 0));
  s.h = map1(lin1(-0.5, 0), lin1(-0.5, 0));
  s.m = interval(0, 1);
  s.zbar = v1(0);
  s.mu = 1.0;
  s.ell = 0.5;
  s.eps = eps;
  s.z_eps = v1(eps / (1 - 0.5));
  s.e = v1(1);
  s.k = rplus();
  return s;
}

}  // namespace

TEST_CASE("sample_set covers the vertices and the base point") {
  const GenSet tri({Vec::Zero(2), Vec::Unit(2, 0), Vec::Unit(2, 1)});
  const PointList pts = sample_set(tri, Vec::Zero(2), 200, 3);
  CHECK(pts.size() >= 200);
  CHECK(pts.size() <= 10000 + 200);
  for (const auto& p : pts) {
    CHECK(p.minCoeff() >= -1e-12);
    CHECK(p.sum() <= 1 + 1e-12);
  }
  CHECK(sample_set(tri, Vec::Zero(2), 200, 3) == pts);
}

TEST_CASE("sharp weak minimum examples") {
  SUBCASE("[z, z + 1] on [0, 1] at 0") {
    const Verdict v = sharp_weak_min_check(lin_sharp());
    CHECK(v.hypotheses_hold());
    CHECK(v.conclusion.holds);
    CHECK(v.conclusion.margin >= 0.0);
  }
  SUBCASE("constant F is not sharp") {
    // F(zbar) = [1, 3] lies in [1, 3] - mu d + int K whenever d > 0.
    SharpInstance s = lin_sharp();
    s.f = map1(Poly::constant(1, 1), Poly::constant(1, 3));
    const Verdict v = sharp_weak_min_check(s);
    CHECK(v.hypotheses_hold());
    CHECK_FALSE(v.conclusion.holds);
    REQUIRE(v.conclusion.witness.size() == 1);
    CHECK(v.conclusion.witness[0] > 0);
  }
  SUBCASE("only zbar sampled") {
    SharpInstance s = lin_sharp();
    s.m = GenSet::point(v1(0));
    const Verdict v = sharp_weak_min_check(s);
    CHECK(v.conclusion.holds);
  }
  SUBCASE("mu too large") {
    const Verdict v = sharp_weak_min_check(lin_sharp(1.5));
    CHECK_FALSE(v.conclusion.holds);
  }
  SUBCASE("local radius") {
    // [z - z^2, ...] is sharp with mu = 1/2 near 0 only.
    SharpInstance s = lin_sharp(0.5);
    s.f = map1(lin1(1, 0) + Poly::monomial(1, 0, 2, -1), lin1(1, 1) + Poly::monomial(1, 0, 2, -1));
    CHECK_FALSE(sharp_weak_min_check(s).conclusion.holds);
    s.radius = 0.4;
    CHECK(sharp_weak_min_check(s).conclusion.holds);
  }
  SUBCASE("e on the boundary of K is flagged") {
    SharpInstance s;
    s.f = BoxMap({lin1(1, 0), lin1(0, 0)}, {lin1(1, 1), lin1(0, 1)}, v1(-2), v1(2));
    s.m = interval(0, 1);
    s.zbar = v1(0);
    s.e = Vec::Unit(2, 0);
    s.k = rplus(2);
    const Verdict v = sharp_weak_min_check(s);
    CHECK(v.hypotheses_hold());
    bool warned = false;
    for (const auto& n : v.notes) warned = warned || n.find("warning") != std::string::npos;
    CHECK(warned);
  }
}

TEST_CASE("sharpness is monotone in mu") {
  CounterRng rng(31);
  int passed = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const double a = rng.uniform(-0.5, 2), b = rng.uniform(-1, 1), w = rng.uniform(0, 1);
    SharpInstance s = lin_sharp(rng.uniform(0.1, 2.5));
    s.f = map1(lin1(a, 0) + Poly::monomial(1, 0, 2, b), lin1(a, w) + Poly::monomial(1, 0, 2, b));
    const bool hi = sharp_weak_min_check(s).conclusion.holds;
    s.mu *= rng.uniform(0.1, 1.0);
    const bool lo = sharp_weak_min_check(s).conclusion.holds;
    if (hi) {
      ++passed;
      CHECK(lo);
    }
  }
  CHECK(passed >= 10);
}

TEST_CASE("necessary condition examples") {
  SUBCASE("T = 1 is an upper subgradient and the condition holds") {
    const Verdict v = necessary_condition_check(lin_sharp(), scalar(1));
    CHECK(find_hyp(v, "sharp_weak_min")->holds);
    CHECK(find_hyp(v, "T_upper_subgradient")->holds);
    CHECK(v.conclusion.holds);
    CHECK(v.consistent);
  }
  SUBCASE("T = 2 fails the gate, the condition itself holds") {
    const Verdict v = necessary_condition_check(lin_sharp(), scalar(2));
    CHECK_FALSE(find_hyp(v, "T_upper_subgradient")->holds);
    CHECK(v.conclusion.holds);
  }
  SUBCASE("u = 0") {
    double slack = -1;
    CHECK(tangent_condition_holds(lin_sharp(), scalar(1), v1(0), &slack));
    CHECK(slack == doctest::Approx(0.0));
  }
  SUBCASE("T = 0.5 violates the condition") {
    CHECK_FALSE(tangent_condition_holds(lin_sharp(), scalar(0.5), v1(1)));
  }
}

TEST_CASE("tangent condition is positively homogeneous in u") {
  CounterRng rng(8);
  for (int trial = 0; trial < 500; ++trial) {
    const Eigen::Index m = 1 + static_cast<Eigen::Index>(rng.index(3));
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng.index(3));
    SharpInstance s;
    s.k = PolyhedralCone::orthant(n);
    s.e = Vec(n);
    for (Eigen::Index i = 0; i < n; ++i) s.e[i] = rng.uniform(0.1, 1);
    s.e.normalize();
    s.mu = rng.uniform(0.1, 2);
    Mat t(n, m);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < m; ++j) t(i, j) = rng.uniform(-2, 2);
    Vec u(m);
    for (Eigen::Index j = 0; j < m; ++j) u[j] = rng.uniform(-1, 1);
    const double scale = std::exp(rng.uniform(-3, 3));
    double s1 = 0, s2 = 0;
    const bool h1 = tangent_condition_holds(s, LinMap{t}, u, &s1);
    const bool h2 = tangent_condition_holds(s, LinMap{t}, scale * u, &s2);
    CHECK(h1 == h2);
    CHECK(s2 == doctest::Approx(scale * s1).epsilon(1e-9).scale(1e-12));
  }
}

TEST_CASE("stability bound examples") {
  SUBCASE("tight 1-D instance") {
    const Verdict v = stability_check(tight_instance(0.1));
    CHECK(v.hypotheses_hold());
    CHECK(v.conclusion.holds);
    CHECK(std::abs(v.conclusion.margin) <= 1e-9);
  }
  SUBCASE("z_eps = zbar") {
    StabilityInstance s = tight_instance(0.1);
    s.z_eps = v1(0);
    const Verdict v = stability_check(s);
    CHECK(v.hypotheses_hold());
    CHECK(v.conclusion.margin == doctest::Approx(0.2));
  }
  SUBCASE("huge eps") {
    StabilityInstance s = tight_instance(5.0);
    s.z_eps = v1(1);
    const Verdict v = stability_check(s);
    CHECK(v.hypotheses_hold());
    CHECK(v.conclusion.holds);
  }
  SUBCASE("z_eps beyond the bound breaks (iii)") {
    StabilityInstance s = tight_instance(0.1);
    s.z_eps = v1(0.3);
    const Verdict v = stability_check(s);
    CHECK_FALSE(find_hyp(v, "z_eps_minimal")->holds);
    CHECK_FALSE(v.conclusion.holds);
    CHECK(v.consistent);
  }
  SUBCASE("L >= mu") {
    StabilityInstance s = tight_instance(0.1);
    s.ell = 1.0;
    CHECK_FALSE(find_hyp(stability_check(s), "L_in_0_mu")->holds);
  }
}

TEST_CASE("stability sweep on constructed instances") {
  int violations = 0, held = 0;
  for (int trial = 0; trial < 200; ++trial) {
    CounterRng rng = CounterRng::derive(2024, static_cast<std::uint64_t>(trial));
    const Eigen::Index m = 1 + trial % 2, n = 1 + (trial / 2) % 2;
    const StabilityInstance s = random_stability_instance(rng, m, n);
    SampleOptions so;
    so.samples = 48;
    so.seed = static_cast<std::uint64_t>(trial);
    const Verdict v = stability_check(s, so);
    if (v.hypotheses_hold()) ++held;
    if (!v.consistent) ++violations;
  }
  CHECK(violations == 0);
  CHECK(held == 200);
}
