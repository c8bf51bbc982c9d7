#pragma once

#include "conic/rng.hpp"
#include "conic/setmaps.hpp"

#include <optional>

namespace conic {

struct SharpInstance {
  BoxMap f;
  GenSet m;  // ball-free constraint set
  Vec zbar;
  double mu = 1.0;
  Vec e;
  PolyhedralCone k;
  std::optional<double> radius;  // local version: only z with |z - zbar| <= radius
};

struct StabilityInstance {
  BoxMap f, h;
  GenSet m;
  Vec zbar, z_eps;
  double mu = 1.0, ell = 0.5, eps = 0.1;
  Vec e;
  PolyhedralCone k;
};

/// Points of M: z and its vertices, a barycentric grid (<= grid_max points),
/// seeded random convex/conic combinations.
PointList sample_set(const GenSet& m, const Vec& zbar, int samples, std::uint64_t seed, int grid_max = 10000);

/// F(zbar) not in F(z) - mu |z - zbar| e + int K for every sampled z in M.
Verdict sharp_weak_min_check(const SharpInstance& inst, const SampleOptions& opts = {},
                             const Tolerance& tol = default_tolerance());

/// Single direction: mu |u| e - T u not in int K. slack = minus the cone margin.
bool tangent_condition_holds(const SharpInstance& inst, const LinMap& t, const Vec& u, double* slack = nullptr,
                             const Tolerance& tol = default_tolerance());

/// T u not in mu |u| e - int K for sampled u in the tangent cone of M at zbar.
/// Hypotheses: sharp weak minimum and T passing the upper subdifferential test.
Verdict necessary_condition_check(const SharpInstance& inst, const LinMap& t, const SampleOptions& opts = {},
                                  const SubdiffOptions& sopts = {},
                                  const Tolerance& tol = default_tolerance());

/// |z_eps - zbar| <= eps / (mu - L) given (i) sharpness of F, (ii) the H
/// growth bound, (iii) eps-minimality of z_eps for F + H, all on samples of M.
Verdict stability_check(const StabilityInstance& inst, const SampleOptions& opts = {},
                        const Tolerance& tol = default_tolerance());

/// Random instance satisfying (i)-(iii) by construction (z_eps on the
/// boundary of (iii) along a random direction).
StabilityInstance random_stability_instance(CounterRng& rng, Eigen::Index dim, Eigen::Index range);

}  // namespace conic
