#pragma once

#include "conic/core.hpp"

#include <cstdint>

namespace conic {

class GenSet;

/// Extreme rays (and +-lineality directions) of {y : a.y >= 0 for all a}, by
/// the double description method. Throws DimensionTooLarge above dim 16.
PointList double_description(const PointList& normals, Eigen::Index dim);

/// Unit-normalizes, drops zero vectors and removes near-duplicates.
PointList canonical_rays(const PointList& rays);

int vector_rank(const PointList& vs, Eigen::Index dim);

struct ConeMembership {
  bool inside = false;
  double margin = 0.0;  // min_i y_i . x over unit dual generators
};

/// Polyhedral cone K = cone(generators) = {x : y.x >= 0 for y in dual_generators}.
/// Both descriptions are unit-normalized; the dual generators generate K+.
class PolyhedralCone {
 public:
  PolyhedralCone() = default;

  static PolyhedralCone from_generators(Eigen::Index dim, const PointList& rays);
  static PolyhedralCone from_halfspaces(Eigen::Index dim, const PointList& normals);
  /// R^n_+ in the given dimension.
  static PolyhedralCone orthant(Eigen::Index dim);
  /// The trivial cone {0}.
  static PolyhedralCone zero(Eigen::Index dim);

  Eigen::Index dim() const { return dim_; }
  const PointList& generators() const { return generators_; }
  const PointList& dual_generators() const { return dual_generators_; }
  bool pointed() const { return pointed_; }
  bool solid() const { return solid_; }
  bool is_zero() const { return generators_.empty(); }

  /// Non-strict: min y_i.x >= -feas_tol. Strict (solid K only): margin must be
  /// positive and at least strict_margin * |x|.
  ConeMembership contains(const Vec& x, bool strict, const Tolerance& tol = default_tolerance()) const;

  /// A unit vector in int K (normalized sum of the generators). NotSolid otherwise.
  Vec interior_direction() const;

  void require_pointed() const;

  /// The cone generated by both this cone's and other's generators.
  PolyhedralCone sum(const PolyhedralCone& other) const;

 private:
  Eigen::Index dim_ = 0;
  PointList generators_;
  PointList dual_generators_;
  bool pointed_ = true;
  bool solid_ = false;
};

/// ((rho e - K) intersected with (-rho e + K)).
struct OrderInterval {
  PolyhedralCone cone;
  Vec e;
  double rho = 0.0;
};

bool order_interval_contains(const OrderInterval& interval, const Vec& x,
                             const Tolerance& tol = default_tolerance());

/// Vertices of the polytope K intersected with (y - K).
PointList order_polytope_vertices(const PolyhedralCone& k, const Vec& y);

struct NormalityEstimate {
  double alpha = 0.0;
  int samples = 0;
  Vec worst_y;
  Vec worst_z;
};

/// Sampled lower bound on the normality constant of a pointed cone: the max of
/// |z|/|y| over vertices z of K cap (y - K), for y sampled on K cap unit sphere.
NormalityEstimate normality_constant_estimate(const PolyhedralCone& k, NormId norm, int samples,
                                              std::uint64_t seed);

/// Bouligand tangent cone of a ball-free convex GenSet at zbar:
/// cone({p - zbar} U rays).
PolyhedralCone tangent_cone(const GenSet& m, const Vec& zbar,
                            const Tolerance& tol = default_tolerance());

}  // namespace conic
