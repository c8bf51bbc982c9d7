#pragma once

#include "conic/cone.hpp"
#include "conic/projection.hpp"

#include <optional>

namespace conic {

/// conv(points) + cone(rays) + radius * (unit ball of `norm`); the ball is open
/// iff open_ball. The conv+cone part is called the core.
class GenSet {
 public:
  GenSet() = default;
  GenSet(PointList points, PointList rays = {}, double radius = 0.0, bool open_ball = false,
         NormId norm = NormId::l2);

  static GenSet point(const Vec& x, NormId norm = NormId::l2);
  static GenSet ball(const Vec& center, double radius, bool open = false, NormId norm = NormId::l2);

  Eigen::Index dim() const { return points_.front().size(); }
  const PointList& points() const { return points_; }
  const PointList& rays() const { return rays_; }
  double radius() const { return radius_; }
  bool open_ball() const { return open_ball_; }
  NormId norm() const { return norm_; }

  bool bounded() const { return rays_.empty(); }
  bool is_singleton() const { return points_.size() == 1 && rays_.empty() && radius_ == 0.0; }

  GenSet translated(const Vec& v) const;
  GenSet with_rays(const PointList& extra) const;
  GenSet with_cone(const PolyhedralCone& k) const { return with_rays(k.generators()); }
  GenSet with_radius(double r, bool open) const;
  GenSet closure() const { return with_radius(radius_, false); }

  /// Nearest point of the core (radius ignored).
  Projection project_core(const Vec& x, const Tolerance& tol = default_tolerance()) const;

 private:
  PointList points_;
  PointList rays_;
  double radius_ = 0.0;
  bool open_ball_ = false;
  NormId norm_ = NormId::l2;
};

/// Finite union of GenSets sharing dimension and norm.
class UnionSet {
 public:
  UnionSet() = default;
  explicit UnionSet(std::vector<GenSet> components);
  UnionSet(const GenSet& single) : UnionSet(std::vector<GenSet>{single}) {}  // NOLINT

  /// A finite point set: one singleton component per point.
  static UnionSet finite(const PointList& points, NormId norm = NormId::l2);

  Eigen::Index dim() const { return components_.front().dim(); }
  NormId norm() const { return components_.front().norm(); }
  const std::vector<GenSet>& components() const { return components_; }
  std::size_t size() const { return components_.size(); }
  bool is_convex_form() const { return components_.size() == 1; }

  UnionSet translated(const Vec& v) const;
  UnionSet with_cone(const PolyhedralCone& k) const;
  UnionSet closure() const;
  bool bounded() const;
  bool any_open() const;

 private:
  std::vector<GenSet> components_;
};

struct Membership {
  bool inside = false;
  double margin = 0.0;  // radius - distance of the best component
  int component = -1;
};

/// x in S: some component has d(x, core) <= radius (+feas_tol); strict requires
/// d(x, core) <= radius - strict_margin.
Membership membership(const UnionSet& s, const Vec& x, bool strict,
                      const Tolerance& tol = default_tolerance());

/// max(0, d(x, core) - radius); the distance to the closure.
double distance_to_convex(const GenSet& s, const Vec& x, const Tolerance& tol = default_tolerance());
double distance_to_union(const UnionSet& s, const Vec& x, const Tolerance& tol = default_tolerance());

/// sup over S of y.x, +infinity when some ray r has y.r > feas_tol.
double support_value(const UnionSet& s, const Vec& y, const Tolerance& tol = default_tolerance());

GenSet minkowski_sum(const GenSet& a, const GenSet& b);
UnionSet minkowski_sum(const UnionSet& a, const UnionSet& b);

struct Convexified {
  GenSet set;
  bool approximate = false;
};

/// cl conv(S + K). Components must share one radius unless `overapprox`, in
/// which case the largest radius is pooled and the result is flagged.
Convexified convexify(const UnionSet& s, const PolyhedralCone* k = nullptr, bool overapprox = false);

PolyhedralCone recession_cone(const UnionSet& s);

struct ConicPredicates {
  bool k_bounded = false;
  bool k_convex = false;
  bool k_closed = true;
  bool closure_caveat = false;  // some component has an open ball
  bool k_convex_exact = true;   // false: the k_convex=false answer may be conservative
};

ConicPredicates conic_predicates(const UnionSet& s, const PolyhedralCone& k,
                                 const Tolerance& tol = default_tolerance());

/// Compact in the finite-dimensional sense used for every "weakly K-compact"
/// hypothesis: no rays and closed balls.
bool is_compact(const UnionSet& s);

struct InclusionOptions {
  bool strict = false;
  /// Unit vector in int K; requests inclusion into target + int K, decided as
  /// A - strict_margin * e contained in target (target already carries K).
  std::optional<Vec> interior_shift;
};

struct Inclusion {
  bool holds = false;
  double margin = 0.0;    // min slack over A; >= -feas_tol (non-strict) or >= 0 (strict) when holds
  Vec witness;            // worst point of A, or the offending ray
  bool ray_failure = false;
  bool exact = true;      // false when a union target was tested componentwise only
};

/// A contained in the convex target. Exact: with r_A <= r_T each vertex must
/// lie within r_T - r_A of the target core, otherwise each vertex needs depth
/// r_A - r_T inside the core (facets by double description).
Inclusion includes(const UnionSet& a, const GenSet& target, const InclusionOptions& opts = {},
                   const Tolerance& tol = default_tolerance());

/// A contained in a union target. Exact for singleton components of A; other
/// components must fit inside one target component (a sufficient test).
Inclusion includes(const UnionSet& a, const UnionSet& target, const InclusionOptions& opts = {},
                   const Tolerance& tol = default_tolerance());

/// x in A -* B, i.e. x + B contained in A.
bool star_difference_contains(const UnionSet& a, const UnionSet& b, const Vec& x,
                              const Tolerance& tol = default_tolerance());

/// Whether r lies in cone(rays) up to feas_tol (r is normalized first).
bool ray_in_cone(const Vec& r, const PointList& rays, const Tolerance& tol = default_tolerance());

}  // namespace conic
