#include "conic/genset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace conic {

namespace {

constexpr std::size_t kMaxComponents = 10000;

PointList dedupe_points(PointList pts) {
  PointList out;
  for (auto& p : pts) {
    const bool dup = std::any_of(out.begin(), out.end(),
                                 [&](const Vec& o) { return (o - p).cwiseAbs().maxCoeff() <= 1e-12; });
    if (!dup) out.push_back(std::move(p));
  }
  return out;
}

double inf() { return std::numeric_limits<double>::infinity(); }

}  // namespace

GenSet::GenSet(PointList points, PointList rays, double radius, bool open_ball, NormId norm)
    : radius_(radius), open_ball_(open_ball), norm_(norm) {
  if (points.empty()) throw Error(ErrorCode::EmptyPointList, "GenSet needs at least one point");
  const auto d = points.front().size();
  for (const auto& p : points) require_dim(p, d, "GenSet point");
  for (const auto& r : rays) require_dim(r, d, "GenSet ray");
  if (radius < 0.0 || !std::isfinite(radius)) {
    throw Error(ErrorCode::InvalidArgument, "GenSet radius must be finite and >= 0");
  }
  if (open_ball && radius <= 0.0) {
    throw Error(ErrorCode::InvalidArgument, "an open ball needs a positive radius");
  }
  points_ = dedupe_points(std::move(points));
  rays_ = canonical_rays(rays);
}

GenSet GenSet::point(const Vec& x, NormId norm) { return GenSet({x}, {}, 0.0, false, norm); }

GenSet GenSet::ball(const Vec& center, double radius, bool open, NormId norm) {
  return GenSet({center}, {}, radius, open, norm);
}

GenSet GenSet::translated(const Vec& v) const {
  PointList pts;
  for (const auto& p : points_) pts.push_back(p + v);
  return GenSet(std::move(pts), rays_, radius_, open_ball_, norm_);
}

GenSet GenSet::with_rays(const PointList& extra) const {
  PointList r = rays_;
  r.insert(r.end(), extra.begin(), extra.end());
  return GenSet(points_, std::move(r), radius_, open_ball_, norm_);
}

GenSet GenSet::with_radius(double r, bool open) const {
  return GenSet(points_, rays_, r, open && r > 0.0, norm_);
}

Projection GenSet::project_core(const Vec& x, const Tolerance& tol) const {
  return project_onto_vset(x, points_, rays_, norm_, tol);
}

UnionSet::UnionSet(std::vector<GenSet> components) : components_(std::move(components)) {
  if (components_.empty()) throw Error(ErrorCode::EmptyPointList, "UnionSet needs a component");
  const auto d = components_.front().dim();
  const auto n = components_.front().norm();
  for (const auto& c : components_) {
    if (c.dim() != d) throw Error(ErrorCode::DimensionMismatch, "UnionSet components differ in dim");
    if (c.norm() != n) throw Error(ErrorCode::DimensionMismatch, "UnionSet components differ in norm");
  }
}

UnionSet UnionSet::finite(const PointList& points, NormId norm) {
  std::vector<GenSet> comps;
  for (const auto& p : dedupe_points(points)) comps.push_back(GenSet::point(p, norm));
  return UnionSet(std::move(comps));
}

UnionSet UnionSet::translated(const Vec& v) const {
  std::vector<GenSet> c;
  for (const auto& g : components_) c.push_back(g.translated(v));
  return UnionSet(std::move(c));
}

UnionSet UnionSet::with_cone(const PolyhedralCone& k) const {
  std::vector<GenSet> c;
  for (const auto& g : components_) c.push_back(g.with_cone(k));
  return UnionSet(std::move(c));
}

UnionSet UnionSet::closure() const {
  std::vector<GenSet> c;
  for (const auto& g : components_) c.push_back(g.closure());
  return UnionSet(std::move(c));
}

bool UnionSet::bounded() const {
  return std::all_of(components_.begin(), components_.end(), [](const GenSet& g) { return g.bounded(); });
}

bool UnionSet::any_open() const {
  return std::any_of(components_.begin(), components_.end(), [](const GenSet& g) { return g.open_ball(); });
}

Membership membership(const UnionSet& s, const Vec& x, bool strict, const Tolerance& tol) {
  require_dim(x, s.dim(), "membership");
  Membership best;
  best.margin = -inf();
  for (std::size_t i = 0; i < s.size(); ++i) {
    const GenSet& c = s.components()[i];
    const double m = c.radius() - c.project_core(x, tol).distance;
    if (m > best.margin) {
      best.margin = m;
      best.component = static_cast<int>(i);
    }
  }
  best.inside = strict ? best.margin >= tol.strict_margin : best.margin >= -tol.feas_tol;
  return best;
}

double distance_to_convex(const GenSet& s, const Vec& x, const Tolerance& tol) {
  require_dim(x, s.dim(), "distance_to_convex");
  return std::max(0.0, s.project_core(x, tol).distance - s.radius());
}

double distance_to_union(const UnionSet& s, const Vec& x, const Tolerance& tol) {
  double d = inf();
  for (const auto& c : s.components()) d = std::min(d, distance_to_convex(c, x, tol));
  return d;
}

double support_value(const UnionSet& s, const Vec& y, const Tolerance& tol) {
  require_dim(y, s.dim(), "support_value");
  double best = -inf();
  for (const auto& c : s.components()) {
    for (const auto& r : c.rays()) {
      if (y.dot(r) > tol.feas_tol) return inf();
    }
    double h = -inf();
    for (const auto& p : c.points()) h = std::max(h, y.dot(p));
    best = std::max(best, h + c.radius() * dual_norm(y, c.norm()));
  }
  return best;
}

GenSet minkowski_sum(const GenSet& a, const GenSet& b) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::DimensionMismatch, "minkowski_sum dims differ");
  if (a.norm() != b.norm()) throw Error(ErrorCode::DimensionMismatch, "minkowski_sum norms differ");
  PointList pts;
  pts.reserve(a.points().size() * b.points().size());
  for (const auto& p : a.points()) {
    for (const auto& q : b.points()) pts.push_back(p + q);
  }
  PointList rays = a.rays();
  rays.insert(rays.end(), b.rays().begin(), b.rays().end());
  return GenSet(std::move(pts), std::move(rays), a.radius() + b.radius(),
                a.open_ball() || b.open_ball(), a.norm());
}

UnionSet minkowski_sum(const UnionSet& a, const UnionSet& b) {
  if (a.size() * b.size() > kMaxComponents) {
    throw Error(ErrorCode::ComponentBlowup, "minkowski_sum would exceed 10^4 components");
  }
  std::vector<GenSet> comps;
  comps.reserve(a.size() * b.size());
  for (const auto& x : a.components()) {
    for (const auto& y : b.components()) comps.push_back(minkowski_sum(x, y));
  }
  return UnionSet(std::move(comps));
}

Convexified convexify(const UnionSet& s, const PolyhedralCone* k, bool overapprox) {
  const double r0 = s.components().front().radius();
  double rmax = r0;
  bool mixed = false;
  bool open = false;
  PointList pts, rays;
  for (const auto& c : s.components()) {
    if (std::abs(c.radius() - r0) > 1e-12) mixed = true;
    rmax = std::max(rmax, c.radius());
    open = open || c.open_ball();
    pts.insert(pts.end(), c.points().begin(), c.points().end());
    rays.insert(rays.end(), c.rays().begin(), c.rays().end());
  }
  if (mixed && !overapprox) {
    throw Error(ErrorCode::MixedRadii, "convexify of components with different radii");
  }
  if (k != nullptr) rays.insert(rays.end(), k->generators().begin(), k->generators().end());
  Convexified out{GenSet(std::move(pts), std::move(rays), rmax, open && rmax > 0.0, s.norm()), mixed};
  return out;
}

PolyhedralCone recession_cone(const UnionSet& s) {
  PointList rays;
  for (const auto& c : s.components()) rays.insert(rays.end(), c.rays().begin(), c.rays().end());
  return PolyhedralCone::from_generators(s.dim(), rays);
}

bool is_compact(const UnionSet& s) { return s.bounded() && !s.any_open(); }

ConicPredicates conic_predicates(const UnionSet& s, const PolyhedralCone& k, const Tolerance& tol) {
  if (k.dim() != s.dim()) throw Error(ErrorCode::DimensionMismatch, "conic_predicates dims differ");
  ConicPredicates out;
  out.k_bounded = true;
  for (const auto& c : s.components()) {
    for (const auto& r : c.rays()) out.k_bounded = out.k_bounded && k.contains(r, false, tol).inside;
  }
  out.closure_caveat = s.any_open();
  out.k_closed = true;
  // S + K is convex iff conv(S) + K is contained in S + K.
  const Convexified hull = convexify(s, &k);
  const Inclusion inc = includes(UnionSet(hull.set), s.with_cone(k), {}, tol);
  out.k_convex = inc.holds;
  out.k_convex_exact = inc.exact || inc.holds;
  return out;
}

bool ray_in_cone(const Vec& r, const PointList& rays, const Tolerance& tol) {
  const double n = r.norm();
  if (n <= 1e-12) return true;
  const Vec u = r / n;
  if (rays.empty()) return false;
  const Projection p = project_onto_vset(u, {Vec::Zero(r.size())}, rays, NormId::l2, tol);
  return p.distance <= tol.feas_tol;
}

namespace {

struct Facet {
  Vec a;
  double b;  // a.x + b >= 0
};

// Facets of conv(points) + cone(rays) from the dual of its homogenization.
std::vector<Facet> core_facets(const GenSet& c) {
  const Eigen::Index n = c.dim();
  PointList gens;
  for (const auto& p : c.points()) {
    Vec g(n + 1);
    g << p, 1.0;
    gens.push_back(g);
  }
  for (const auto& r : c.rays()) {
    Vec g = Vec::Zero(n + 1);
    g.head(n) = r;
    gens.push_back(g);
  }
  std::vector<Facet> out;
  for (const auto& d : double_description(gens, n + 1)) {
    if (d.head(n).norm() <= 1e-12) continue;
    out.push_back({d.head(n), d[n]});
  }
  return out;
}

// Largest s with q + sB inside the polyhedron (q assumed inside).
double signed_depth(const std::vector<Facet>& facets, const Vec& q, NormId norm) {
  double depth = inf();
  for (const auto& f : facets) depth = std::min(depth, (f.a.dot(q) + f.b) / dual_norm(f.a, norm));
  return std::max(depth, 0.0);
}

// Slack of one component of A against a convex target: r_T - (max_p d(p) + r_A),
// less strict_margin for strict inclusion.
Inclusion component_in_convex(const GenSet& a, const GenSet& target, const InclusionOptions& opts,
                              const Tolerance& tol) {
  Inclusion out;
  for (const auto& r : a.rays()) {
    if (!ray_in_cone(r, target.rays(), tol)) {
      out.holds = false;
      out.ray_failure = true;
      out.margin = -inf();
      out.witness = r;
      return out;
    }
  }
  const double shift = opts.interior_shift ? tol.strict_margin : 0.0;
  auto shifted = [&](const Vec& p) { return opts.interior_shift ? Vec(p - shift * *opts.interior_shift) : p; };
  const double excess_radius = a.radius() - target.radius();
  double worst = -inf();
  Vec witness = a.points().front();
  if (excess_radius <= 0.0) {
    // X + rB in Y + sB with r <= s iff X in Y + (s - r)B.
    for (const auto& p : a.points()) {
      const double d = target.project_core(shifted(p), tol).distance;
      if (d > worst) {
        worst = d;
        witness = p;
      }
    }
    out.margin = -excess_radius - worst;
  } else {
    // Otherwise every vertex needs depth >= r - s inside the target core.
    const auto facets = core_facets(target);
    double shallow = inf();
    for (const auto& p : a.points()) {
      const Vec q = shifted(p);
      const double d = target.project_core(q, tol).distance;
      const double depth = d > tol.feas_tol ? -d : signed_depth(facets, q, target.norm());
      if (depth < shallow) {
        shallow = depth;
        witness = p;
      }
    }
    out.margin = shallow - excess_radius;
  }
  out.witness = witness;
  if (opts.strict) out.margin -= tol.strict_margin;
  out.holds = opts.strict ? out.margin >= 0.0 : out.margin >= -tol.feas_tol;
  return out;
}

}  // namespace

Inclusion includes(const UnionSet& a, const GenSet& target, const InclusionOptions& opts,
                   const Tolerance& tol) {
  if (a.dim() != target.dim()) throw Error(ErrorCode::DimensionMismatch, "includes dims differ");
  if (opts.interior_shift) require_dim(*opts.interior_shift, a.dim(), "includes interior shift");
  Inclusion out;
  out.holds = true;
  out.margin = inf();
  for (const auto& c : a.components()) {
    const Inclusion ci = component_in_convex(c, target, opts, tol);
    if (ci.margin < out.margin) {
      out.margin = ci.margin;
      out.witness = ci.witness;
      out.ray_failure = ci.ray_failure;
    }
    out.holds = out.holds && ci.holds;
  }
  return out;
}

Inclusion includes(const UnionSet& a, const UnionSet& target, const InclusionOptions& opts,
                   const Tolerance& tol) {
  if (target.size() == 1) return includes(a, target.components().front(), opts, tol);
  if (a.dim() != target.dim()) throw Error(ErrorCode::DimensionMismatch, "includes dims differ");
  Inclusion out;
  out.holds = true;
  out.margin = inf();
  for (const auto& c : a.components()) {
    Inclusion best;
    best.margin = -inf();
    for (const auto& t : target.components()) {
      Inclusion ci = component_in_convex(c, t, opts, tol);
      if (ci.margin > best.margin || (best.margin == -inf() && best.witness.size() == 0)) best = ci;
    }
    if (!best.holds && !c.is_singleton()) out.exact = false;
    if (best.margin < out.margin) {
      out.margin = best.margin;
      out.witness = best.witness;
      out.ray_failure = best.ray_failure;
    }
    out.holds = out.holds && best.holds;
  }
  return out;
}

bool star_difference_contains(const UnionSet& a, const UnionSet& b, const Vec& x, const Tolerance& tol) {
  require_dim(x, a.dim(), "star_difference_contains");
  return includes(b.translated(x), a, {}, tol).holds;
}

}  // namespace conic
