#include "conic/cone.hpp"

#include "conic/genset.hpp"
#include "conic/lp.hpp"
#include "conic/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace conic {

namespace {

constexpr Eigen::Index kMaxDdDim = 16;
constexpr double kDdZero = 1e-10;

struct DdRay {
  Vec v;
  std::vector<int> zeros;  // sorted indices of processed constraints that are tight
};

bool is_subset(const std::vector<int>& small, const std::vector<int>& big) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

std::vector<int> intersect(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

PointList canonical_rays(const PointList& rays) {
  PointList out;
  for (const auto& r : rays) {
    const double n = r.norm();
    if (n <= 1e-12) continue;
    Vec u = r / n;
    const bool dup = std::any_of(out.begin(), out.end(),
                                 [&](const Vec& o) { return (o - u).norm() <= 1e-9; });
    if (!dup) out.push_back(std::move(u));
  }
  return out;
}

int vector_rank(const PointList& vs, Eigen::Index dim) {
  if (vs.empty()) return 0;
  Mat m(dim, static_cast<Eigen::Index>(vs.size()));
  for (std::size_t i = 0; i < vs.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = vs[i];
  Eigen::FullPivLU<Mat> lu(m);
  lu.setThreshold(1e-9);
  return static_cast<int>(lu.rank());
}

PointList double_description(const PointList& normals_in, Eigen::Index dim) {
  if (dim > kMaxDdDim) {
    throw Error(ErrorCode::DimensionTooLarge, "double description limited to dim <= 16");
  }
  const PointList normals = canonical_rays(normals_in);
  std::vector<Vec> lin;
  for (Eigen::Index i = 0; i < dim; ++i) lin.push_back(Vec::Unit(dim, i));
  std::vector<DdRay> rays;

  for (int k = 0; k < static_cast<int>(normals.size()); ++k) {
    const Vec& a = normals[static_cast<std::size_t>(k)];
    // A lineality direction not orthogonal to a becomes a ray.
    int pick = -1;
    double best = kDdZero;
    for (int i = 0; i < static_cast<int>(lin.size()); ++i) {
      const double v = std::abs(a.dot(lin[static_cast<std::size_t>(i)]));
      if (v > best) {
        best = v;
        pick = i;
      }
    }
    if (pick >= 0) {
      Vec l0 = lin[static_cast<std::size_t>(pick)];
      if (a.dot(l0) < 0) l0 = -l0;
      const double al0 = a.dot(l0);
      std::vector<Vec> next_lin;
      for (int i = 0; i < static_cast<int>(lin.size()); ++i) {
        if (i == pick) continue;
        const Vec& l = lin[static_cast<std::size_t>(i)];
        Vec nl = l - (a.dot(l) / al0) * l0;
        const double n = nl.norm();
        if (n > 1e-12) next_lin.push_back(nl / n);
      }
      lin = std::move(next_lin);
      std::vector<int> l0_zeros;
      for (int j = 0; j < k; ++j) l0_zeros.push_back(j);
      for (auto& r : rays) {
        r.v -= (a.dot(r.v) / al0) * l0;
        r.v.normalize();
        r.zeros.push_back(k);
      }
      rays.push_back({l0 / l0.norm(), std::move(l0_zeros)});
      continue;
    }

    std::vector<DdRay> pos, neg, next;
    for (auto& r : rays) {
      const double s = a.dot(r.v);
      if (s > kDdZero) {
        pos.push_back(r);
      } else if (s < -kDdZero) {
        neg.push_back(r);
      } else {
        r.zeros.push_back(k);
        next.push_back(r);
      }
    }
    const std::vector<DdRay> all = [&] {
      std::vector<DdRay> v = pos;
      v.insert(v.end(), neg.begin(), neg.end());
      v.insert(v.end(), next.begin(), next.end());
      return v;
    }();
    for (const auto& p : pos) {
      for (const auto& n : neg) {
        const std::vector<int> common = intersect(p.zeros, n.zeros);
        bool adjacent = true;
        for (const auto& r : all) {
          if (&r.v == &p.v || &r.v == &n.v) continue;
          if ((r.v - p.v).norm() < 1e-14 || (r.v - n.v).norm() < 1e-14) continue;
          if (is_subset(common, r.zeros)) {
            adjacent = false;
            break;
          }
        }
        if (!adjacent) continue;
        Vec c = a.dot(p.v) * n.v - a.dot(n.v) * p.v;
        const double cn = c.norm();
        if (cn <= 1e-12) continue;
        std::vector<int> z = common;
        z.push_back(k);
        next.push_back({c / cn, std::move(z)});
      }
    }
    next.insert(next.end(), pos.begin(), pos.end());
    rays = std::move(next);
    for (auto& r : rays) std::sort(r.zeros.begin(), r.zeros.end());
  }

  PointList out;
  for (const auto& r : rays) out.push_back(r.v);
  for (const auto& l : lin) {
    out.push_back(l);
    out.push_back(-l);
  }
  return canonical_rays(out);
}

PolyhedralCone PolyhedralCone::from_generators(Eigen::Index dim, const PointList& rays) {
  for (const auto& r : rays) require_dim(r, dim, "cone_from_generators");
  if (dim > kMaxDdDim) throw Error(ErrorCode::DimensionTooLarge, "cone dimension above 16");
  PolyhedralCone k;
  k.dim_ = dim;
  k.dual_generators_ = double_description(rays, dim);
  k.generators_ = double_description(k.dual_generators_, dim);
  k.pointed_ = vector_rank(k.dual_generators_, dim) == dim;
  k.solid_ = vector_rank(k.generators_, dim) == dim;
  return k;
}

PolyhedralCone PolyhedralCone::from_halfspaces(Eigen::Index dim, const PointList& normals) {
  for (const auto& a : normals) require_dim(a, dim, "cone_from_halfspaces");
  if (dim > kMaxDdDim) throw Error(ErrorCode::DimensionTooLarge, "cone dimension above 16");
  PolyhedralCone k;
  k.dim_ = dim;
  k.generators_ = double_description(normals, dim);
  k.dual_generators_ = double_description(k.generators_, dim);
  k.pointed_ = vector_rank(k.dual_generators_, dim) == dim;
  k.solid_ = vector_rank(k.generators_, dim) == dim;
  return k;
}

PolyhedralCone PolyhedralCone::orthant(Eigen::Index dim) {
  PointList g;
  for (Eigen::Index i = 0; i < dim; ++i) g.push_back(Vec::Unit(dim, i));
  return from_generators(dim, g);
}

PolyhedralCone PolyhedralCone::zero(Eigen::Index dim) { return from_generators(dim, {}); }

ConeMembership PolyhedralCone::contains(const Vec& x, bool strict, const Tolerance& tol) const {
  require_dim(x, dim_, "cone_contains");
  if (strict && !solid_) throw Error(ErrorCode::NotSolid, "strict membership needs a solid cone");
  double margin = std::numeric_limits<double>::infinity();
  for (const auto& y : dual_generators_) margin = std::min(margin, y.dot(x));
  ConeMembership m;
  m.margin = margin;
  if (strict) {
    m.inside = margin > 0.0 && margin >= tol.strict_margin * x.norm();
  } else {
    m.inside = margin >= -tol.feas_tol;
  }
  return m;
}

Vec PolyhedralCone::interior_direction() const {
  if (!solid_) throw Error(ErrorCode::NotSolid, "cone has empty interior");
  Vec s = Vec::Zero(dim_);
  for (const auto& g : generators_) s += g;
  if (s.norm() > 1e-12 && contains(s, true).inside) return s / s.norm();
  // Chebyshev-style LP: max t with y_i.x >= t and -1 <= x <= 1.
  LpBuilder b(dim_ + 1);
  b.set_objective(dim_, -1.0);
  for (const auto& y : dual_generators_) {
    Vec row = Vec::Zero(dim_ + 1);
    row.head(dim_) = -y;
    row[dim_] = 1.0;
    b.add_le(row, 0.0);
  }
  for (Eigen::Index i = 0; i < dim_; ++i) {
    b.add_le(Vec::Unit(dim_ + 1, i), 1.0);
    b.add_le(-Vec::Unit(dim_ + 1, i), 1.0);
  }
  b.add_le(Vec::Unit(dim_ + 1, dim_), 1.0);
  const LpResult r = solve_lp(b.build());
  if (r.status != LpStatus::optimal || r.x[dim_] <= 1e-9) {
    throw Error(ErrorCode::NumericalFailure, "could not find an interior direction");
  }
  s = r.x.head(dim_);
  return s / s.norm();
}

void PolyhedralCone::require_pointed() const {
  if (!pointed_) throw Error(ErrorCode::DegenerateCone, "cone contains a line");
}

PolyhedralCone PolyhedralCone::sum(const PolyhedralCone& other) const {
  PointList g = generators_;
  g.insert(g.end(), other.generators_.begin(), other.generators_.end());
  return from_generators(dim_, g);
}

bool order_interval_contains(const OrderInterval& iv, const Vec& x, const Tolerance& tol) {
  if (!iv.cone.solid() || !iv.cone.contains(iv.e, true, tol).inside) {
    throw Error(ErrorCode::NotSolid, "order interval needs e in int K");
  }
  return iv.cone.contains(iv.rho * iv.e - x, false, tol).inside &&
         iv.cone.contains(x + iv.rho * iv.e, false, tol).inside;
}

PointList order_polytope_vertices(const PolyhedralCone& k, const Vec& y) {
  const Eigen::Index n = k.dim();
  // Homogenize {z : Y z >= 0, Y (t y - z) >= 0, t >= 0} and read vertices off
  // the rays with t > 0.
  PointList normals;
  for (const auto& d : k.dual_generators()) {
    Vec a = Vec::Zero(n + 1);
    a.head(n) = d;
    normals.push_back(a);
    Vec b = Vec::Zero(n + 1);
    b.head(n) = -d;
    b[n] = d.dot(y);
    normals.push_back(b);
  }
  normals.push_back(Vec::Unit(n + 1, n));
  PointList verts;
  for (const auto& r : double_description(normals, n + 1)) {
    if (r[n] > 1e-12) verts.push_back(r.head(n) / r[n]);
  }
  return verts;
}

NormalityEstimate normality_constant_estimate(const PolyhedralCone& k, NormId norm, int samples,
                                              std::uint64_t seed) {
  k.require_pointed();
  if (k.is_zero()) throw Error(ErrorCode::DegenerateCone, "normality of the zero cone");
  NormalityEstimate est;
  CounterRng rng(seed);
  const auto& gens = k.generators();
  auto evaluate = [&](Vec y) {
    const double ny = conic::norm(y, norm);
    if (ny <= 1e-12) return;
    y /= ny;
    for (const auto& z : order_polytope_vertices(k, y)) {
      const double nz = conic::norm(z, norm);
      if (nz > est.alpha) {
        est.alpha = nz;
        est.worst_y = y;
        est.worst_z = z;
      }
    }
  };
  for (int s = 0; s < samples; ++s) {
    if (s < static_cast<int>(gens.size())) {
      evaluate(gens[static_cast<std::size_t>(s)]);
    } else {
      Vec y = Vec::Zero(k.dim());
      for (const auto& g : gens) y += rng.uniform() * g;
      evaluate(y);
    }
    est.samples = s + 1;
  }
  return est;
}

PolyhedralCone tangent_cone(const GenSet& m, const Vec& zbar, const Tolerance& tol) {
  if (m.radius() > 0.0) throw Error(ErrorCode::UnsupportedSet, "tangent cone of a ball-inflated set");
  require_dim(zbar, m.dim(), "tangent_cone");
  if (m.project_core(zbar, tol).distance > tol.feas_tol) {
    throw Error(ErrorCode::PointNotInSet, "zbar is not in M");
  }
  PointList dirs;
  for (const auto& p : m.points()) dirs.push_back(p - zbar);
  dirs.insert(dirs.end(), m.rays().begin(), m.rays().end());
  return PolyhedralCone::from_generators(m.dim(), dirs);
}

}  // namespace conic
