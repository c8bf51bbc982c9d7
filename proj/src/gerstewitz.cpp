#include "conic/gerstewitz.hpp"

#include "conic/lp.hpp"

#include <cmath>
#include <limits>

namespace conic {

Gerstewitz::Gerstewitz(PolyhedralCone k, Vec e, const Tolerance& tol) : k_(std::move(k)), e_(std::move(e)) {
  require_dim(e_, k_.dim(), "gerstewitz e");
  if (!k_.solid()) throw Error(ErrorCode::NotSolid, "gerstewitz needs a solid cone");
  for (const auto& y : k_.dual_generators()) {
    const double d = y.dot(e_);
    if (d <= tol.strict_margin) throw Error(ErrorCode::NotSolid, "e is not in int K");
    d_.push_back(d);
  }
}

double Gerstewitz::operator()(const Vec& x) const {
  require_dim(x, e_.size(), "gerstewitz");
  // K = whole space: phi is identically -infinity.
  if (d_.empty()) return -std::numeric_limits<double>::infinity();
  double best = -std::numeric_limits<double>::infinity();
  const auto& ys = k_.dual_generators();
  for (std::size_t i = 0; i < ys.size(); ++i) best = std::max(best, ys[i].dot(x) / d_[i]);
  return best;
}

Vec dual_attainer(const Vec& y, NormId norm) {
  const Eigen::Index n = y.size();
  Vec u = Vec::Zero(n);
  if (y.norm() == 0.0) {
    u[0] = 1.0;
    return u;
  }
  switch (norm) {
    case NormId::l2:
      return y / y.norm();
    case NormId::l1: {
      Eigen::Index i = 0;
      y.cwiseAbs().maxCoeff(&i);
      u[i] = y[i] >= 0 ? 1.0 : -1.0;
      return u;
    }
    case NormId::linf:
      for (Eigen::Index i = 0; i < n; ++i) u[i] = y[i] >= 0 ? 1.0 : -1.0;
      return u;
  }
  return u;
}

Minimum minimize_linear(const UnionSet& s, const Vec& y, const PolyhedralCone* k, const Tolerance& tol) {
  require_dim(y, s.dim(), "minimize_linear");
  Minimum out;
  if (k != nullptr) {
    for (const auto& g : k->generators()) {
      if (y.dot(g) < -tol.feas_tol) {
        out.warning = "y is not in the dual cone of K";
        break;
      }
    }
  }
  out.value = std::numeric_limits<double>::infinity();
  const Vec u = dual_attainer(y, s.norm());
  for (std::size_t c = 0; c < s.size(); ++c) {
    const GenSet& g = s.components()[c];
    for (const auto& r : g.rays()) {
      if (y.dot(r) < -tol.feas_tol) {
        throw Error(ErrorCode::Unbounded, "linear functional unbounded below along a recession ray");
      }
    }
    for (const auto& p : g.points()) {
      const double v = y.dot(p) - g.radius() * dual_norm(y, s.norm());
      if (v < out.value) {
        out.value = v;
        out.argmin = p - g.radius() * u;
        out.component = static_cast<int>(c);
      }
    }
  }
  return out;
}

namespace {

struct CoreMin {
  double value;
  Vec x;
};

CoreMin phi_over_core(const GenSet& c, const Gerstewitz& g, const Tolerance& tol) {
  const auto np = static_cast<Eigen::Index>(c.points().size());
  const auto nr = static_cast<Eigen::Index>(c.rays().size());
  const Eigen::Index nv = np + nr + 1;
  LpBuilder b(nv);
  b.set_objective(nv - 1, 1.0);
  const auto& ys = g.cone().dual_generators();
  for (std::size_t i = 0; i < ys.size(); ++i) {
    Vec row(nv);
    for (Eigen::Index j = 0; j < np; ++j) row[j] = ys[i].dot(c.points()[static_cast<std::size_t>(j)]);
    for (Eigen::Index j = 0; j < nr; ++j) row[np + j] = ys[i].dot(c.rays()[static_cast<std::size_t>(j)]);
    row[nv - 1] = -g.denominators()[i];
    b.add_le(row, 0.0);
  }
  Vec ones = Vec::Zero(nv);
  ones.head(np).setOnes();
  b.add_eq(ones, 1.0);
  for (Eigen::Index j = 0; j + 1 < nv; ++j) b.add_nonneg(j);
  const LpResult r = solve_lp(b.build(), tol);
  if (r.status == LpStatus::unbounded) {
    throw Error(ErrorCode::Unbounded, "gerstewitz functional unbounded below on the set");
  }
  if (r.status != LpStatus::optimal) throw Error(ErrorCode::NumericalFailure, "phi minimization LP failed");
  Vec x = Vec::Zero(c.dim());
  for (Eigen::Index j = 0; j < np; ++j) x += r.x[j] * c.points()[static_cast<std::size_t>(j)];
  for (Eigen::Index j = 0; j < nr; ++j) x += r.x[np + j] * c.rays()[static_cast<std::size_t>(j)];
  return {g(x), x};
}

}  // namespace

Minimum minimize_gerstewitz(const UnionSet& s, const Gerstewitz& g, const Tolerance& tol) {
  if (s.dim() != g.e().size()) throw Error(ErrorCode::DimensionMismatch, "minimize_gerstewitz dims");
  Minimum out;
  out.value = std::numeric_limits<double>::infinity();
  const auto& ys = g.cone().dual_generators();
  for (std::size_t ci = 0; ci < s.size(); ++ci) {
    const GenSet& c = s.components()[ci];
    const CoreMin core = phi_over_core(c, g, tol);
    double value = core.value;
    Vec arg = core.x;
    if (c.radius() > 0.0) {
      double slope = 0.0;
      for (std::size_t i = 0; i < ys.size(); ++i) {
        slope = std::max(slope, dual_norm(ys[i], c.norm()) / g.denominators()[i]);
      }
      PointList rays = c.rays();
      rays.insert(rays.end(), g.cone().generators().begin(), g.cone().generators().end());
      auto probe = [&](double t) { return project_onto_vset(t * g.e(), c.points(), rays, c.norm(), tol); };
      double lo = core.value - c.radius() * slope;
      double hi = core.value;
      Projection at_hi = probe(hi);
      const Projection at_lo = probe(lo);
      if (at_lo.distance <= c.radius()) {
        hi = lo;
        at_hi = at_lo;
      }
      while (hi - lo > tol.opt_tol * std::max(1.0, std::abs(hi))) {
        const double mid = 0.5 * (lo + hi);
        Projection pm = probe(mid);
        if (pm.distance <= c.radius()) {
          hi = mid;
          at_hi = std::move(pm);
        } else {
          lo = mid;
        }
      }
      // Split the nearest point into core and cone parts; the residual fits the ball.
      Vec core_part = Vec::Zero(c.dim());
      for (std::size_t j = 0; j < c.points().size(); ++j) {
        core_part += at_hi.lambda[static_cast<Eigen::Index>(j)] * c.points()[j];
      }
      for (std::size_t j = 0; j < c.rays().size(); ++j) {
        core_part += at_hi.mu[static_cast<Eigen::Index>(j)] * c.rays()[j];
      }
      value = hi;
      arg = core_part + (hi * g.e() - at_hi.nearest);
    }
    if (value < out.value) {
      out.value = value;
      out.argmin = arg;
      out.component = static_cast<int>(ci);
    }
  }
  return out;
}

double compute_rho(const UnionSet& b, const Gerstewitz& g, const Tolerance& tol) {
  const double m = minimize_gerstewitz(b, g, tol).value;
  if (!(m > tol.strict_margin)) {
    throw Error(ErrorCode::HypothesisFailed, "min phi over B is not positive (0 in B + K)");
  }
  return m / 4.0;
}

}  // namespace conic
