#include "conic/excess.hpp"

#include "conic/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace conic {

namespace {

double inf() { return std::numeric_limits<double>::infinity(); }

struct Part {
  double lower = 0.0;
  double upper = 0.0;
  Vec at;
  bool scanned = false;
};

// e(a, t) for one convex target; witness is the worst vertex.
Part convex_part(const GenSet& a, const GenSet& t, const Tolerance& tol) {
  const Inclusion inc = includes(UnionSet(a), t, {}, tol);
  Part p;
  p.at = inc.witness;
  p.lower = inc.ray_failure ? inf() : std::max(0.0, -inc.margin);
  p.upper = p.lower;
  return p;
}

Vec random_unit(CounterRng& rng, Eigen::Index n, NormId nrm) {
  Vec u(n);
  for (Eigen::Index i = 0; i < n; ++i) u[i] = rng.normal();
  if (nrm == NormId::linf) {
    for (Eigen::Index i = 0; i < n; ++i) u[i] = rng.coin(0.25) ? (u[i] > 0 ? 1.0 : -1.0) : u[i];
  }
  const double s = norm(u, nrm);
  return s > 0 ? Vec(u / s) : Vec(Vec::Unit(n, 0));
}

// Sampled sup over a of d(., b), bracketed above by the best single component.
Part scan_part(const GenSet& a, const UnionSet& b, const ExcessOptions& opts, std::uint64_t stream,
               const Tolerance& tol) {
  Part best;
  best.scanned = true;
  best.upper = inf();
  for (const auto& t : b.components()) best.upper = std::min(best.upper, convex_part(a, t, tol).upper);

  // A ray outside every target recession cone drives the distance to infinity.
  for (const auto& r : a.rays()) {
    bool absorbed = false;
    for (const auto& t : b.components()) absorbed = absorbed || ray_in_cone(r, t.rays(), tol);
    if (!absorbed) {
      best.lower = best.upper = inf();
      best.at = r;
      return best;
    }
  }

  const Eigen::Index n = a.dim();
  double diam = 1.0;
  for (const auto& p : a.points()) diam = std::max(diam, p.lpNorm<Eigen::Infinity>());
  const double ray_len = 10.0 * diam;

  best.lower = -1.0;
  auto consider = [&](const Vec& x) {
    const double d = distance_to_union(b, x, tol);
    if (d > best.lower) {
      best.lower = d;
      best.at = x;
    }
  };
  auto inflate = [&](const Vec& c, CounterRng& rng) {
    if (a.radius() <= 0.0) {
      consider(c);
      return;
    }
    // Push outward from the nearest target component, plus a random direction.
    double dmin = inf();
    Vec away = Vec::Zero(n);
    for (const auto& t : b.components()) {
      const Projection pr = t.project_core(c, tol);
      if (pr.distance < dmin) {
        dmin = pr.distance;
        away = c - pr.nearest;
      }
    }
    if (away.norm() > 1e-12) consider(c + a.radius() * (away / norm(away, a.norm())));
    consider(c + a.radius() * random_unit(rng, n, a.norm()));
  };

  CounterRng rng = CounterRng::derive(opts.seed, stream);
  for (const auto& p : a.points()) inflate(p, rng);
  const auto np = static_cast<int>(a.points().size());
  for (int s = 0; s < opts.scan_samples; ++s) {
    Vec x = Vec::Zero(n);
    double wsum = 0.0;
    std::vector<double> w(static_cast<std::size_t>(np));
    for (auto& wi : w) {
      wi = -std::log(1.0 - rng.uniform());
      wsum += wi;
    }
    for (int i = 0; i < np; ++i) x += (w[static_cast<std::size_t>(i)] / wsum) * a.points()[static_cast<std::size_t>(i)];
    for (const auto& r : a.rays()) x += rng.uniform(0.0, ray_len) * r;
    inflate(x, rng);
  }
  best.lower = std::min(best.lower, best.upper);
  return best;
}

void require_same_space(const UnionSet& a, const UnionSet& b) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::DimensionMismatch, "excess dims differ");
  if (a.norm() != b.norm()) throw Error(ErrorCode::DimensionMismatch, "excess norms differ");
}

}  // namespace

const char* to_string(ExcessMethod m) {
  return m == ExcessMethod::vertex_max ? "vertex-max" : "definition-scan";
}

ExcessReport excess(const UnionSet& a, const UnionSet& b, const ExcessOptions& opts, const Tolerance& tol) {
  require_same_space(a, b);
  ExcessReport out;
  out.value = 0.0;
  out.upper = 0.0;
  out.attained_at = a.components().front().points().front();
  bool first = true;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const GenSet& c = a.components()[i];
    Part part;
    if (b.size() == 1) {
      part = convex_part(c, b.components().front(), tol);
    } else if (c.is_singleton()) {
      part.lower = part.upper = distance_to_union(b, c.points().front(), tol);
      part.at = c.points().front();
    } else {
      part = scan_part(c, b, opts, i, tol);
      out.method = ExcessMethod::definition_scan;
    }
    if (first || part.lower > out.value) {
      out.value = part.lower;
      out.attained_at = part.at;
    }
    out.upper = std::max(out.upper, part.upper);
    first = false;
  }
  return out;
}

ConicExcess conic_excess(const UnionSet& a, const UnionSet& b, const PolyhedralCone& k, bool self_check,
                         const ExcessOptions& opts, const Tolerance& tol) {
  if (k.dim() != a.dim()) throw Error(ErrorCode::DimensionMismatch, "conic_excess cone dim");
  ConicExcess out;
  const UnionSet bk = b.with_cone(k);
  out.report = excess(a, bk, opts, tol);
  out.chain.fill(out.report.value);
  if (!self_check) return out;
  const UnionSet ak = a.with_cone(k);
  out.chain[1] = excess(ak, bk, opts, tol).value;
  out.chain[2] = excess(a, bk.closure(), opts, tol).value;
  out.chain[3] = excess(a, b.closure().with_cone(k), opts, tol).value;
  out.chain[4] = excess(a.closure().with_cone(k), b.closure().with_cone(k), opts, tol).value;
  for (std::size_t i = 0; i < out.chain.size(); ++i) {
    for (std::size_t j = i + 1; j < out.chain.size(); ++j) {
      const double x = out.chain[i], y = out.chain[j];
      if (std::isinf(x) || std::isinf(y)) {
        out.chain_consistent = out.chain_consistent && x == y;
      } else {
        out.chain_consistent = out.chain_consistent && std::abs(x - y) <= 2.0 * tol.feas_tol;
      }
    }
  }
  return out;
}

ExcessReport hausdorff(const UnionSet& a, const UnionSet& b, const ExcessOptions& opts, const Tolerance& tol) {
  ExcessReport ab = excess(a, b, opts, tol);
  const ExcessReport ba = excess(b, a, opts, tol);
  if (ba.value > ab.value) {
    ab.value = ba.value;
    ab.attained_at = ba.attained_at;
  }
  ab.upper = std::max(ab.upper, ba.upper);
  if (ba.method == ExcessMethod::definition_scan) ab.method = ba.method;
  return ab;
}

Verdict excess_invariance_check(const UnionSet& a, const UnionSet& b, const UnionSet& c,
                                const PolyhedralCone& k, InvarianceVariant variant,
                                const ExcessOptions& opts, const Tolerance& tol) {
  Verdict v;
  if (variant == InvarianceVariant::open_ball) {
    v.law = "EXCESS_INVARIANCE_OPEN";
    v.hypotheses.push_back({"C_compact", is_compact(c), is_compact(c) ? 1.0 : -1.0});
    const ConicPredicates pb = conic_predicates(b.closure(), k, tol);
    v.hypotheses.push_back({"clB_K_convex", pb.k_convex, pb.k_convex ? 1.0 : -1.0});
    v.notes.push_back("weakly K-compact read as compact (bounded, closed)");
  } else {
    v.law = "EXCESS_INVARIANCE_CLOSED";
    const ConicPredicates pc = conic_predicates(c, k, tol);
    v.hypotheses.push_back({"C_K_bounded", pc.k_bounded, pc.k_bounded ? 1.0 : -1.0});
    bool convex_all = true;
    for (double alpha : {0.01, 0.1, 0.5, 1.0, 2.0}) {
      std::vector<GenSet> comps;
      for (const auto& g : b.components()) comps.push_back(g.with_radius(g.radius() + alpha, false));
      convex_all = convex_all && conic_predicates(UnionSet(comps), k, tol).k_convex;
    }
    v.hypotheses.push_back({"B_plus_alphaD_K_convex", convex_all, convex_all ? 1.0 : -1.0});
    v.hypotheses.push_back({"B_plus_alphaD_K_closed", true, 1.0});
    v.notes.push_back("K-convexity of B + alpha D spot-checked at alpha in {0.01,0.1,0.5,1,2}");
  }

  const ExcessReport lhs = excess(a, b.with_cone(k), opts, tol);
  const ExcessReport rhs = excess(minkowski_sum(a, c), minkowski_sum(b.with_cone(k), c), opts, tol);
  // Gap between the two brackets [value, upper].
  double gap;
  if (std::isinf(lhs.value) || std::isinf(rhs.value)) {
    gap = (std::isinf(lhs.value) && std::isinf(rhs.value)) ? 0.0 : inf();
  } else {
    gap = std::max({0.0, lhs.value - rhs.upper, rhs.value - lhs.upper});
  }
  v.conclusion.margin = -gap;
  v.conclusion.holds = gap <= 2.0 * tol.feas_tol;
  v.conclusion.witness = lhs.value >= rhs.value ? lhs.attained_at : rhs.attained_at;
  v.notes.push_back("e(A,B+K) = " + std::to_string(lhs.value));
  v.notes.push_back("e(A+C,B+K+C) = " + std::to_string(rhs.value));
  if (!lhs.exact() || !rhs.exact()) v.notes.push_back("definition-scan bracket used");
  v.finalize(tol);
  return v;
}

}  // namespace conic
