#include "conic/cancellation.hpp"

#include "conic/lp.hpp"
#include "conic/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace conic {

namespace {

double inf() { return std::numeric_limits<double>::infinity(); }

// max t s.t. y.(p - x) >= t, y.r >= 0, |y|_* <= 1. Optimal t is the distance.
struct DualSep {
  Vec y;
  double t = 0.0;
};

DualSep lp_separator(const Vec& x, const PointList& pts, const PointList& rays, NormId nrm,
                     const Tolerance& tol) {
  const Eigen::Index n = x.size();
  // l1 set norm: y free with box bounds. linf: y = u - w, sum(u + w) <= 1.
  const bool split = nrm == NormId::linf;
  const Eigen::Index ny = split ? 2 * n : n;
  const Eigen::Index nv = ny + 1;
  auto yrow = [&](const Vec& v) {
    Vec row = Vec::Zero(nv);
    row.head(n) = v;
    if (split) row.segment(n, n) = -v;
    return row;
  };
  LpBuilder b(nv);
  b.set_objective(nv - 1, -1.0);
  for (const auto& p : pts) {
    Vec row = -yrow(p - x);
    row[nv - 1] = 1.0;
    b.add_le(row, 0.0);
  }
  for (const auto& r : rays) b.add_le(-yrow(r), 0.0);
  if (split) {
    Vec ones = Vec::Zero(nv);
    ones.head(ny).setOnes();
    b.add_le(ones, 1.0);
    for (Eigen::Index j = 0; j < ny; ++j) b.add_nonneg(j);
  } else {
    for (Eigen::Index j = 0; j < n; ++j) {
      Vec e = Vec::Zero(nv);
      e[j] = 1.0;
      b.add_le(e, 1.0);
      b.add_le(-e, 1.0);
    }
  }
  Vec cap = Vec::Zero(nv);
  cap[nv - 1] = 1.0;
  b.add_le(cap, 1e6);
  const LpResult r = solve_lp(b.build(), tol);
  if (r.status != LpStatus::optimal) throw Error(ErrorCode::NumericalFailure, "separation LP failed");
  DualSep out;
  out.y = r.x.head(n);
  if (split) out.y -= r.x.segment(n, n);
  out.t = r.x[nv - 1];
  return out;
}

// Orthonormal basis of the orthogonal complement of y in R^d.
Mat complement_basis(const Vec& y) {
  const Eigen::Index d = y.size();
  const Mat ym = y;
  Eigen::HouseholderQR<Mat> qr(ym);
  const Mat q = qr.householderQ() * Mat::Identity(d, d);
  return q.rightCols(d - 1);
}

}  // namespace

Certificate certify_in_conv_plus_cone(const Vec& x, const UnionSet& b, const PolyhedralCone& k,
                                      const Tolerance& tol) {
  require_dim(x, b.dim(), "certify_in_conv_plus_cone");
  if (k.dim() != b.dim()) throw Error(ErrorCode::DimensionMismatch, "certify cone dim");
  const GenSet hull = convexify(b).set;  // MixedRadii propagates
  PointList rays = hull.rays();
  rays.insert(rays.end(), k.generators().begin(), k.generators().end());
  const Projection pr = project_onto_vset(x, hull.points(), rays, hull.norm(), tol);
  const double r = hull.radius();

  Certificate c;
  if (pr.distance <= r + tol.feas_tol) {
    c.kind = Certificate::Kind::membership;
    c.lambda = pr.lambda;
    const auto nb = static_cast<Eigen::Index>(hull.rays().size());
    c.mu = pr.mu.head(nb);
    c.k = Vec::Zero(x.size());
    for (std::size_t j = 0; j < k.generators().size(); ++j) {
      c.k += pr.mu[nb + static_cast<Eigen::Index>(j)] * k.generators()[j];
    }
    c.ball_shift = x - pr.nearest;
    c.residual = std::max(0.0, pr.distance - r);
    return c;
  }

  c.kind = Certificate::Kind::separation;
  c.strict = true;
  Vec y;
  double gap;
  if (hull.norm() == NormId::l2) {
    y = (pr.nearest - x) / pr.distance;
    gap = pr.distance - r;
  } else {
    const DualSep s = lp_separator(x, hull.points(), rays, hull.norm(), tol);
    y = s.y;
    gap = s.t - r * dual_norm(y, hull.norm());
  }
  c.chain.push_back(y);
  c.bases.push_back(Mat::Identity(x.size(), x.size()));
  c.supports = {static_cast<int>(hull.points().size()), 0};
  c.gap = gap;
  return c;
}

Certificate lex_separation_chain(const UnionSet& b, const PolyhedralCone& k, const Tolerance& tol) {
  const Eigen::Index n = b.dim();
  if (n > 8) throw Error(ErrorCode::DimensionTooLarge, "lex_separation_chain supports dim <= 8");
  if (k.dim() != n) throw Error(ErrorCode::DimensionMismatch, "lex chain cone dim");
  PointList all;
  for (const auto& c : b.components()) {
    if (!c.rays().empty() || c.radius() > 0.0) {
      throw Error(ErrorCode::UnsupportedSet, "lex_separation_chain needs a finite point set");
    }
    all.insert(all.end(), c.points().begin(), c.points().end());
  }
  const double drop = 1e-10;
  std::vector<std::size_t> alive(all.size());
  for (std::size_t i = 0; i < all.size(); ++i) alive[i] = i;
  PointList gens = k.generators();

  Certificate cert;
  cert.kind = Certificate::Kind::separation;
  Mat q = Mat::Identity(n, n);
  for (;;) {
    cert.supports.push_back(static_cast<int>(alive.size()));
    cert.bases.push_back(q);
    if (alive.empty()) return cert;
    const Eigen::Index d = q.cols();

    PointList normals;
    for (auto i : alive) normals.push_back(q.transpose() * all[i]);
    const auto npts = normals.size();
    for (const auto& g : gens) normals.push_back(q.transpose() * g);
    const PointList duals = d == 0 ? PointList{} : double_description(normals, d);

    if (duals.empty()) {
      // cone(B u K) is the whole subspace: some strictly positive relation gives 0.
      PointList pts;
      for (auto i : alive) pts.push_back(all[i]);
      const Projection pr = project_onto_vset(Vec::Zero(n), pts, gens, NormId::l2, tol);
      cert.kind = Certificate::Kind::membership;
      cert.lambda = Vec::Zero(static_cast<Eigen::Index>(all.size()));
      for (std::size_t j = 0; j < alive.size(); ++j) cert.lambda[static_cast<Eigen::Index>(alive[j])] = pr.lambda[static_cast<Eigen::Index>(j)];
      cert.k = Vec::Zero(n);
      for (std::size_t j = 0; j < gens.size(); ++j) cert.k += pr.mu[static_cast<Eigen::Index>(j)] * gens[j];
      cert.mu = Vec::Zero(0);
      cert.ball_shift = Vec::Zero(n);
      cert.residual = pr.distance;
      return cert;
    }

    auto min_on_points = [&](const Vec& v) {
      double m = inf();
      for (std::size_t j = 0; j < npts; ++j) m = std::min(m, v.dot(normals[j]));
      return m;
    };
    auto is_lineality = [&](const Vec& v) {
      return std::any_of(duals.begin(), duals.end(), [&](const Vec& u) { return (u + v).norm() < 1e-9; });
    };

    // A strictly separating extreme ray ends the chain at once.
    Vec y;
    double best = 0.0;
    for (const auto& v : duals) {
      const double m = min_on_points(v);
      if (m > drop && m > best) {
        best = m;
        y = v;
      }
    }
    if (y.size() == 0) {
      y = Vec::Zero(d);
      for (const auto& v : duals) {
        if (!is_lineality(v)) y += v;
      }
      if (y.norm() < 1e-12) y = duals.front();
      y.normalize();
    }

    cert.chain.push_back(q * y);
    std::vector<std::size_t> next;
    for (std::size_t j = 0; j < npts; ++j) {
      if (std::abs(y.dot(normals[j])) <= drop) next.push_back(alive[j]);
    }
    if (next.empty()) {
      cert.strict = true;
      cert.gap = min_on_points(y);
    }
    PointList next_gens;
    for (std::size_t j = 0; j < gens.size(); ++j) {
      if (std::abs(y.dot(normals[npts + j])) <= drop) next_gens.push_back(gens[j]);
    }
    alive = std::move(next);
    gens = std::move(next_gens);
    q = d == 1 ? Mat(n, 0) : Mat(q * complement_basis(y));
  }
}

const std::vector<LawId>& all_laws() {
  static const std::vector<LawId> laws = {
      LawId::radstrom_classic, LawId::conic_radstrom, LawId::solid_cancel,        LawId::open_cancel,
      LawId::star_diff,        LawId::order_insensitivity, LawId::nonconvex_rho, LawId::finite_dim,
  };
  return laws;
}

const char* to_string(LawId law) {
  switch (law) {
    case LawId::radstrom_classic: return "RADSTROM_CLASSIC";
    case LawId::conic_radstrom: return "CONIC_RADSTROM";
    case LawId::solid_cancel: return "SOLID_CANCEL";
    case LawId::open_cancel: return "OPEN_CANCEL";
    case LawId::star_diff: return "STAR_DIFF";
    case LawId::order_insensitivity: return "ORDER_INSENSITIVITY";
    case LawId::nonconvex_rho: return "NONCONVEX_RHO";
    case LawId::finite_dim: return "FINITE_DIM";
  }
  return "?";
}

LawId parse_law(const std::string& s) {
  for (LawId l : all_laws()) {
    if (s == to_string(l)) return l;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown law '" + s + "'");
}

std::vector<std::string> law_hypotheses(LawId law) {
  switch (law) {
    case LawId::radstrom_classic: return {"B_closed", "B_convex", "C_bounded", "inclusion"};
    case LawId::conic_radstrom: return {"C_K_bounded", "inclusion", "conv"};
    case LawId::solid_cancel: return {"K_solid", "C_compact", "inclusion", "conv"};
    case LawId::open_cancel: return {"C_compact", "B_open", "inclusion", "conv"};
    case LawId::star_diff: return {"D_compact", "B_open", "inclusion"};
    case LawId::order_insensitivity: return {"C_compact", "B_open", "B_convex", "non_inclusion"};
    case LawId::nonconvex_rho: return {"K_solid", "B_compact", "non_inclusion", "C_in_interval"};
    case LawId::finite_dim: return {"C_compact", "inclusion", "conv"};
  }
  return {};
}

const UnionSet& LawInstance::set(const std::string& name) const {
  const auto it = sets.find(name);
  if (it == sets.end()) throw Error(ErrorCode::MissingObject, "law instance has no set " + name);
  return it->second;
}

namespace {

class LawCheck {
 public:
  LawCheck(LawId law, const LawInstance& inst, const VerifyOptions& opts, const Tolerance& tol)
      : inst_(inst), opts_(opts), tol_(tol) {
    v_.law = to_string(law);
    v_.rng_seed = opts.seed;
    k_ = inst.cone ? *inst.cone : PolyhedralCone::zero(inst.set("A").dim());
    if (k_.dim() != inst.set("A").dim()) throw Error(ErrorCode::DimensionMismatch, "law cone dim");
  }

  const UnionSet& s(const char* name) const { return inst_.set(name); }
  const PolyhedralCone& k() const { return k_; }
  bool dropped(const std::string& h) const { return opts_.drop.count(h) > 0; }

  void hyp(const std::string& name, bool holds, double margin) {
    v_.hypotheses.push_back({name, holds, margin, dropped(name)});
  }
  void flag(const std::string& name, bool holds) { hyp(name, holds, holds ? 1.0 : -1.0); }

  // lhs in target; strict when the target carries an open ball.
  void inclusion(const std::string& name, const UnionSet& lhs, const UnionSet& target,
                 std::optional<Vec> shift = std::nullopt) {
    InclusionOptions io;
    io.strict = target.any_open();
    io.interior_shift = std::move(shift);
    const Inclusion inc = includes(lhs, target, io, tol_);
    hyp(name, inc.holds, inc.margin);
    if (!inc.holds && !inc.exact) note(name + " failed a componentwise (sufficient) test");
  }

  // A not contained in cl(target).
  void non_inclusion(const std::string& name, const UnionSet& a, const UnionSet& target) {
    const Inclusion inc = includes(a, target, {}, tol_);
    const bool holds = !inc.holds && inc.exact;
    hyp(name, holds, -inc.margin);
    last_witness_ = inc.witness;
  }

  // Conclusion lhs in cl(target); inexact failures are left undecided.
  void conclude_inclusion(const UnionSet& lhs, const UnionSet& target, std::optional<Vec> shift = std::nullopt) {
    InclusionOptions io;
    io.interior_shift = std::move(shift);
    const Inclusion inc = includes(lhs, target, io, tol_);
    merge(inc.holds, inc.holds || inc.exact ? inc.margin : 0.0, inc.witness);
    if (!inc.holds && !inc.exact) note("conclusion undecided: componentwise test on a union");
  }

  // Conclusion lhs not in target; a numerically valid inclusion is a failure.
  void conclude_non_inclusion(const UnionSet& lhs, const UnionSet& target) {
    const Inclusion inc = includes(lhs, target, {}, tol_);
    merge(!inc.holds, -inc.margin, inc.witness);
  }

  void merge(bool holds, double margin, const Vec& witness) {
    if (first_ || margin < v_.conclusion.margin) {
      v_.conclusion.margin = margin;
      v_.conclusion.witness = witness;
    }
    v_.conclusion.holds = (first_ || v_.conclusion.holds) && holds;
    first_ = false;
  }

  void note(std::string s) { v_.notes.push_back(std::move(s)); }

  Verdict finish() {
    if (first_) {
      v_.conclusion.holds = true;
      v_.conclusion.margin = inf();
    }
    for (const auto& h : v_.hypotheses) {
      if (h.dropped) note(h.name + " dropped (unchecked)");
    }
    v_.finalize(tol_);
    return v_;
  }

  // cl conv(B + K) when the kept hull applies, else the bare union B + K.
  UnionSet hull_target(const UnionSet& b) {
    if (dropped("conv")) return b.with_cone(k_);
    const Convexified c = convexify(b, &k_, true);
    if (c.approximate) note("conv B over-approximated (mixed radii)");
    return UnionSet(c.set);
  }

  Vec last_witness_;

 private:
  const LawInstance& inst_;
  const VerifyOptions& opts_;
  const Tolerance& tol_;
  PolyhedralCone k_;
  Verdict v_;
  bool first_ = true;
};

bool all_open(const UnionSet& b) {
  return std::all_of(b.components().begin(), b.components().end(),
                     [](const GenSet& g) { return g.open_ball() && g.radius() > 0.0; });
}

bool is_convex(const UnionSet& b, const Tolerance& tol) {
  if (b.size() == 1) return true;
  return conic_predicates(b, PolyhedralCone::zero(b.dim()), tol).k_convex;
}

// Points of C -* D of the form c - d, plus 0.
PointList star_candidates(const UnionSet& c, const UnionSet& d, const Tolerance& tol) {
  PointList cand{Vec::Zero(c.dim())};
  for (const auto& gc : c.components()) {
    for (const auto& p : gc.points()) {
      for (const auto& gd : d.components()) {
        for (const auto& q : gd.points()) cand.push_back(p - q);
      }
    }
  }
  PointList out;
  for (const auto& x : cand) {
    const bool seen = std::any_of(out.begin(), out.end(), [&](const Vec& y) { return (x - y).norm() < 1e-12; });
    if (!seen && star_difference_contains(c, d, x, tol)) out.push_back(x);
  }
  return out;
}

bool interval_contains(const UnionSet& c, const PolyhedralCone& k, const Vec& e, double rho, double* slack) {
  double m = inf();
  for (const auto& g : c.components()) {
    if (!g.rays().empty()) {
      m = -inf();
      break;
    }
    for (const auto& y : k.dual_generators()) {
      const double cap = rho * y.dot(e);
      const double spread = g.radius() * dual_norm(y, g.norm());
      for (const auto& p : g.points()) m = std::min(m, cap - std::abs(y.dot(p)) - spread);
    }
  }
  *slack = m;
  return m >= 0.0;
}

PointList sample_interval(CounterRng& rng, const PolyhedralCone& k, const Vec& e, double rho, int count,
                          const Tolerance& tol) {
  const Eigen::Index n = e.size();
  const OrderInterval iv{k, e, rho};
  PointList out;
  for (int i = 0; i < count; ++i) {
    Vec x(n);
    for (Eigen::Index j = 0; j < n; ++j) x[j] = rng.uniform(-1.0, 1.0);
    x *= rho * 2.0;
    for (int h = 0; h < 60 && !order_interval_contains(iv, x, tol); ++h) x *= 0.5;
    out.push_back(x);
  }
  return out;
}

}  // namespace

Verdict verify_law(LawId law, const LawInstance& inst, const VerifyOptions& opts, const Tolerance& tol) {
  LawCheck ch(law, inst, opts, tol);
  const PolyhedralCone& k = ch.k();
  const UnionSet& a = ch.s("A");
  const UnionSet& b = ch.s("B");

  switch (law) {
    case LawId::radstrom_classic: {
      const UnionSet& c = ch.s("C");
      const bool convex = is_convex(b, tol);
      ch.flag("B_closed", !b.any_open());
      ch.flag("B_convex", convex);
      ch.flag("C_bounded", c.bounded());
      ch.inclusion("inclusion", minkowski_sum(a, c), minkowski_sum(c, b));
      ch.conclude_inclusion(a, convex ? UnionSet(convexify(b, nullptr, true).set) : b);
      if (inst.cone && !inst.cone->is_zero()) ch.note("cone ignored: classic law has K = {0}");
      break;
    }
    case LawId::conic_radstrom: {
      const UnionSet& c = ch.s("C");
      ch.flag("C_K_bounded", conic_predicates(c, k, tol).k_bounded);
      ch.inclusion("inclusion", minkowski_sum(a, c), minkowski_sum(c, b.with_cone(k)));
      ch.conclude_inclusion(a, ch.hull_target(b));
      break;
    }
    case LawId::solid_cancel: {
      const UnionSet& c = ch.s("C");
      ch.flag("K_solid", k.solid());
      ch.flag("C_compact", is_compact(c));
      if (!k.solid()) {
        ch.hyp("inclusion", false, -1.0);
        ch.note("int K is empty");
        break;
      }
      const Vec e = k.interior_direction();
      ch.inclusion("inclusion", minkowski_sum(a, c), minkowski_sum(c, b.with_cone(k)), e);
      ch.conclude_inclusion(a, ch.hull_target(b), e);
      ch.note("int K handled as a strict_margin shift along the interior direction");
      break;
    }
    case LawId::open_cancel: {
      const UnionSet& c = ch.s("C");
      ch.flag("C_compact", is_compact(c));
      ch.flag("B_open", all_open(b));
      ch.inclusion("inclusion", minkowski_sum(a, c), minkowski_sum(c, b.with_cone(k)));
      ch.conclude_inclusion(a, ch.hull_target(b));
      break;
    }
    case LawId::star_diff: {
      const UnionSet& c = ch.s("C");
      const UnionSet& d = ch.s("D");
      ch.flag("D_compact", is_compact(d));
      ch.flag("B_open", all_open(b));
      ch.inclusion("inclusion", minkowski_sum(a, c), minkowski_sum(d, b.with_cone(k)));
      const UnionSet target = ch.hull_target(b);
      const PointList xs = star_candidates(c, d, tol);
      for (const auto& x : xs) ch.conclude_inclusion(a.translated(x), target);
      ch.note(std::to_string(xs.size()) + " points of C -* D tested");
      break;
    }
    case LawId::order_insensitivity: {
      const UnionSet& c = ch.s("C");
      ch.flag("C_compact", is_compact(c));
      ch.flag("B_open", all_open(b));
      ch.flag("B_convex", is_convex(b, tol));
      ch.non_inclusion("non_inclusion", a, b.with_cone(k));
      ch.conclude_non_inclusion(minkowski_sum(a, c), minkowski_sum(c, b.with_cone(k)));
      break;
    }
    case LawId::nonconvex_rho: {
      ch.flag("K_solid", k.solid());
      ch.flag("B_compact", is_compact(b));
      ch.non_inclusion("non_inclusion", a, b.with_cone(k));
      if (!k.solid()) {
        ch.hyp("C_in_interval", false, -1.0);
        break;
      }
      const Vec e = inst.e ? *inst.e : k.interior_direction();
      const Gerstewitz g(k, e, tol);
      double rho = 0.0;
      try {
        rho = compute_rho(b.translated(-ch.last_witness_), g, tol);
      } catch (const Error& err) {
        if (err.code() != ErrorCode::HypothesisFailed && err.code() != ErrorCode::Unbounded) throw;
        ch.hyp("C_in_interval", false, -1.0);
        ch.note(std::string("rho unavailable: ") + err.what());
        break;
      }
      ch.note("rho = " + std::to_string(rho));
      std::vector<UnionSet> cs;
      if (inst.has("C")) {
        double slack = 0.0;
        const bool in = interval_contains(ch.s("C"), k, e, rho, &slack);
        ch.hyp("C_in_interval", in, slack);
        cs.push_back(ch.s("C"));
      } else {
        ch.hyp("C_in_interval", true, rho);
        CounterRng rng(opts.seed);
        cs.push_back(UnionSet::finite({Vec::Zero(a.dim())}, b.norm()));
        for (int i = 1; i < std::max(1, opts.samples); ++i) {
          cs.push_back(UnionSet::finite(sample_interval(rng, k, e, rho, 1 + rng.index(5), tol), b.norm()));
        }
        ch.note(std::to_string(cs.size()) + " sampled C in the order interval");
      }
      for (const auto& c : cs) ch.conclude_non_inclusion(minkowski_sum(a, c), minkowski_sum(c, b.with_cone(k)));
      break;
    }
    case LawId::finite_dim: {
      const UnionSet& c = ch.s("C");
      ch.flag("C_compact", is_compact(c));
      ch.inclusion("inclusion", minkowski_sum(a, c), minkowski_sum(c, b.with_cone(k)));
      ch.conclude_inclusion(a, ch.hull_target(b));
      break;
    }
  }
  return ch.finish();
}

}  // namespace conic
