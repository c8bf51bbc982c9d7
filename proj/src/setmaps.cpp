#include "conic/setmaps.hpp"

#include "conic/rng.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>

namespace conic {

namespace {

double inf() { return std::numeric_limits<double>::infinity(); }

double radical_inverse(std::uint64_t i, std::uint64_t base) {
  double inv = 1.0 / static_cast<double>(base), f = inv, r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}

constexpr std::uint64_t kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};

}  // namespace

BoxMap::BoxMap(std::vector<Poly> lower, std::vector<Poly> upper, Vec box_lo, Vec box_hi, const Tolerance& tol)
    : lower_(std::move(lower)), upper_(std::move(upper)), lo_(std::move(box_lo)), hi_(std::move(box_hi)) {
  if (lower_.empty() || lower_.size() != upper_.size()) {
    throw Error(ErrorCode::InvalidArgument, "box map needs matching nonempty lower/upper lists");
  }
  if (lower_.size() > 4) throw Error(ErrorCode::RangeDimTooLarge, "box map range dim must be <= 4");
  const Eigen::Index m = lo_.size();
  require_dim(hi_, m, "box map sampling box");
  if (m == 0 || (lo_.array() > hi_.array()).any()) throw Error(ErrorCode::InvalidArgument, "empty sampling box");
  for (std::size_t i = 0; i < lower_.size(); ++i) {
    if (lower_[i].dim() != m || upper_[i].dim() != m) {
      throw Error(ErrorCode::DimensionMismatch, "box map polynomial dim differs from domain dim");
    }
  }
  // lower <= upper on a 3^m lattice of the box plus seeded random points.
  PointList probe;
  const int lattice = m <= 6 ? static_cast<int>(std::pow(3, m)) : 0;
  for (int c = 0; c < lattice; ++c) {
    Vec z(m);
    int code = c;
    for (Eigen::Index j = 0; j < m; ++j) {
      z[j] = lo_[j] + 0.5 * (code % 3) * (hi_[j] - lo_[j]);
      code /= 3;
    }
    probe.push_back(z);
  }
  CounterRng rng(0xb0c5);
  for (int s = 0; s < 64; ++s) {
    Vec z(m);
    for (Eigen::Index j = 0; j < m; ++j) z[j] = rng.uniform(lo_[j], hi_[j]);
    probe.push_back(z);
  }
  for (const auto& z : probe) {
    for (std::size_t i = 0; i < lower_.size(); ++i) {
      if (lower_[i](z) > upper_[i](z) + tol.feas_tol) {
        throw Error(ErrorCode::InvalidArgument, "box map lower bound exceeds upper bound on the sampling box");
      }
    }
  }
}

Vec BoxMap::lower_at(const Vec& z) const {
  Vec v(range_dim());
  for (Eigen::Index i = 0; i < range_dim(); ++i) v[i] = lower_[static_cast<std::size_t>(i)](z);
  return v;
}

Vec BoxMap::upper_at(const Vec& z) const {
  Vec v(range_dim());
  for (Eigen::Index i = 0; i < range_dim(); ++i) v[i] = upper_[static_cast<std::size_t>(i)](z);
  return v;
}

GenSet BoxMap::value(const Vec& z, NormId norm) const {
  const Vec lo = lower_at(z), hi = upper_at(z);
  const Eigen::Index n = range_dim();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (lo[i] > hi[i] + default_tolerance().feas_tol) {
      throw Error(ErrorCode::InvalidArgument, "box map value is empty (lower > upper) outside the sampling box");
    }
  }
  PointList verts;
  for (int mask = 0; mask < (1 << n); ++mask) {
    Vec v = lo;
    bool dup = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (mask & (1 << i)) {
        if (hi[i] <= lo[i]) dup = true;
        v[i] = hi[i];
      }
    }
    if (!dup) verts.push_back(v);
  }
  return GenSet(std::move(verts), {}, 0.0, false, norm);
}

BoxMap BoxMap::operator+(const BoxMap& o) const {
  if (o.domain_dim() != domain_dim() || o.range_dim() != range_dim()) {
    throw Error(ErrorCode::DimensionMismatch, "box map sum dims");
  }
  std::vector<Poly> lo, hi;
  for (std::size_t i = 0; i < lower_.size(); ++i) {
    lo.push_back(lower_[i] + o.lower_[i]);
    hi.push_back(upper_[i] + o.upper_[i]);
  }
  return BoxMap(lo, hi, lo_.cwiseMax(o.lo_), hi_.cwiseMin(o.hi_));
}

GenSet epi_eval(const BoxMap& f, const Vec& z, const PolyhedralCone& k, NormId norm) {
  require_dim(z, f.domain_dim(), "epi_eval");
  if (k.dim() != f.range_dim()) throw Error(ErrorCode::DimensionMismatch, "epi_eval cone dim");
  return f.value(z, norm).with_cone(k);
}

const char* to_string(SubdiffDirection d) { return d == SubdiffDirection::lower ? "lower" : "upper"; }

const char* to_string(SubdiffVerdict v) {
  switch (v) {
    case SubdiffVerdict::pass: return "pass";
    case SubdiffVerdict::fail: return "fail";
    case SubdiffVerdict::inconclusive: return "inconclusive";
  }
  return "?";
}

PointList sphere_directions(Eigen::Index m, int count, std::uint64_t seed) {
  PointList out;
  if (m == 1) return {Vec::Constant(1, 1.0), Vec::Constant(1, -1.0)};
  if (m > 16) throw Error(ErrorCode::DimensionTooLarge, "sphere_directions supports dim <= 16");
  const Eigen::Index pairs = (m + 1) / 2;
  CounterRng rng(seed);
  std::vector<double> shift(static_cast<std::size_t>(2 * pairs));
  for (auto& s : shift) s = rng.uniform();
  for (int i = 0; i < count; ++i) {
    Vec g(2 * pairs);
    for (Eigen::Index p = 0; p < pairs; ++p) {
      double u1 = radical_inverse(static_cast<std::uint64_t>(i) + 1, kPrimes[2 * p]) + shift[static_cast<std::size_t>(2 * p)];
      double u2 = radical_inverse(static_cast<std::uint64_t>(i) + 1, kPrimes[2 * p + 1]) + shift[static_cast<std::size_t>(2 * p + 1)];
      u1 -= std::floor(u1);
      u2 -= std::floor(u2);
      const double r = std::sqrt(-2.0 * std::log(1.0 - u1 * (1.0 - 1e-16)));
      g[2 * p] = r * std::cos(2.0 * M_PI * u2);
      g[2 * p + 1] = r * std::sin(2.0 * M_PI * u2);
    }
    Vec u = g.head(m);
    if (u.norm() > 1e-12) out.push_back(u.normalized());
  }
  for (Eigen::Index j = 0; j < m; ++j) {
    out.push_back(Vec::Unit(m, j));
    out.push_back(-Vec::Unit(m, j));
  }
  return out;
}

SubdiffReport subdiff_test_map(const std::function<UnionSet(const Vec&)>& epi, const Vec& zbar, const LinMap& t,
                               SubdiffDirection dir, const SubdiffOptions& opts, const Tolerance& tol, Exec exec) {
  const Eigen::Index m = zbar.size();
  if (t.matrix.cols() != m) throw Error(ErrorCode::DimensionMismatch, "T columns differ from domain dim");
  if (opts.levels < 2) throw Error(ErrorCode::InvalidArgument, "subdiff schedule needs >= 2 levels");
  SubdiffReport rep;
  rep.direction = dir;
  rep.eps_accept = opts.eps_accept;
  rep.eps_reject = opts.eps_reject;
  const PointList dirs = sphere_directions(m, opts.directions, opts.seed);
  rep.samples = static_cast<int>(dirs.size());
  for (int k = 0; k < opts.levels; ++k) rep.radii.push_back(opts.delta0 * std::ldexp(1.0, -k));

  const UnionSet base = epi(zbar);
  if (t.matrix.rows() != base.dim()) throw Error(ErrorCode::DimensionMismatch, "T rows differ from range dim");
  const int nd = static_cast<int>(dirs.size());
  const int total = opts.levels * nd;
  std::vector<double> ratio(static_cast<std::size_t>(total)), ratio_up(static_cast<std::size_t>(total));
  auto one = [&](int idx) {
    const double delta = rep.radii[static_cast<std::size_t>(idx / nd)];
    const Vec& u = dirs[static_cast<std::size_t>(idx % nd)];
    const Vec z = zbar + delta * u;
    const UnionSet at = epi(z);
    const UnionSet shifted = base.translated(delta * (t.matrix * u));
    ExcessOptions eo;
    eo.seed = opts.seed ^ static_cast<std::uint64_t>(idx);
    const ExcessReport r =
        dir == SubdiffDirection::lower ? excess(at, shifted, eo, tol) : excess(shifted, at, eo, tol);
    ratio[static_cast<std::size_t>(idx)] = r.value / delta;
    ratio_up[static_cast<std::size_t>(idx)] = r.upper / delta;
  };
  if (exec == Exec::serial) {
    for (int i = 0; i < total; ++i) one(i);
  } else {
    std::exception_ptr err;
#pragma omp parallel for schedule(dynamic, 8)
    for (int i = 0; i < total; ++i) {
      try {
        one(i);
      } catch (...) {
#pragma omp critical
        if (!err) err = std::current_exception();
      }
    }
    if (err) std::rethrow_exception(err);
  }

  for (int k = 0; k < opts.levels; ++k) {
    double q = -inf(), qu = -inf();
    int arg = 0;
    for (int j = 0; j < nd; ++j) {
      const double v = ratio[static_cast<std::size_t>(k * nd + j)];
      if (v > q) {
        q = v;
        arg = j;
      }
      qu = std::max(qu, ratio_up[static_cast<std::size_t>(k * nd + j)]);
    }
    rep.q.push_back(q);
    rep.q_upper.push_back(qu);
    if (k == opts.levels - 1) rep.witness = zbar + rep.radii.back() * dirs[static_cast<std::size_t>(arg)];
  }
  const double last = rep.q.back();
  const double last_up = rep.q_upper.back(), prev_up = rep.q_upper[rep.q_upper.size() - 2];
  if (last_up <= opts.eps_accept && prev_up <= opts.eps_accept) {
    rep.verdict = SubdiffVerdict::pass;
    rep.note = "pass is sampled evidence for the limit, not a proof";
  } else if (last >= opts.eps_reject) {
    rep.verdict = SubdiffVerdict::fail;
    rep.note = "fail is a refutation at the witness z";
  } else {
    rep.verdict = SubdiffVerdict::inconclusive;
    rep.note = "q on the schedule tail is between eps_accept and eps_reject";
  }
  return rep;
}

namespace {

void require_interior(const BoxMap& f, const Vec& zbar) {
  require_dim(zbar, f.domain_dim(), "subdiff zbar");
  if ((zbar.array() <= f.box_lo().array()).any() || (zbar.array() >= f.box_hi().array()).any()) {
    throw Error(ErrorCode::InvalidArgument, "zbar must lie in the interior of the sampling box");
  }
}

}  // namespace

SubdiffReport subdiff_test(const BoxMap& f, const Vec& zbar, const LinMap& t, const PolyhedralCone& k,
                           SubdiffDirection dir, const SubdiffOptions& opts, const Tolerance& tol) {
  require_interior(f, zbar);
  auto epi = [&](const Vec& z) { return UnionSet(epi_eval(f, z, k, opts.norm)); };
  return subdiff_test_map(epi, zbar, t, dir, opts, tol);
}

Verdict subdiff_sum_invariance_test(const BoxMap& f, const UnionSet& a, const Vec& zbar, const LinMap& t,
                                    const PolyhedralCone& k, SubdiffDirection dir, const SubdiffOptions& opts,
                                    const Tolerance& tol) {
  require_interior(f, zbar);
  if (a.dim() != f.range_dim()) throw Error(ErrorCode::DimensionMismatch, "sum invariance set dim");
  Verdict v;
  v.law = "SUBDIFF_SUM_INVARIANCE";
  v.rng_seed = opts.seed;
  const bool compact = is_compact(a);
  v.hypotheses.push_back({"A_compact", compact, compact ? 1.0 : -1.0});
  const bool kconvex = conic_predicates(UnionSet(f.value(zbar, opts.norm)), k, tol).k_convex;
  v.hypotheses.push_back({"clF_zbar_K_convex", kconvex, kconvex ? 1.0 : -1.0});

  const SubdiffReport rf = subdiff_test(f, zbar, t, k, dir, opts, tol);
  auto epi_a = [&](const Vec& z) { return minkowski_sum(UnionSet(epi_eval(f, z, k, opts.norm)), a); };
  const SubdiffReport ra = subdiff_test_map(epi_a, zbar, t, dir, opts, tol);

  double gap = 0.0;
  for (std::size_t i = 0; i < rf.q.size(); ++i) {
    if (std::isinf(rf.q[i]) || std::isinf(ra.q[i])) {
      if (std::isinf(rf.q[i]) != std::isinf(ra.q[i])) gap = inf();
      continue;
    }
    // F's values are convex boxes, so rf is exact; ra may carry a scan bracket.
    gap = std::max({gap, rf.q[i] - ra.q_upper[i], ra.q[i] - rf.q_upper[i]});
  }
  v.conclusion.holds = rf.verdict == ra.verdict;
  v.conclusion.margin = v.conclusion.holds ? -gap : -std::max(gap, 1.0);
  v.conclusion.witness = rf.witness;
  v.notes.push_back(std::string("F: ") + to_string(rf.verdict) + ", F+A: " + to_string(ra.verdict));
  v.notes.push_back("max ratio gap over the schedule " + std::to_string(gap));
  v.finalize(tol);
  return v;
}

namespace {

PointList ball_points(const Vec& zbar, double radius, int random, std::uint64_t seed) {
  const Eigen::Index m = zbar.size();
  PointList pts{zbar};
  for (Eigen::Index j = 0; j < m; ++j) {
    for (double s : {1.0, -1.0, 0.5, -0.5}) pts.push_back(zbar + s * radius * Vec::Unit(m, j));
  }
  CounterRng rng(seed);
  for (int i = 0; i < random; ++i) {
    Vec u(m);
    for (Eigen::Index j = 0; j < m; ++j) u[j] = rng.normal();
    if (u.norm() < 1e-12) continue;
    const double r = radius * std::pow(rng.uniform(), 1.0 / static_cast<double>(m));
    pts.push_back(zbar + r * u.normalized());
  }
  return pts;
}

}  // namespace

Verdict k_lipschitz_check(const BoxMap& f, const Vec& zbar, double ell, const Vec& e, double radius,
                          const PolyhedralCone& k, const SampleOptions& opts, const Tolerance& tol) {
  require_dim(zbar, f.domain_dim(), "k_lipschitz zbar");
  require_dim(e, f.range_dim(), "k_lipschitz e");
  if (k.dim() != f.range_dim()) throw Error(ErrorCode::DimensionMismatch, "k_lipschitz cone dim");
  Verdict v;
  v.law = "K_LIPSCHITZ";
  v.rng_seed = opts.seed;
  v.hypotheses.push_back({"ell_positive", ell > 0.0, ell});
  const ConeMembership em = k.contains(e, false, tol);
  v.hypotheses.push_back({"e_in_K", em.inside, em.margin});
  const double en = e.norm();
  v.hypotheses.push_back({"e_unit", std::abs(en - 1.0) <= 1e-9, -std::abs(en - 1.0)});
  v.notes.push_back("e is taken on the unit sphere of the range space");
  if (!k.solid() || !k.contains(e, true, tol).inside) v.notes.push_back("warning: e is not in int K");

  const PointList pts = ball_points(zbar, radius, std::max(0, opts.samples / 8), opts.seed);
  std::vector<GenSet> vals, epis;
  for (const auto& z : pts) {
    vals.push_back(f.value(z));
    epis.push_back(vals.back().with_cone(k));
  }
  v.conclusion.holds = true;
  v.conclusion.margin = inf();
  Vec worst_from;
  for (std::size_t i = 0; i < pts.size(); ++i) {    // z''
    for (std::size_t j = 0; j < pts.size(); ++j) {  // z'
      if (i == j) continue;
      const double d = (pts[i] - pts[j]).norm();
      const Inclusion inc = includes(UnionSet(vals[i].translated(ell * d * e)), epis[j], {}, tol);
      if (inc.margin < v.conclusion.margin) {
        v.conclusion.margin = inc.margin;
        v.conclusion.witness = pts[i];
        worst_from = pts[j];
      }
      v.conclusion.holds = v.conclusion.holds && inc.holds;
    }
  }
  v.notes.push_back(std::to_string(pts.size()) + " points, " + std::to_string(pts.size() * (pts.size() - 1)) +
                    " ordered pairs");
  if (worst_from.size() > 0 && !v.conclusion.holds) {
    std::string s = "violating pair z' =";
    for (Eigen::Index i = 0; i < worst_from.size(); ++i) s += " " + std::to_string(worst_from[i]);
    v.notes.push_back(s);
  }
  v.finalize(tol);
  return v;
}

Verdict subgradient_bound_check(const BoxMap& f, const Vec& zbar, const LinMap& t, const PolyhedralCone& k,
                                double ell, const Vec& e, double radius, const SampleOptions& opts,
                                const Tolerance& tol) {
  Verdict v;
  v.law = "SUBGRADIENT_BOUND";
  v.rng_seed = opts.seed;
  const SubdiffReport sd = subdiff_test(f, zbar, t, k, SubdiffDirection::lower, {}, tol);
  v.hypotheses.push_back({"T_in_subdiff", sd.verdict == SubdiffVerdict::pass,
                          sd.verdict == SubdiffVerdict::pass ? 1.0 : -sd.q.back()});
  const Verdict kl = k_lipschitz_check(f, zbar, ell, e, radius, k, opts, tol);
  const bool lip = kl.hypotheses_hold() && kl.conclusion.holds;
  v.hypotheses.push_back({"K_lipschitz", lip, kl.conclusion.margin});
  const bool normal = k.pointed() && !k.is_zero();
  v.hypotheses.push_back({"K_normal", normal, normal ? 1.0 : -1.0});
  v.hypotheses.push_back({"values_compact", true, 1.0});
  if (!normal) {
    v.notes.push_back("K is not pointed: no normality constant");
    v.finalize(tol);
    return v;
  }
  const NormalityEstimate alpha = normality_constant_estimate(k, NormId::l2, 256, opts.seed);
  v.notes.push_back("alpha estimate " + std::to_string(alpha.alpha) + " from " + std::to_string(alpha.samples) +
                    " samples (a lower bound on the true constant)");

  const Eigen::Index m = zbar.size();
  PointList cand = sphere_directions(m, std::max(16, opts.samples), opts.seed);
  // Exact preimages of the cone generators.
  const Eigen::CompleteOrthogonalDecomposition<Mat> cod(t.matrix);
  for (const auto& g : k.generators()) {
    const Vec u = cod.solve(g);
    if (u.norm() > 1e-12 && (t.matrix * u - g).norm() <= 1e-9 * std::max(1.0, g.norm())) {
      cand.push_back(u.normalized());
      cand.push_back(-u.normalized());
    }
  }
  const double bound = alpha.alpha * ell * e.norm();
  int used = 0;
  v.conclusion.holds = true;
  v.conclusion.margin = inf();
  for (const auto& u : cand) {
    const Vec tu = t.matrix * u;
    if (!k.contains(tu, false, tol).inside && !k.contains(-tu, false, tol).inside) continue;
    ++used;
    const double slack = bound - tu.norm();
    if (slack < v.conclusion.margin) {
      v.conclusion.margin = slack;
      v.conclusion.witness = u;
    }
    v.conclusion.holds = v.conclusion.holds && slack >= -tol.feas_tol;
  }
  v.notes.push_back(std::to_string(used) + " unit directions with Tu in K u -K");
  if (used == 0) v.notes.push_back("no direction found: the bound holds vacuously on the samples");
  v.finalize(tol);
  return v;
}

}  // namespace conic
