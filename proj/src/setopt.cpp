#include "conic/setopt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace conic {

namespace {

double inf() { return std::numeric_limits<double>::infinity(); }

// All compositions of n into k nonnegative parts.
void compositions(int n, int k, std::vector<int>& cur, const std::function<void(const std::vector<int>&)>& emit) {
  if (static_cast<int>(cur.size()) == k - 1) {
    cur.push_back(n);
    emit(cur);
    cur.pop_back();
    return;
  }
  for (int i = 0; i <= n; ++i) {
    cur.push_back(i);
    compositions(n - i, k, cur, emit);
    cur.pop_back();
  }
}

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

bool in_m(const GenSet& m, const Vec& z, const Tolerance& tol) { return m.project_core(z, tol).distance <= tol.feas_tol; }

}  // namespace

PointList sample_set(const GenSet& m, const Vec& zbar, int samples, std::uint64_t seed, int grid_max) {
  const PointList& p = m.points();
  const PointList& r = m.rays();
  PointList out{zbar};
  out.insert(out.end(), p.begin(), p.end());
  const int np = static_cast<int>(p.size());
  const int budget = std::min(grid_max, std::max(1, samples));
  // Largest lattice resolution that fits the budget.
  int res = 1;
  while (res < 1000 && binom(res + 1 + np - 1, np - 1) <= budget) ++res;
  if (np > 1) {
    std::vector<int> cur;
    compositions(res, np, cur, [&](const std::vector<int>& w) {
      Vec z = Vec::Zero(m.dim());
      for (int i = 0; i < np; ++i) z += (static_cast<double>(w[static_cast<std::size_t>(i)]) / res) * p[static_cast<std::size_t>(i)];
      out.push_back(z);
    });
  }
  for (const auto& ray : r) {
    for (double t : {0.25, 1.0, 4.0}) out.push_back(zbar + t * ray);
  }
  CounterRng rng(seed);
  for (int s = 0; s < std::max(1, samples / 4); ++s) {
    Vec z = Vec::Zero(m.dim());
    double wsum = 0.0;
    std::vector<double> w(static_cast<std::size_t>(np));
    for (auto& wi : w) {
      wi = -std::log(1.0 - rng.uniform());
      wsum += wi;
    }
    for (int i = 0; i < np; ++i) z += (w[static_cast<std::size_t>(i)] / wsum) * p[static_cast<std::size_t>(i)];
    for (const auto& ray : r) z += rng.uniform(0.0, 4.0) * ray;
    out.push_back(z);
  }
  return out;
}

namespace {

struct SharpScan {
  bool holds = true;
  double margin = inf();
  Vec witness;
  int samples = 0;
};

SharpScan scan_sharp(const SharpInstance& inst, const PointList& zs, const Tolerance& tol) {
  SharpScan out;
  const UnionSet at_bar(inst.f.value(inst.zbar));
  const Vec shift = inst.k.interior_direction();
  InclusionOptions io;
  io.interior_shift = shift;
  for (const auto& z : zs) {
    const double d = (z - inst.zbar).norm();
    if (inst.radius && d > *inst.radius) continue;
    ++out.samples;
    const GenSet target = epi_eval(inst.f, z, inst.k).translated(-inst.mu * d * inst.e);
    const Inclusion inc = includes(at_bar, target, io, tol);
    // F(zbar) inside the open target refutes sharpness at z.
    const double slack = -inc.margin;
    if (slack < out.margin) {
      out.margin = slack;
      out.witness = z;
    }
    out.holds = out.holds && !inc.holds;
  }
  return out;
}

void sharp_hypotheses(Verdict& v, const SharpInstance& inst, const Tolerance& tol) {
  const bool zin = in_m(inst.m, inst.zbar, tol);
  v.hypotheses.push_back({"zbar_in_M", zin, zin ? 1.0 : -1.0});
  v.hypotheses.push_back({"mu_positive", inst.mu > 0.0, inst.mu});
  const bool ein = inst.e.norm() > 0.0 && inst.k.contains(inst.e, false, tol).inside;
  v.hypotheses.push_back({"e_in_K_nonzero", ein, ein ? 1.0 : -1.0});
  v.hypotheses.push_back({"K_solid", inst.k.solid(), inst.k.solid() ? 1.0 : -1.0});
  if (ein && inst.k.solid() && !inst.k.contains(inst.e, true, tol).inside) {
    v.notes.push_back("warning: e is in K but not in int K");
  }
}

}  // namespace

Verdict sharp_weak_min_check(const SharpInstance& inst, const SampleOptions& opts, const Tolerance& tol) {
  Verdict v;
  v.law = "SHARP_WEAK_MIN";
  v.rng_seed = opts.seed;
  sharp_hypotheses(v, inst, tol);
  if (!inst.k.solid()) {
    v.conclusion.holds = false;
    v.conclusion.margin = 0.0;
    v.finalize(tol);
    return v;
  }
  const PointList zs = sample_set(inst.m, inst.zbar, opts.samples, opts.seed);
  const SharpScan s = scan_sharp(inst, zs, tol);
  v.conclusion.holds = s.holds;
  v.conclusion.margin = s.margin;
  v.conclusion.witness = s.witness;
  v.notes.push_back(std::to_string(s.samples) + " sampled z in M; pass is evidence, fail is a refutation");
  v.finalize(tol);
  return v;
}

bool tangent_condition_holds(const SharpInstance& inst, const LinMap& t, const Vec& u, double* slack,
                             const Tolerance& tol) {
  const Vec x = inst.mu * u.norm() * inst.e - t(u);
  const ConeMembership cm = inst.k.contains(x, true, tol);
  if (slack != nullptr) *slack = -cm.margin;
  return !cm.inside;
}

Verdict necessary_condition_check(const SharpInstance& inst, const LinMap& t, const SampleOptions& opts,
                                  const SubdiffOptions& sopts, const Tolerance& tol) {
  Verdict v;
  v.law = "SHARP_NECESSARY_CONDITION";
  v.rng_seed = opts.seed;
  const Verdict sharp = sharp_weak_min_check(inst, opts, tol);
  const bool is_sharp = sharp.hypotheses_hold() && sharp.conclusion.holds;
  v.hypotheses.push_back({"sharp_weak_min", is_sharp, sharp.conclusion.margin});
  const SubdiffReport up = subdiff_test(inst.f, inst.zbar, t, inst.k, SubdiffDirection::upper, sopts, tol);
  const bool gate = up.verdict == SubdiffVerdict::pass;
  v.hypotheses.push_back({"T_upper_subgradient", gate, gate ? 1.0 : -up.q.back()});
  v.notes.push_back(std::string("upper subdifferential test: ") + to_string(up.verdict));

  const PolyhedralCone tc = tangent_cone(inst.m, inst.zbar, tol);
  PointList us{Vec::Zero(inst.zbar.size())};
  us.insert(us.end(), tc.generators().begin(), tc.generators().end());
  CounterRng rng(opts.seed);
  for (int s = 0; s < opts.samples && !tc.generators().empty(); ++s) {
    Vec u = Vec::Zero(inst.zbar.size());
    for (const auto& g : tc.generators()) u += rng.uniform() * g;
    if (u.norm() > 1e-12) us.push_back(u.normalized());
  }
  v.conclusion.holds = true;
  v.conclusion.margin = inf();
  for (const auto& u : us) {
    double slack = 0.0;
    const bool ok = tangent_condition_holds(inst, t, u, &slack, tol);
    if (slack < v.conclusion.margin) {
      v.conclusion.margin = slack;
      v.conclusion.witness = u;
    }
    v.conclusion.holds = v.conclusion.holds && ok;
  }
  v.notes.push_back(std::to_string(us.size()) + " tangent directions");
  v.finalize(tol);
  return v;
}

Verdict stability_check(const StabilityInstance& inst, const SampleOptions& opts, const Tolerance& tol) {
  Verdict v;
  v.law = "STABILITY";
  v.rng_seed = opts.seed;
  const bool lin = inst.ell > 0.0 && inst.ell < inst.mu;
  v.hypotheses.push_back({"L_in_0_mu", lin, std::min(inst.ell, inst.mu - inst.ell)});
  v.hypotheses.push_back({"eps_positive", inst.eps > 0.0, inst.eps});
  const bool eint = inst.k.solid() && inst.k.contains(inst.e, true, tol).inside;
  v.hypotheses.push_back({"e_in_int_K", eint, eint ? 1.0 : -1.0});
  const bool zin = in_m(inst.m, inst.zbar, tol) && in_m(inst.m, inst.z_eps, tol);
  v.hypotheses.push_back({"points_in_M", zin, zin ? 1.0 : -1.0});

  SharpInstance sh{inst.f, inst.m, inst.zbar, inst.mu, inst.e, inst.k, std::nullopt};
  const Verdict sharp = sharp_weak_min_check(sh, opts, tol);
  v.hypotheses.push_back({"sharp_min", sharp.hypotheses_hold() && sharp.conclusion.holds, sharp.conclusion.margin});

  const PointList zs = sample_set(inst.m, inst.zbar, opts.samples, opts.seed ^ 0x57ab);
  const GenSet h_bar = epi_eval(inst.h, inst.zbar, inst.k);
  const BoxMap g = inst.f + inst.h;
  const GenSet g_eps = epi_eval(g, inst.z_eps, inst.k).translated(-inst.eps * inst.e);
  double m2 = inf(), m3 = inf();
  bool ok2 = true, ok3 = true;
  for (const auto& z : zs) {
    const double d = (z - inst.zbar).norm();
    const Inclusion i2 = includes(UnionSet(inst.h.value(z).translated(inst.ell * d * inst.e)), h_bar, {}, tol);
    m2 = std::min(m2, i2.margin);
    ok2 = ok2 && i2.holds;
    const Inclusion i3 = includes(UnionSet(g.value(z)), g_eps, {}, tol);
    m3 = std::min(m3, i3.margin);
    ok3 = ok3 && i3.holds;
  }
  v.hypotheses.push_back({"H_growth", ok2, m2});
  v.hypotheses.push_back({"z_eps_minimal", ok3, m3});

  const double bound = inst.eps / (inst.mu - inst.ell);
  const double dist = (inst.z_eps - inst.zbar).norm();
  v.conclusion.margin = lin ? bound - dist : 0.0;
  v.conclusion.holds = lin && dist <= bound + tol.feas_tol;
  v.conclusion.witness = inst.z_eps;
  v.notes.push_back("bound eps/(mu-L) = " + std::to_string(bound) + ", |z_eps - zbar| = " + std::to_string(dist));
  v.notes.push_back(std::to_string(zs.size()) + " sampled z in M");
  v.finalize(tol);
  return v;
}

StabilityInstance random_stability_instance(CounterRng& rng, Eigen::Index dim, Eigen::Index range) {
  const Eigen::Index m = dim, n = range;
  StabilityInstance s;
  const double reach = rng.uniform(0.5, 2.0);
  PointList verts{Vec::Zero(m)};
  for (Eigen::Index j = 0; j < m; ++j) verts.push_back(reach * Vec::Unit(m, j));
  s.m = GenSet(verts);
  s.zbar = Vec::Zero(m);
  s.k = PolyhedralCone::orthant(n);
  s.e = Vec(n);
  for (Eigen::Index i = 0; i < n; ++i) s.e[i] = rng.uniform(0.3, 1.0);
  s.e.normalize();
  s.mu = rng.uniform(0.5, 2.0);
  s.ell = s.mu * rng.uniform(0.1, 0.9);
  s.eps = rng.uniform(0.05, 0.5);

  // lower_i(z) - lower_i(0) >= mu e_i sum z >= mu e_i |z| on M, and the H part
  // decreases at most like L e_i |z|.
  std::vector<Poly> fl, fu, hl, hu;
  const Vec ones = Vec::Ones(m);
  for (Eigen::Index i = 0; i < n; ++i) {
    Poly f = Poly::affine(s.mu * s.e[i] * rng.uniform(1.0, 1.5) * ones, rng.uniform(-1, 1));
    Poly h = Poly::affine(-s.ell * s.e[i] / std::sqrt(static_cast<double>(m)) * ones, rng.uniform(-1, 1));
    for (Eigen::Index j = 0; j < m; ++j) {
      if (rng.coin(0.5)) f = f + Poly::monomial(m, j, 2, rng.uniform(0.0, 1.0));
      if (rng.coin(0.5)) h = h + Poly::monomial(m, j, 2, rng.uniform(0.0, 1.0));
    }
    fl.push_back(f);
    fu.push_back(f + Poly::constant(m, rng.uniform(0.0, 1.0)));
    hl.push_back(h);
    hu.push_back(h + Poly::constant(m, rng.uniform(0.0, 1.0)));
  }
  const Vec lo = Vec::Constant(m, -1.0), hi = Vec::Constant(m, reach + 1.0);
  s.f = BoxMap(fl, fu, lo, hi);
  s.h = BoxMap(hl, hu, lo, hi);

  // z_eps = t u on the boundary of (iii): g_i(t u) - g_i(0) <= eps e_i.
  Vec u = Vec::Zero(m);
  double wsum = 0.0;
  std::vector<double> w(static_cast<std::size_t>(m + 1));
  for (auto& wi : w) {
    wi = -std::log(1.0 - rng.uniform());
    wsum += wi;
  }
  for (Eigen::Index j = 0; j < m; ++j) u += (w[static_cast<std::size_t>(j + 1)] / wsum) * verts[static_cast<std::size_t>(j + 1)];
  auto feasible = [&](double t) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto ii = static_cast<std::size_t>(i);
      const double gz = fl[ii](t * u) + hl[ii](t * u);
      const double g0 = fl[ii](s.zbar) + hl[ii](s.zbar);
      if (gz - g0 > s.eps * s.e[i]) return false;
    }
    return true;
  };
  double lo_t = 0.0, hi_t = 1.0;
  if (feasible(1.0)) {
    lo_t = 1.0;
  } else {
    for (int it = 0; it < 100; ++it) {
      const double mid = 0.5 * (lo_t + hi_t);
      (feasible(mid) ? lo_t : hi_t) = mid;
    }
  }
  s.z_eps = lo_t * u;
  return s;
}

}  // namespace conic
