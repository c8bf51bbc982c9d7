#include "conic/cancellation.hpp"

#include "conic/rng.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>
#include <optional>

namespace conic {

namespace {

Vec random_point(CounterRng& rng, Eigen::Index n, double lo, double hi) {
  Vec v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = rng.uniform(lo, hi);
  return v;
}

Vec random_direction(CounterRng& rng, Eigen::Index n) {
  Vec v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = rng.normal();
  return v.norm() > 1e-9 ? Vec(v.normalized()) : Vec(Vec::Unit(n, 0));
}

PolyhedralCone random_solid_cone(CounterRng& rng, Eigen::Index n) {
  if (rng.coin(0.4)) return PolyhedralCone::orthant(n);
  PointList g;
  for (Eigen::Index i = 0; i < n; ++i) g.push_back(Vec::Unit(n, i) + 0.4 * random_point(rng, n, -1, 1));
  const auto k = PolyhedralCone::from_generators(n, g);
  return k.solid() && k.pointed() ? k : PolyhedralCone::orthant(n);
}

PolyhedralCone random_cone(CounterRng& rng, Eigen::Index n) {
  const int pick = rng.index(4);
  if (pick == 0) return PolyhedralCone::zero(n);
  if (pick == 1) return PolyhedralCone::from_generators(n, {random_direction(rng, n)});
  return random_solid_cone(rng, n);
}

Vec random_in_cone(CounterRng& rng, const PointList& gens, Eigen::Index n) {
  Vec k = Vec::Zero(n);
  if (rng.coin(0.3)) return k;
  for (const auto& g : gens) k += rng.uniform(0.0, 1.5) * g;
  return k;
}

// a + c_i = c_sigma(i) + b_i + k_i, so {a} + C sits inside C + B + cone(gens).
struct Cycle {
  Vec a;
  PointList b, c;
};

Cycle make_cycle(CounterRng& rng, Eigen::Index n, double coord, int m, const PointList& gens,
                 const Vec& shift) {
  Cycle cy;
  cy.a = random_point(rng, n, -coord / 2, coord / 2);
  for (int i = 0; i < m; ++i) cy.c.push_back(random_point(rng, n, -coord, coord));
  std::vector<int> sigma(static_cast<std::size_t>(m));
  std::iota(sigma.begin(), sigma.end(), 0);
  if (m > 1) std::rotate(sigma.begin(), sigma.begin() + 1 + rng.index(m - 1), sigma.end());
  for (int i = 0; i < m; ++i) {
    const Vec k = random_in_cone(rng, gens, n) + shift;
    cy.b.push_back(cy.a + cy.c[static_cast<std::size_t>(i)] - cy.c[static_cast<std::size_t>(sigma[static_cast<std::size_t>(i)])] - k);
  }
  return cy;
}

UnionSet balls(const PointList& centers, double r, bool open) {
  std::vector<GenSet> comps;
  for (const auto& p : centers) comps.emplace_back(PointList{p}, PointList{}, r, open && r > 0.0);
  return UnionSet(comps);
}

UnionSet with_rays(const UnionSet& s, const PointList& rays) {
  std::vector<GenSet> comps;
  for (const auto& g : s.components()) comps.push_back(g.with_rays(rays));
  return UnionSet(comps);
}

PointList random_points(CounterRng& rng, Eigen::Index n, double coord, int count) {
  PointList out;
  for (int i = 0; i < count; ++i) out.push_back(random_point(rng, n, -coord, coord));
  return out;
}

}  // namespace

LawInstance random_instance(LawId law, CounterRng& rng, const GeneratorOptions& opts) {
  const Eigen::Index n = opts.dim;
  const double coord = opts.coord;
  auto relaxed = [&](const char* h) { return opts.relax.count(h) > 0; };
  const bool constructive = !relaxed("inclusion");

  LawInstance inst;
  const bool need_solid = law == LawId::solid_cancel || law == LawId::nonconvex_rho;
  PolyhedralCone k = law == LawId::radstrom_classic ? PolyhedralCone::zero(n)
                     : need_solid && !relaxed("K_solid") ? random_solid_cone(rng, n)
                                                         : random_cone(rng, n);
  inst.cone = k;

  // Rays for C when its boundedness is relaxed; the cycle may use them as k_i.
  PointList c_rays;
  const bool c_unbounded = relaxed("C_bounded") || relaxed("C_compact") || relaxed("C_K_bounded");
  if (c_unbounded && rng.coin(0.8)) c_rays.push_back(random_direction(rng, n));
  PointList cycle_gens = k.generators();
  cycle_gens.insert(cycle_gens.end(), c_rays.begin(), c_rays.end());

  const int m = 1 + rng.index(law == LawId::star_diff ? 2 : 4);
  Vec shift = Vec::Zero(n);
  if (law == LawId::solid_cancel && k.solid()) shift = rng.uniform(0.05, 0.5) * k.interior_direction();

  double r = rng.coin(0.5) ? rng.uniform(0.05, 0.5) : 0.0;
  bool open = false;
  switch (law) {
    case LawId::radstrom_classic:
      open = relaxed("B_closed") && r > 0.0;
      break;
    case LawId::open_cancel:
    case LawId::star_diff:
    case LawId::order_insensitivity:
      open = !relaxed("B_open") || rng.coin(0.5);
      if (open && r == 0.0) r = rng.uniform(0.05, 0.5);
      break;
    case LawId::nonconvex_rho:
      open = relaxed("B_compact") && r > 0.0;
      break;
    default:
      break;
  }

  if (law == LawId::star_diff) {
    const Vec a = random_point(rng, n, -coord / 2, coord / 2);
    const PointList d = random_points(rng, n, coord, m);
    PointList c = d;
    if (m == 1 || rng.coin(0.5)) {
      const Vec s = random_point(rng, n, -coord / 2, coord / 2);
      for (const auto& p : d) c.push_back(p + s);
    }
    PointList bs;
    for (const auto& p : c) {
      const Vec& q = d[static_cast<std::size_t>(rng.index(static_cast<int>(d.size())))];
      bs.push_back(a + p - q - random_in_cone(rng, k.generators(), n));
    }
    if (!constructive) bs = random_points(rng, n, coord, 1 + rng.index(4));
    inst.sets["A"] = UnionSet::finite({a});
    inst.sets["B"] = balls(bs, r, open);
    inst.sets["C"] = UnionSet::finite(c);
    UnionSet dd = UnionSet::finite(d);
    if (relaxed("D_compact") && rng.coin(0.8)) dd = with_rays(dd, {random_direction(rng, n)});
    inst.sets["D"] = dd;
    return inst;
  }

  if (law == LawId::order_insensitivity && !relaxed("B_convex")) {
    // A convex open B with A sticking out; nothing constructive to enforce.
    PointList core = random_points(rng, n, coord / 2, 1 + rng.index(3));
    inst.sets["B"] = UnionSet(GenSet(core, {}, r, open));
    inst.sets["A"] = UnionSet::finite(random_points(rng, n, coord, 1 + rng.index(2)));
    UnionSet c = UnionSet::finite(random_points(rng, n, coord, 1 + rng.index(3)));
    if (!c_rays.empty()) c = with_rays(c, c_rays);
    inst.sets["C"] = c;
    return inst;
  }

  Cycle cy = make_cycle(rng, n, coord, m, cycle_gens, shift);
  if (!constructive) cy.b = random_points(rng, n, coord, 1 + rng.index(4));
  if (cy.b.size() < 4 && rng.coin(0.3)) cy.b.push_back(random_point(rng, n, -coord, coord));

  UnionSet b = balls(cy.b, r, open);
  if (law == LawId::radstrom_classic && !relaxed("B_convex")) b = UnionSet(GenSet(cy.b, {}, r, open));
  if (law == LawId::nonconvex_rho && relaxed("B_compact") && rng.coin(0.5)) {
    b = with_rays(b, {random_direction(rng, n)});
  }
  inst.sets["A"] = UnionSet::finite({cy.a});
  inst.sets["B"] = b;
  UnionSet c = UnionSet::finite(cy.c);
  if (!c_rays.empty()) c = with_rays(c, c_rays);
  if (law == LawId::open_cancel || law == LawId::finite_dim || law == LawId::solid_cancel) {
    if (relaxed("C_compact") && c_rays.empty() && rng.coin(0.5)) c = balls(cy.c, rng.uniform(0.1, 0.5), true);
  }
  // NONCONVEX_RHO samples C itself unless the interval hypothesis is relaxed.
  if (law != LawId::nonconvex_rho || relaxed("C_in_interval")) inst.sets["C"] = c;
  if (law == LawId::nonconvex_rho && rng.coin(0.3)) inst.e = k.solid() ? k.interior_direction() : Vec::Unit(n, 0);
  return inst;
}

namespace {

struct Trial {
  bool ran = false;
  bool held = false;
  bool hit = false;
  LawInstance inst;
  Verdict verdict;
};

Trial run_trial(LawId law, const std::set<std::string>& drop, std::uint64_t seed, int i, Eigen::Index dim,
                const Tolerance& tol, double hit_margin) {
  Trial t;
  CounterRng rng = CounterRng::derive(seed, static_cast<std::uint64_t>(i));
  GeneratorOptions go;
  go.dim = dim;
  go.relax = drop;
  try {
    t.inst = random_instance(law, rng, go);
    VerifyOptions vo;
    vo.drop = drop;
    vo.samples = 16;
    vo.seed = rng.next_u64();
    t.verdict = verify_law(law, t.inst, vo, tol);
  } catch (const Error&) {
    return t;  // e.g. a cone that is numerically degenerate; the trial does not count
  }
  t.ran = true;
  t.held = t.verdict.hypotheses_hold();
  t.hit = t.held && !t.verdict.conclusion.holds && t.verdict.conclusion.margin < -hit_margin;
  return t;
}

}  // namespace

FalsifyResult falsify(LawId law, const std::set<std::string>& drop, int trials, std::uint64_t seed,
                      Eigen::Index dim, Exec exec, const Tolerance& tol) {
  for (const auto& h : drop) {
    const auto hs = law_hypotheses(law);
    if (std::find(hs.begin(), hs.end(), h) == hs.end()) {
      throw Error(ErrorCode::InvalidArgument, "law " + std::string(to_string(law)) + " has no hypothesis " + h);
    }
  }
  const double hit_margin = 10.0 * tol.feas_tol;
  std::vector<Trial> results(static_cast<std::size_t>(std::max(0, trials)));
  std::atomic<int> best{trials};

  if (exec == Exec::serial) {
    for (int i = 0; i < trials; ++i) {
      results[static_cast<std::size_t>(i)] = run_trial(law, drop, seed, i, dim, tol, hit_margin);
      if (results[static_cast<std::size_t>(i)].hit) {
        best = i;
        break;
      }
    }
  } else {
#pragma omp parallel for schedule(dynamic, 4)
    for (int i = 0; i < trials; ++i) {
      if (i > best.load(std::memory_order_relaxed)) continue;
      Trial t = run_trial(law, drop, seed, i, dim, tol, hit_margin);
      if (t.hit) {
        int cur = best.load();
        while (i < cur && !best.compare_exchange_weak(cur, i)) {
        }
      }
      results[static_cast<std::size_t>(i)] = std::move(t);
    }
  }

  FalsifyResult out;
  const int last = std::min(best.load(), trials - 1);
  for (int i = 0; i <= last; ++i) {
    const Trial& t = results[static_cast<std::size_t>(i)];
    if (t.held) ++out.hypotheses_held;
  }
  out.trials_run = last + 1;
  if (best.load() < trials) {
    Trial& t = results[static_cast<std::size_t>(best.load())];
    out.found = true;
    out.trial = best.load();
    out.instance = std::move(t.inst);
    out.verdict = std::move(t.verdict);
  }
  return out;
}

SweepResult soundness_sweep(LawId law, int trials, std::uint64_t seed, Exec exec, const Tolerance& tol) {
  std::vector<Trial> results(static_cast<std::size_t>(std::max(0, trials)));
  auto one = [&](int i) {
    const Eigen::Index dim = 1 + i % 4;
    Trial t = run_trial(law, {}, seed, i, dim, tol, 2.0 * tol.feas_tol);
    t.hit = t.ran && !t.verdict.consistent;
    results[static_cast<std::size_t>(i)] = std::move(t);
  };
  if (exec == Exec::serial) {
    for (int i = 0; i < trials; ++i) one(i);
  } else {
#pragma omp parallel for schedule(dynamic, 4)
    for (int i = 0; i < trials; ++i) one(i);
  }
  SweepResult out;
  out.trials = trials;
  for (int i = 0; i < trials; ++i) {
    const Trial& t = results[static_cast<std::size_t>(i)];
    if (t.held) ++out.hypotheses_held;
    if (t.hit) {
      ++out.inconsistent;
      if (out.first_inconsistent < 0) out.first_inconsistent = i;
    }
  }
  return out;
}

}  // namespace conic
