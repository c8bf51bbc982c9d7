#pragma once

#include "conic/gerstewitz.hpp"
#include "conic/rng.hpp"
#include "conic/verdict.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>

namespace conic {

struct Certificate {
  enum class Kind { membership, separation };
  Kind kind = Kind::membership;

  // membership: x = sum lambda_i p_i + sum mu_j r_j + k + u with |u| <= radius
  Vec lambda, mu, k, ball_shift;
  double residual = 0.0;

  // separation: functionals x_1..x_d (original coordinates); the last one is
  // strict unless the chain ended on an empty level set.
  std::vector<Vec> chain;
  std::vector<Mat> bases;     // orthonormal basis of the subspace at each level
  std::vector<int> supports;  // number of B points surviving at each level
  double gap = 0.0;           // inf over conv(B)+K of y.z minus y.x, for single functionals
  bool strict = false;

  /// Levels visited, counting a terminal empty level.
  int levels() const { return static_cast<int>(supports.size()); }
};

/// x in cl conv(B) + K? Membership carries nonnegative coefficients; otherwise a
/// unit (dual-norm) functional y with y.x < inf over conv(B)+K, gap = distance.
Certificate certify_in_conv_plus_cone(const Vec& x, const UnionSet& b, const PolyhedralCone& k,
                                      const Tolerance& tol = default_tolerance());

/// Lexicographic separation: decides 0 in conv(B) + K for finite B by repeated
/// weak separation and restriction to the separator's kernel.
Certificate lex_separation_chain(const UnionSet& b, const PolyhedralCone& k,
                                 const Tolerance& tol = default_tolerance());

enum class LawId {
  radstrom_classic,
  conic_radstrom,
  solid_cancel,
  open_cancel,
  star_diff,
  order_insensitivity,
  nonconvex_rho,
  finite_dim,
};

const std::vector<LawId>& all_laws();
const char* to_string(LawId law);
LawId parse_law(const std::string& s);
/// Hypothesis names accepted by VerifyOptions::drop, plus the diagnostic "conv"
/// where the conclusion has a convex hull.
std::vector<std::string> law_hypotheses(LawId law);

struct LawInstance {
  std::map<std::string, UnionSet> sets;  // "A", "B", "C", "D"
  std::optional<PolyhedralCone> cone;
  std::optional<Vec> e;

  const UnionSet& set(const std::string& name) const;
  bool has(const std::string& name) const { return sets.count(name) > 0; }
};

struct VerifyOptions {
  std::set<std::string> drop;
  int samples = 64;
  std::uint64_t seed = 1;
};

/// Checks hypotheses and conclusion of one law. Inclusion hypotheses into a
/// target with open balls are checked strictly; conclusions on closures.
Verdict verify_law(LawId law, const LawInstance& inst, const VerifyOptions& opts = {},
                   const Tolerance& tol = default_tolerance());

struct GeneratorOptions {
  Eigen::Index dim = 2;
  double coord = 3.0;
  /// Hypotheses the generator need not enforce.
  std::set<std::string> relax;
};

/// Random instance for a law; constructive (hypotheses hold by construction)
/// unless relaxed. Deterministic in rng state.
LawInstance random_instance(LawId law, CounterRng& rng, const GeneratorOptions& opts);

struct FalsifyResult {
  bool found = false;
  int trial = -1;
  int trials_run = 0;
  int hypotheses_held = 0;  // trials whose checked hypotheses all held
  LawInstance instance;
  Verdict verdict;
};

/// Seeded counterexample search with `drop` unchecked. A hit needs the
/// remaining hypotheses to hold and the conclusion to fail by > 10 feas_tol.
/// The lowest failing trial index wins regardless of exec.
FalsifyResult falsify(LawId law, const std::set<std::string>& drop, int trials, std::uint64_t seed,
                      Eigen::Index dim, Exec exec = Exec::parallel,
                      const Tolerance& tol = default_tolerance());

struct SweepResult {
  int trials = 0;
  int hypotheses_held = 0;
  int inconsistent = 0;
  int first_inconsistent = -1;
};

/// Soundness sweep: constructive instances in dims 1..4, nothing dropped.
SweepResult soundness_sweep(LawId law, int trials, std::uint64_t seed, Exec exec = Exec::parallel,
                            const Tolerance& tol = default_tolerance());

}  // namespace conic
