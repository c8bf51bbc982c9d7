#pragma once

#include "conic/genset.hpp"

#include <string>

namespace conic {

/// phi(x) = inf{t : x in t e - K} = max_i y_i.x / y_i.e over the dual generators.
class Gerstewitz {
 public:
  /// NotSolid unless K is solid and e in int K.
  Gerstewitz(PolyhedralCone k, Vec e, const Tolerance& tol = default_tolerance());

  const PolyhedralCone& cone() const { return k_; }
  const Vec& e() const { return e_; }
  const std::vector<double>& denominators() const { return d_; }

  double operator()(const Vec& x) const;

 private:
  PolyhedralCone k_;
  Vec e_;
  std::vector<double> d_;
};

inline double gerstewitz(const Gerstewitz& g, const Vec& x) { return g(x); }

/// A unit vector u with |u| = 1 and y.u = |y|_* (the dual norm).
Vec dual_attainer(const Vec& y, NormId norm);

struct Minimum {
  double value = 0.0;
  Vec argmin;
  int component = -1;
  std::string warning;
};

/// min over S of y.x. Throws Unbounded (message names the ray) when some ray
/// has y.r < -feas_tol. With k given, warns when y is not in K+.
Minimum minimize_linear(const UnionSet& s, const Vec& y, const PolyhedralCone* k = nullptr,
                        const Tolerance& tol = default_tolerance());

/// min over S of phi. The ball term is handled exactly: min phi over
/// core + rB is the least t with d(t e, core + K) <= r, found by bisection
/// between LP bounds. Throws Unbounded when phi is unbounded below on S.
Minimum minimize_gerstewitz(const UnionSet& s, const Gerstewitz& g,
                            const Tolerance& tol = default_tolerance());

/// rho = m / 4 with m = min phi over B; HypothesisFailed when m <= strict_margin.
double compute_rho(const UnionSet& b, const Gerstewitz& g, const Tolerance& tol = default_tolerance());

}  // namespace conic
