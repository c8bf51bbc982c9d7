#pragma once

#include "conic/excess.hpp"
#include "conic/poly.hpp"
#include "conic/verdict.hpp"

#include <functional>

namespace conic {

/// z -> prod_i [lower_i(z), upper_i(z)] on R^m, range dim <= 4. The box is the
/// sampling domain; lower <= upper is checked on it at construction.
class BoxMap {
 public:
  BoxMap() = default;
  BoxMap(std::vector<Poly> lower, std::vector<Poly> upper, Vec box_lo, Vec box_hi,
         const Tolerance& tol = default_tolerance());

  Eigen::Index domain_dim() const { return lo_.size(); }
  Eigen::Index range_dim() const { return static_cast<Eigen::Index>(lower_.size()); }
  const std::vector<Poly>& lower() const { return lower_; }
  const std::vector<Poly>& upper() const { return upper_; }
  const Vec& box_lo() const { return lo_; }
  const Vec& box_hi() const { return hi_; }

  Vec lower_at(const Vec& z) const;
  Vec upper_at(const Vec& z) const;
  /// F(z) as a GenSet (box vertices, no rays).
  GenSet value(const Vec& z, NormId norm = NormId::l2) const;

  /// Pointwise sum: bounds add.
  BoxMap operator+(const BoxMap& o) const;

 private:
  std::vector<Poly> lower_, upper_;
  Vec lo_, hi_;
};

struct LinMap {
  Mat matrix;  // n x m
  Vec operator()(const Vec& z) const { return matrix * z; }
};

/// F(z) + K: box vertices with K's generators as rays.
GenSet epi_eval(const BoxMap& f, const Vec& z, const PolyhedralCone& k, NormId norm = NormId::l2);

enum class SubdiffDirection { lower, upper };
enum class SubdiffVerdict { pass, fail, inconclusive };

const char* to_string(SubdiffDirection d);
const char* to_string(SubdiffVerdict v);

struct SubdiffOptions {
  double delta0 = 0.5;
  int levels = 9;       // delta_k = 2^-k delta0, k = 0..levels-1
  int directions = 64;  // low-discrepancy on the sphere, plus +-axes
  double eps_accept = 1e-3;
  double eps_reject = 1e-1;
  std::uint64_t seed = 0x5d1ff;
  NormId norm = NormId::l2;  // range norm
};

struct SubdiffReport {
  SubdiffDirection direction = SubdiffDirection::lower;
  std::vector<double> radii;
  std::vector<double> q;        // worst excess ratio per radius
  std::vector<double> q_upper;  // same with scan brackets' upper ends (equal when exact)
  SubdiffVerdict verdict = SubdiffVerdict::inconclusive;
  Vec witness;  // worst z at the smallest radius
  double eps_accept = 0.0, eps_reject = 0.0;
  int samples = 0;  // directions per radius
  std::string note;
};

/// Sampled test of the Frechet (lower) or upper subdifferential limit ratio.
/// Pass is evidence only; fail comes with a witness.
SubdiffReport subdiff_test(const BoxMap& f, const Vec& zbar, const LinMap& t, const PolyhedralCone& k,
                           SubdiffDirection dir, const SubdiffOptions& opts = {},
                           const Tolerance& tol = default_tolerance());

/// Same test for an arbitrary epigraph-valued map z -> Epi(z).
SubdiffReport subdiff_test_map(const std::function<UnionSet(const Vec&)>& epi, const Vec& zbar,
                               const LinMap& t, SubdiffDirection dir, const SubdiffOptions& opts = {},
                               const Tolerance& tol = default_tolerance(), Exec exec = Exec::parallel);

/// The subdifferential of F + A equals that of F (A compact, cl F(zbar) K-convex).
Verdict subdiff_sum_invariance_test(const BoxMap& f, const UnionSet& a, const Vec& zbar, const LinMap& t,
                                    const PolyhedralCone& k, SubdiffDirection dir,
                                    const SubdiffOptions& opts = {},
                                    const Tolerance& tol = default_tolerance());

struct SampleOptions {
  int samples = 256;
  std::uint64_t seed = 0x11b;
};

/// F(z'') + ell |z'' - z'| e in F(z') + K for sampled z', z'' in the ball around zbar.
Verdict k_lipschitz_check(const BoxMap& f, const Vec& zbar, double ell, const Vec& e, double radius,
                          const PolyhedralCone& k, const SampleOptions& opts = {},
                          const Tolerance& tol = default_tolerance());

/// |Tu| <= alpha ell |e| for unit u with Tu in K u -K; alpha is the sampled
/// normality estimate. Gated on subdiff_test and k_lipschitz_check.
Verdict subgradient_bound_check(const BoxMap& f, const Vec& zbar, const LinMap& t, const PolyhedralCone& k,
                                double ell, const Vec& e, double radius, const SampleOptions& opts = {},
                                const Tolerance& tol = default_tolerance());

/// Deterministic unit directions in R^m: low-discrepancy points (Cranley-Patterson
/// rotated by seed) mapped to the sphere, followed by the +-axes.
PointList sphere_directions(Eigen::Index m, int count, std::uint64_t seed);

}  // namespace conic
