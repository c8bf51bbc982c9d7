#pragma once

#include "conic/genset.hpp"
#include "conic/verdict.hpp"

#include <array>

namespace conic {

enum class ExcessMethod { vertex_max, definition_scan };

struct ExcessReport {
  double value = 0.0;  // +infinity allowed
  /// Upper bound; equals value unless a definition scan left a gap.
  double upper = 0.0;
  Vec attained_at;
  ExcessMethod method = ExcessMethod::vertex_max;

  bool exact() const { return upper == value; }
};

const char* to_string(ExcessMethod m);

struct ExcessOptions {
  int scan_samples = 512;
  std::uint64_t seed = 0x5eed;
};

/// e(A, B) = sup_{x in A} d(x, B). Exact for convex B and for singleton parts
/// of A; union targets against non-singleton parts fall back to a sampled scan
/// bracketed by the best single-component excess.
ExcessReport excess(const UnionSet& a, const UnionSet& b, const ExcessOptions& opts = {},
                    const Tolerance& tol = default_tolerance());

/// The five expressions of the conic excess identity, in order:
/// e(A,B+K), e(A+K,B+K), e(A,cl(B+K)), e(A,cl B+K), e(cl A+K,cl B+K).
struct ConicExcess {
  ExcessReport report;  // e(A, B+K)
  std::array<double, 5> chain{};
  bool chain_consistent = true;
};

ConicExcess conic_excess(const UnionSet& a, const UnionSet& b, const PolyhedralCone& k,
                         bool self_check = false, const ExcessOptions& opts = {},
                         const Tolerance& tol = default_tolerance());

/// max(e(A,B), e(B,A)).
ExcessReport hausdorff(const UnionSet& a, const UnionSet& b, const ExcessOptions& opts = {},
                       const Tolerance& tol = default_tolerance());

enum class InvarianceVariant { open_ball, closed_ball };

/// e(A, B+K) = e(A+C, B+K+C) under the variant's hypotheses.
Verdict excess_invariance_check(const UnionSet& a, const UnionSet& b, const UnionSet& c,
                                const PolyhedralCone& k, InvarianceVariant variant,
                                const ExcessOptions& opts = {},
                                const Tolerance& tol = default_tolerance());

}  // namespace conic
