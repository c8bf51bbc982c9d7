#pragma once

#include "conic/core.hpp"

#include <cstdint>
#include <string>

namespace conic {

struct HypothesisCheck {
  std::string name;
  bool holds = false;
  double margin = 0.0;  // positive: holds with room
  bool dropped = false;  // evaluated but ignored by hypotheses_hold
};

struct Conclusion {
  bool holds = false;
  double margin = 0.0;
  Vec witness;
};

/// Outcome of checking one implication "hypotheses => conclusion".
struct Verdict {
  std::string law;
  std::vector<HypothesisCheck> hypotheses;
  Conclusion conclusion;
  bool consistent = true;
  std::uint64_t rng_seed = 0;
  std::vector<std::string> notes;

  bool hypotheses_hold() const;
  /// consistent = !(all hypotheses hold && conclusion margin < -2 feas_tol).
  void finalize(const Tolerance& tol = default_tolerance());
};

}  // namespace conic
