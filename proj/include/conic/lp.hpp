#pragma once

#include "conic/core.hpp"

namespace conic {

/// min c'x  s.t.  ineq_matrix x <= ineq_rhs,  eq_matrix x = eq_rhs,  x free.
/// Either constraint block may have zero rows; column counts must equal
/// objective.size().
struct LpProblem {
  Vec objective;
  Mat ineq_matrix;
  Vec ineq_rhs;
  Mat eq_matrix;
  Vec eq_rhs;

  Eigen::Index num_vars() const { return objective.size(); }
  void validate() const;
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  double value = 0.0;
  Vec x;
  // Prices at the optimum: c = A_ineq' * price_ineq + A_eq' * price_eq with
  // price_ineq <= 0, and value = b_ineq' * price_ineq + b_eq' * price_eq.
  Vec price_ineq;
  Vec price_eq;
  // Infeasible: y_ineq >= 0, A_ineq' y_ineq + A_eq' y_eq = 0, b' y < 0.
  Vec farkas_ineq;
  Vec farkas_eq;
  // Unbounded: feasible direction with negative objective slope.
  Vec ray;
  int iterations = 0;
};

LpResult solve_lp(const LpProblem& p, const Tolerance& tol = default_tolerance());

/// Builder helpers for the common "nonnegative variables" constraint rows.
struct LpBuilder {
  explicit LpBuilder(Eigen::Index nvars);

  void set_objective(Eigen::Index var, double coeff);
  void add_le(const Vec& row, double rhs);
  void add_eq(const Vec& row, double rhs);
  void add_nonneg(Eigen::Index var);
  LpProblem build() const;

  Eigen::Index nvars;
  Vec objective;
  std::vector<std::pair<Vec, double>> le_rows;
  std::vector<std::pair<Vec, double>> eq_rows;
};

}  // namespace conic
