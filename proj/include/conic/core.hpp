#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace conic {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using PointList = std::vector<Vec>;

enum class NormId { l2, l1, linf };

std::string_view to_string(NormId n);
NormId parse_norm(std::string_view s);

double norm(const Vec& x, NormId n);
/// Dual norm: l2 is self-dual, l1 and linf are dual to each other.
double dual_norm(const Vec& x, NormId n);

/// Global tolerance policy. Every boundary comparison uses feas_tol; strict
/// ("open set", "int K") comparisons require at least strict_margin.
struct Tolerance {
  double feas_tol = 1e-9;
  double opt_tol = 1e-10;
  double strict_margin = 1e-7;

  void validate() const;
};

const Tolerance& default_tolerance();

enum class ErrorCode {
  DimensionMismatch,
  NumericalFailure,
  EmptyPointList,
  DimensionTooLarge,
  DegenerateCone,
  NotSolid,
  PointNotInSet,
  UnsupportedSet,
  ComponentBlowup,
  MixedRadii,
  Unbounded,
  HypothesisFailed,
  RangeDimTooLarge,
  MissingObject,
  ParseError,
  InvalidArgument,
};

std::string_view to_string(ErrorCode c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Selects the OpenMP kernel or the serial reference loop for sampling sweeps.
enum class Exec { serial, parallel };

inline void require_dim(const Vec& x, Eigen::Index d, const char* where) {
  if (x.size() != d) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(where) + ": expected dim " + std::to_string(d) + ", got " +
                    std::to_string(x.size()));
  }
}

}  // namespace conic
