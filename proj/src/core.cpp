#include "conic/core.hpp"
#include "conic/verdict.hpp"

namespace conic {

std::string_view to_string(NormId n) {
  switch (n) {
    case NormId::l2: return "l2";
    case NormId::l1: return "l1";
    case NormId::linf: return "linf";
  }
  return "?";
}

NormId parse_norm(std::string_view s) {
  if (s == "l2") return NormId::l2;
  if (s == "l1") return NormId::l1;
  if (s == "linf") return NormId::linf;
  throw Error(ErrorCode::ParseError, "unknown norm '" + std::string(s) + "'");
}

double norm(const Vec& x, NormId n) {
  switch (n) {
    case NormId::l2: return x.norm();
    case NormId::l1: return x.lpNorm<1>();
    case NormId::linf: return x.size() == 0 ? 0.0 : x.lpNorm<Eigen::Infinity>();
  }
  return 0.0;
}

double dual_norm(const Vec& x, NormId n) {
  switch (n) {
    case NormId::l2: return x.norm();
    case NormId::l1: return x.size() == 0 ? 0.0 : x.lpNorm<Eigen::Infinity>();
    case NormId::linf: return x.lpNorm<1>();
  }
  return 0.0;
}

void Tolerance::validate() const {
  if (!(feas_tol > 0 && opt_tol > 0 && strict_margin > 0)) {
    throw Error(ErrorCode::InvalidArgument, "tolerances must be strictly positive");
  }
  if (strict_margin < feas_tol) {
    throw Error(ErrorCode::InvalidArgument, "strict_margin must be >= feas_tol");
  }
}

const Tolerance& default_tolerance() {
  static const Tolerance tol{};
  return tol;
}

std::string_view to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NumericalFailure: return "NumericalFailure";
    case ErrorCode::EmptyPointList: return "EmptyPointList";
    case ErrorCode::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorCode::DegenerateCone: return "DegenerateCone";
    case ErrorCode::NotSolid: return "NotSolid";
    case ErrorCode::PointNotInSet: return "PointNotInSet";
    case ErrorCode::UnsupportedSet: return "UnsupportedSet";
    case ErrorCode::ComponentBlowup: return "ComponentBlowup";
    case ErrorCode::MixedRadii: return "MixedRadii";
    case ErrorCode::Unbounded: return "Unbounded";
    case ErrorCode::HypothesisFailed: return "HypothesisFailed";
    case ErrorCode::RangeDimTooLarge: return "RangeDimTooLarge";
    case ErrorCode::MissingObject: return "MissingObject";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace conic

namespace conic {

bool Verdict::hypotheses_hold() const {
  for (const auto& h : hypotheses) {
    if (!h.dropped && !h.holds) return false;
  }
  return true;
}

void Verdict::finalize(const Tolerance& tol) {
  consistent = !(hypotheses_hold() && !conclusion.holds && conclusion.margin < -2.0 * tol.feas_tol);
}

}  // namespace conic
