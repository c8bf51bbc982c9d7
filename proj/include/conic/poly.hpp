#pragma once

#include "conic/core.hpp"

namespace conic {

/// Multivariate polynomial: sum of c * prod z_j^p_j.
class Poly {
 public:
  struct Term {
    double c = 0.0;
    Eigen::VectorXi p;
  };

  Poly() = default;
  Poly(Eigen::Index dim, std::vector<Term> terms);

  static Poly constant(Eigen::Index dim, double c);
  /// a.z + c
  static Poly affine(const Vec& a, double c = 0.0);
  /// c * z_i^k
  static Poly monomial(Eigen::Index dim, Eigen::Index i, int k, double c = 1.0);

  Eigen::Index dim() const { return dim_; }
  const std::vector<Term>& terms() const { return terms_; }

  double operator()(const Vec& z) const;
  Vec gradient(const Vec& z) const;

  Poly operator+(const Poly& o) const;
  Poly operator*(double s) const;

 private:
  Eigen::Index dim_ = 0;
  std::vector<Term> terms_;
};

}  // namespace conic
