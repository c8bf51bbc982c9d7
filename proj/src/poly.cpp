#include "conic/poly.hpp"

#include <cmath>

namespace conic {

Poly::Poly(Eigen::Index dim, std::vector<Term> terms) : dim_(dim), terms_(std::move(terms)) {
  for (const auto& t : terms_) {
    if (t.p.size() != dim_) throw Error(ErrorCode::DimensionMismatch, "poly term exponent length");
    if ((t.p.array() < 0).any()) throw Error(ErrorCode::InvalidArgument, "negative poly exponent");
    if (!std::isfinite(t.c)) throw Error(ErrorCode::InvalidArgument, "non-finite poly coefficient");
  }
}

Poly Poly::constant(Eigen::Index dim, double c) { return Poly(dim, {{c, Eigen::VectorXi::Zero(dim)}}); }

Poly Poly::affine(const Vec& a, double c) {
  const Eigen::Index n = a.size();
  std::vector<Term> ts{{c, Eigen::VectorXi::Zero(n)}};
  for (Eigen::Index i = 0; i < n; ++i) {
    if (a[i] == 0.0) continue;
    Eigen::VectorXi p = Eigen::VectorXi::Zero(n);
    p[i] = 1;
    ts.push_back({a[i], p});
  }
  return Poly(n, std::move(ts));
}

Poly Poly::monomial(Eigen::Index dim, Eigen::Index i, int k, double c) {
  Eigen::VectorXi p = Eigen::VectorXi::Zero(dim);
  p[i] = k;
  return Poly(dim, {{c, p}});
}

double Poly::operator()(const Vec& z) const {
  require_dim(z, dim_, "poly eval");
  double s = 0.0;
  for (const auto& t : terms_) {
    double m = t.c;
    for (Eigen::Index j = 0; j < dim_; ++j) {
      if (t.p[j] > 0) m *= std::pow(z[j], t.p[j]);
    }
    s += m;
  }
  return s;
}

Vec Poly::gradient(const Vec& z) const {
  require_dim(z, dim_, "poly gradient");
  Vec g = Vec::Zero(dim_);
  for (const auto& t : terms_) {
    for (Eigen::Index i = 0; i < dim_; ++i) {
      if (t.p[i] == 0) continue;
      double m = t.c * t.p[i] * std::pow(z[i], t.p[i] - 1);
      for (Eigen::Index j = 0; j < dim_; ++j) {
        if (j != i && t.p[j] > 0) m *= std::pow(z[j], t.p[j]);
      }
      g[i] += m;
    }
  }
  return g;
}

Poly Poly::operator+(const Poly& o) const {
  if (o.dim_ != dim_) throw Error(ErrorCode::DimensionMismatch, "poly sum dims");
  std::vector<Term> ts = terms_;
  ts.insert(ts.end(), o.terms_.begin(), o.terms_.end());
  return Poly(dim_, std::move(ts));
}

Poly Poly::operator*(double s) const {
  std::vector<Term> ts = terms_;
  for (auto& t : ts) t.c *= s;
  return Poly(dim_, std::move(ts));
}

}  // namespace conic
