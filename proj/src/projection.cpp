#include "conic/projection.hpp"

#include "conic/lp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace conic {

Vec project_to_simplex(const Vec& v) {
  const auto n = v.size();
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<>());
  double cum = 0.0;
  double theta = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    cum += u[static_cast<std::size_t>(k)];
    const double t = (cum - 1.0) / static_cast<double>(k + 1);
    if (u[static_cast<std::size_t>(k)] - t > 0) theta = t;
  }
  return (v.array() - theta).cwiseMax(0.0).matrix();
}

namespace {

Mat stack_columns(const PointList& points, const PointList& rays, Eigen::Index dim) {
  Mat g(dim, static_cast<Eigen::Index>(points.size() + rays.size()));
  Eigen::Index c = 0;
  for (const auto& p : points) g.col(c++) = p;
  for (const auto& r : rays) g.col(c++) = r;
  return g;
}

Projection finish(const Vec& x, const Mat& g, const Vec& w, Eigen::Index np, NormId norm) {
  Projection out;
  out.lambda = w.head(np);
  out.mu = w.tail(w.size() - np);
  out.nearest = g * w;
  out.distance = conic::norm(x - out.nearest, norm);
  return out;
}

// Primal active-set method: keeps a feasible (lambda, mu), solves the affine
// least-squares problem on the current support, and either steps back to the
// boundary of the support or adds the most violating generator.
Projection l2_active_set(const Vec& x, const PointList& points, const PointList& rays) {
  const auto dim = x.size();
  const auto np = static_cast<Eigen::Index>(points.size());
  const auto nr = static_cast<Eigen::Index>(rays.size());
  const Mat g = stack_columns(points, rays, dim);
  const Eigen::Index ntot = np + nr;

  Eigen::Index first = 0;
  double bestd = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < np; ++i) {
    const double d = (x - g.col(i)).squaredNorm();
    if (d < bestd) {
      bestd = d;
      first = i;
    }
  }
  Vec w = Vec::Zero(ntot);
  w[first] = 1.0;
  std::vector<char> in_support(static_cast<std::size_t>(ntot), 0);
  in_support[static_cast<std::size_t>(first)] = 1;

  const double scale = 1.0 + x.cwiseAbs().maxCoeff() + g.cwiseAbs().maxCoeff();
  const double add_tol = 1e-13 * scale * scale;
  const int cap = 100 * static_cast<int>(ntot) + 200;

  for (int iter = 0; iter < cap; ++iter) {
    std::vector<Eigen::Index> sp, sr;
    for (Eigen::Index i = 0; i < ntot; ++i) {
      if (!in_support[static_cast<std::size_t>(i)]) continue;
      (i < np ? sp : sr).push_back(i);
    }
    const Eigen::Index base = sp.front();
    const auto ncols = static_cast<Eigen::Index>(sp.size() - 1 + sr.size());
    Vec v = Vec::Zero(ntot);
    if (ncols == 0) {
      v[base] = 1.0;
    } else {
      Mat d(dim, ncols);
      std::vector<Eigen::Index> col_var;
      Eigen::Index c = 0;
      for (std::size_t k = 1; k < sp.size(); ++k) {
        d.col(c++) = g.col(sp[k]) - g.col(base);
        col_var.push_back(sp[k]);
      }
      for (auto k : sr) {
        d.col(c++) = g.col(k);
        col_var.push_back(k);
      }
      const Vec coef = d.completeOrthogonalDecomposition().solve(x - g.col(base));
      double lam_sum = 0.0;
      for (Eigen::Index k = 0; k < ncols; ++k) {
        v[col_var[static_cast<std::size_t>(k)]] = coef[k];
        if (col_var[static_cast<std::size_t>(k)] < np) lam_sum += coef[k];
      }
      v[base] = 1.0 - lam_sum;
    }

    double t = 1.0;
    Eigen::Index blocking = -1;
    for (Eigen::Index i = 0; i < ntot; ++i) {
      if (!in_support[static_cast<std::size_t>(i)]) continue;
      if (v[i] < 1e-15) {
        const double denom = w[i] - v[i];
        const double ti = denom > 0 ? w[i] / denom : 0.0;
        if (ti < t) {
          t = ti;
          blocking = i;
        }
      }
    }
    if (blocking >= 0) {
      w = w + t * (v - w);
      w[blocking] = 0.0;
      for (Eigen::Index i = 0; i < ntot; ++i) {
        if (in_support[static_cast<std::size_t>(i)] && w[i] <= 1e-15) {
          w[i] = 0.0;
          in_support[static_cast<std::size_t>(i)] = 0;
        }
      }
      // Never empty the point support: the weights still sum to one.
      bool any_point = false;
      for (Eigen::Index i = 0; i < np; ++i) any_point |= in_support[static_cast<std::size_t>(i)] != 0;
      if (!any_point) {
        Eigen::Index imax = 0;
        w.head(np).maxCoeff(&imax);
        in_support[static_cast<std::size_t>(imax)] = 1;
      }
      continue;
    }

    w = v;
    const Vec y = x - g * w;
    double ref = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < np; ++i) {
      if (in_support[static_cast<std::size_t>(i)]) ref = std::max(ref, g.col(i).dot(y));
    }
    Eigen::Index enter = -1;
    double worst = add_tol;
    for (Eigen::Index i = 0; i < ntot; ++i) {
      if (in_support[static_cast<std::size_t>(i)]) continue;
      const double viol = i < np ? g.col(i).dot(y) - ref : g.col(i).dot(y);
      if (viol > worst) {
        worst = viol;
        enter = i;
      }
    }
    if (enter < 0) return finish(x, g, w, np, NormId::l2);
    in_support[static_cast<std::size_t>(enter)] = 1;
  }
  throw Error(ErrorCode::NumericalFailure, "l2 active-set projection did not converge");
}

Projection l2_projected_gradient(const Vec& x, const PointList& points, const PointList& rays,
                                 const Tolerance& tol) {
  const auto dim = x.size();
  const auto np = static_cast<Eigen::Index>(points.size());
  const Mat g = stack_columns(points, rays, dim);
  const double lip = std::max(1e-12, g.jacobiSvd().singularValues()(0) * g.jacobiSvd().singularValues()(0));

  auto feasible = [&](const Vec& w) {
    Vec out(w.size());
    out.head(np) = project_to_simplex(w.head(np));
    out.tail(w.size() - np) = w.tail(w.size() - np).cwiseMax(0.0);
    return out;
  };
  Vec w = Vec::Zero(g.cols());
  w.head(np).setConstant(1.0 / static_cast<double>(np));
  Vec yk = w;
  double tk = 1.0;
  constexpr int kMaxIter = 400000;
  for (int it = 0; it < kMaxIter; ++it) {
    const Vec grad = -g.transpose() * (x - g * yk);
    const Vec next = feasible(yk - grad / lip);
    const double mapping = lip * (next - yk).norm();
    const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * tk * tk));
    yk = next + ((tk - 1.0) / tn) * (next - w);
    w = next;
    tk = tn;
    if (mapping <= tol.opt_tol) break;
  }
  return finish(x, g, w, np, NormId::l2);
}

// l1 / linf distance as an LP over (lambda, mu, s).
Projection polyhedral_norm(const Vec& x, const PointList& points, const PointList& rays,
                           NormId norm, const Tolerance& tol) {
  const auto dim = x.size();
  const auto np = static_cast<Eigen::Index>(points.size());
  const Mat g = stack_columns(points, rays, dim);
  const Eigen::Index nw = g.cols();
  const Eigen::Index ns = norm == NormId::l1 ? dim : 1;
  LpBuilder b(nw + ns);
  for (Eigen::Index k = 0; k < ns; ++k) b.set_objective(nw + k, 1.0);
  for (Eigen::Index i = 0; i < nw; ++i) b.add_nonneg(i);
  Vec sum_row = Vec::Zero(nw + ns);
  sum_row.head(np).setOnes();
  b.add_eq(sum_row, 1.0);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const Eigen::Index s = norm == NormId::l1 ? nw + i : nw;
    // x_i - (G w)_i <= s  and  (G w)_i - x_i <= s
    Vec r1 = Vec::Zero(nw + ns);
    r1.head(nw) = -g.row(i).transpose();
    r1[s] = -1.0;
    b.add_le(r1, -x[i]);
    Vec r2 = Vec::Zero(nw + ns);
    r2.head(nw) = g.row(i).transpose();
    r2[s] = -1.0;
    b.add_le(r2, x[i]);
  }
  const LpResult res = solve_lp(b.build(), tol);
  if (res.status != LpStatus::optimal) {
    throw Error(ErrorCode::NumericalFailure, "polyhedral-norm projection LP not optimal");
  }
  Vec w = res.x.head(nw).cwiseMax(0.0);
  return finish(x, g, w, np, norm);
}

}  // namespace

Projection project_onto_vset(const Vec& x, const PointList& points, const PointList& rays,
                             NormId norm, const Tolerance& tol, L2Method method) {
  if (points.empty()) throw Error(ErrorCode::EmptyPointList, "project_onto_vset needs points");
  for (const auto& p : points) require_dim(p, x.size(), "project_onto_vset point");
  for (const auto& r : rays) require_dim(r, x.size(), "project_onto_vset ray");
  if (norm != NormId::l2) return polyhedral_norm(x, points, rays, norm, tol);
  if (method == L2Method::projected_gradient) return l2_projected_gradient(x, points, rays, tol);
  return l2_active_set(x, points, rays);
}

}  // namespace conic
