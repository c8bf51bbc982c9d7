#include "conic/lp.hpp"

#include <cmath>
#include <limits>

namespace conic {

void LpProblem::validate() const {
  const auto n = objective.size();
  const bool ineq_ok = ineq_matrix.rows() == ineq_rhs.size() &&
                       (ineq_matrix.rows() == 0 || ineq_matrix.cols() == n);
  const bool eq_ok =
      eq_matrix.rows() == eq_rhs.size() && (eq_matrix.rows() == 0 || eq_matrix.cols() == n);
  if (!ineq_ok || !eq_ok) {
    throw Error(ErrorCode::DimensionMismatch, "LP constraint blocks inconsistent with objective");
  }
}

namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kCostTol = 1e-11;

// Dense tableau over standard-form columns [x+ | x- | slack | artificial].
class Tableau {
 public:
  Tableau(Mat a, Vec rhs, Eigen::Index first_art)
      : t_(std::move(a)), rhs_(std::move(rhs)), first_art_(first_art), basis_(t_.rows()) {
    for (Eigen::Index r = 0; r < t_.rows(); ++r) basis_[r] = first_art_ + r;
    rc_ = Vec::Zero(t_.cols());
  }

  void set_costs(const Vec& c) {
    cost_ = c;
    rc_ = c;
    z_ = 0.0;
    for (Eigen::Index r = 0; r < t_.rows(); ++r) {
      const double cb = c[basis_[r]];
      if (cb != 0.0) {
        rc_ -= cb * t_.row(r).transpose();
        z_ += cb * rhs_[r];
      }
    }
  }

  enum class Step { optimal, unbounded, pivoted };

  // One Bland's-rule iteration; artificials never re-enter when `allow_art` is
  // false.
  Step step(bool allow_art, Eigen::Index& entering) {
    const Eigen::Index limit = allow_art ? t_.cols() : first_art_;
    entering = -1;
    for (Eigen::Index j = 0; j < limit; ++j) {
      if (rc_[j] < -kCostTol) {
        entering = j;
        break;
      }
    }
    if (entering < 0) return Step::optimal;
    Eigen::Index leave = -1;
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index r = 0; r < t_.rows(); ++r) {
      const double a = t_(r, entering);
      if (a <= kPivotTol) continue;
      const double ratio = rhs_[r] / a;
      if (ratio < best - 1e-13 ||
          (std::abs(ratio - best) <= 1e-13 && leave >= 0 && basis_[r] < basis_[leave])) {
        best = ratio;
        leave = r;
      }
    }
    if (leave < 0) return Step::unbounded;
    pivot(leave, entering);
    return Step::pivoted;
  }

  void pivot(Eigen::Index r, Eigen::Index j) {
    const double a = t_(r, j);
    t_.row(r) /= a;
    rhs_[r] /= a;
    for (Eigen::Index i = 0; i < t_.rows(); ++i) {
      if (i == r) continue;
      const double f = t_(i, j);
      if (f != 0.0) {
        t_.row(i) -= f * t_.row(r);
        rhs_[i] -= f * rhs_[r];
        if (rhs_[i] < 0 && rhs_[i] > -1e-13) rhs_[i] = 0.0;
      }
    }
    const double f = rc_[j];
    rc_ -= f * t_.row(r).transpose();
    z_ += f * rhs_[r];
    basis_[r] = j;
  }

  // Pivot zero-level artificials out of the basis where a structural column
  // allows it; rows with no such column are redundant and keep a zero
  // artificial.
  void drive_out_artificials() {
    for (Eigen::Index r = 0; r < t_.rows(); ++r) {
      if (basis_[r] < first_art_) continue;
      rhs_[r] = 0.0;
      Eigen::Index best = -1;
      double best_abs = 1e-9;
      for (Eigen::Index j = 0; j < first_art_; ++j) {
        if (std::abs(t_(r, j)) > best_abs) {
          best_abs = std::abs(t_(r, j));
          best = j;
        }
      }
      if (best >= 0) pivot(r, best);
    }
  }

  Vec primal() const {
    Vec w = Vec::Zero(t_.cols());
    for (Eigen::Index r = 0; r < t_.rows(); ++r) w[basis_[r]] = std::max(0.0, rhs_[r]);
    return w;
  }

  // Row prices pi = c_B B^{-1}, read off the artificial (identity) columns.
  Vec prices() const {
    Vec pi(t_.rows());
    for (Eigen::Index r = 0; r < t_.rows(); ++r) {
      pi[r] = cost_[first_art_ + r] - rc_[first_art_ + r];
    }
    return pi;
  }

  Vec ray(Eigen::Index entering) const {
    Vec w = Vec::Zero(t_.cols());
    w[entering] = 1.0;
    for (Eigen::Index r = 0; r < t_.rows(); ++r) w[basis_[r]] = -t_(r, entering);
    return w;
  }

  double objective() const { return z_; }

 private:
  Mat t_;
  Vec rhs_;
  Eigen::Index first_art_;
  std::vector<Eigen::Index> basis_;
  Vec cost_;
  Vec rc_;
  double z_ = 0.0;
};

}  // namespace

LpResult solve_lp(const LpProblem& p, const Tolerance& tol) {
  p.validate();
  const Eigen::Index n = p.num_vars();
  const Eigen::Index mi = p.ineq_matrix.rows();
  const Eigen::Index me = p.eq_matrix.rows();
  const Eigen::Index m = mi + me;
  const Eigen::Index nstruct = 2 * n + mi;
  const Eigen::Index ncols = nstruct + m;

  Mat a = Mat::Zero(m, ncols);
  Vec rhs(m);
  Vec sign(m);
  for (Eigen::Index r = 0; r < m; ++r) {
    const bool is_ineq = r < mi;
    const auto row = is_ineq ? p.ineq_matrix.row(r) : p.eq_matrix.row(r - mi);
    const double b = is_ineq ? p.ineq_rhs[r] : p.eq_rhs[r - mi];
    const double s = b < 0 ? -1.0 : 1.0;
    sign[r] = s;
    a.block(r, 0, 1, n) = s * row;
    a.block(r, n, 1, n) = -s * row;
    if (is_ineq) a(r, 2 * n + r) = s;
    a(r, nstruct + r) = 1.0;
    rhs[r] = s * b;
  }

  Tableau tab(std::move(a), std::move(rhs), nstruct);
  LpResult res;
  const long cap = 10L * (m + ncols) * (m + ncols) + 100;

  Vec c1 = Vec::Zero(ncols);
  c1.tail(m).setOnes();
  tab.set_costs(c1);
  Eigen::Index entering = -1;
  for (;;) {
    if (res.iterations++ > cap) {
      throw Error(ErrorCode::NumericalFailure, "simplex phase 1 iteration cap reached");
    }
    const auto s = tab.step(true, entering);
    if (s == Tableau::Step::optimal) break;
    if (s == Tableau::Step::unbounded) {
      throw Error(ErrorCode::NumericalFailure, "phase 1 reported unbounded");
    }
  }

  double bscale = 1.0;
  if (mi > 0) bscale = std::max(bscale, p.ineq_rhs.cwiseAbs().maxCoeff());
  if (me > 0) bscale = std::max(bscale, p.eq_rhs.cwiseAbs().maxCoeff());
  if (tab.objective() > tol.feas_tol * bscale) {
    const Vec pi = tab.prices();
    Vec y = -(sign.array() * pi.array()).matrix();
    res.status = LpStatus::infeasible;
    res.farkas_ineq = y.head(mi).cwiseMax(0.0);
    res.farkas_eq = y.tail(me);
    return res;
  }

  tab.drive_out_artificials();
  Vec c2 = Vec::Zero(ncols);
  c2.head(n) = p.objective;
  c2.segment(n, n) = -p.objective;
  tab.set_costs(c2);
  for (;;) {
    if (res.iterations++ > cap) {
      throw Error(ErrorCode::NumericalFailure, "simplex phase 2 iteration cap reached");
    }
    const auto s = tab.step(false, entering);
    if (s == Tableau::Step::optimal) break;
    if (s == Tableau::Step::unbounded) {
      const Vec w = tab.ray(entering);
      res.status = LpStatus::unbounded;
      res.ray = w.head(n) - w.segment(n, n);
      res.x = Vec::Zero(n);
      const Vec wp = tab.primal();
      res.x = wp.head(n) - wp.segment(n, n);
      return res;
    }
  }
  const Vec w = tab.primal();
  res.status = LpStatus::optimal;
  res.x = w.head(n) - w.segment(n, n);
  res.value = p.objective.dot(res.x);
  const Vec pi = (sign.array() * tab.prices().array()).matrix();
  res.price_ineq = pi.head(mi);
  res.price_eq = pi.tail(me);
  return res;
}

LpBuilder::LpBuilder(Eigen::Index n) : nvars(n), objective(Vec::Zero(n)) {}

void LpBuilder::set_objective(Eigen::Index var, double coeff) { objective[var] = coeff; }

void LpBuilder::add_le(const Vec& row, double rhs) { le_rows.emplace_back(row, rhs); }

void LpBuilder::add_eq(const Vec& row, double rhs) { eq_rows.emplace_back(row, rhs); }

void LpBuilder::add_nonneg(Eigen::Index var) {
  Vec row = Vec::Zero(nvars);
  row[var] = -1.0;
  le_rows.emplace_back(std::move(row), 0.0);
}

LpProblem LpBuilder::build() const {
  LpProblem p;
  p.objective = objective;
  p.ineq_matrix.resize(static_cast<Eigen::Index>(le_rows.size()), nvars);
  p.ineq_rhs.resize(static_cast<Eigen::Index>(le_rows.size()));
  for (std::size_t i = 0; i < le_rows.size(); ++i) {
    p.ineq_matrix.row(static_cast<Eigen::Index>(i)) = le_rows[i].first.transpose();
    p.ineq_rhs[static_cast<Eigen::Index>(i)] = le_rows[i].second;
  }
  p.eq_matrix.resize(static_cast<Eigen::Index>(eq_rows.size()), nvars);
  p.eq_rhs.resize(static_cast<Eigen::Index>(eq_rows.size()));
  for (std::size_t i = 0; i < eq_rows.size(); ++i) {
    p.eq_matrix.row(static_cast<Eigen::Index>(i)) = eq_rows[i].first.transpose();
    p.eq_rhs[static_cast<Eigen::Index>(i)] = eq_rows[i].second;
  }
  return p;
}

}  // namespace conic
