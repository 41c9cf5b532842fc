#pragma once

#include "mcwc/fwd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

namespace mcwc {

enum class LpStatus { Optimal, Infeasible, Unbounded };

/// minimize c^T x  s.t.  A x >= b,  E x = f,  lower <= x <= upper.
/// Bounds default to the whole real line.
template <typename _Scalar> struct LinearProgramTpl {
  using Scalar = _Scalar;
  using VectorX = VectorXTpl<Scalar>;
  using MatrixX = MatrixXTpl<Scalar>;

  VectorX objective;
  MatrixX ineq_matrix;
  VectorX ineq_rhs;
  MatrixX eq_matrix;
  VectorX eq_rhs;
  VectorX lower;
  VectorX upper;

  LinearProgramTpl() = default;
  explicit LinearProgramTpl(Eigen::Index num_vars)
      : objective(VectorX::Zero(num_vars)), ineq_matrix(0, num_vars),
        ineq_rhs(0), eq_matrix(0, num_vars), eq_rhs(0),
        lower(VectorX::Constant(num_vars,
                                -std::numeric_limits<Scalar>::infinity())),
        upper(VectorX::Constant(num_vars,
                                std::numeric_limits<Scalar>::infinity())) {}

  Eigen::Index num_vars() const { return objective.size(); }
};

template <typename _Scalar> struct LpSolutionTpl {
  using Scalar = _Scalar;
  LpStatus status = LpStatus::Infeasible;
  std::optional<VectorXTpl<Scalar>> x;
  std::optional<Scalar> objective_value;
  int iterations = 0;

  bool optimal() const { return status == LpStatus::Optimal; }
};

using LinearProgram = LinearProgramTpl<double>;
using LpSolution = LpSolutionTpl<double>;

struct SimplexSettings {
  /// Allowed constraint residual, scaled by max(1, |rhs|_inf).
  double feasibility_tol = 1e-9;
  /// Tableau entries below this magnitude are never pivoted on.
  double pivot_tol = 1e-10;
  double optimality_tol = 1e-10;
  /// Residual tolerated by the final solution check before giving up.
  double verify_tol = 1e-8;
  int max_pivots = 50000;
};

namespace detail {

/// Dense two-phase simplex on  min c^T y,  M y = r,  y >= 0,  r >= 0,
/// using Bland's rule throughout.
template <typename Scalar> class DenseSimplex {
public:
  using Tableau =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  using VectorX = VectorXTpl<Scalar>;
  using MatrixX = MatrixXTpl<Scalar>;

  DenseSimplex(const MatrixX &M, const VectorX &r, const VectorX &c,
               std::vector<Eigen::Index> initial_basis,
               const SimplexSettings &settings)
      : settings_(settings), rows_(M.rows()), cols_(M.cols()) {
    // Columns [0, cols_) are structural, [cols_, cols_ + n_art) artificial,
    // the last column is the right-hand side.
    basis_ = std::move(initial_basis);
    Eigen::Index n_art = 0;
    for (auto &b : basis_)
      if (b < 0)
        b = cols_ + n_art++;
    n_art_ = n_art;
    tab_ = Tableau::Zero(rows_ + 1, cols_ + n_art_ + 1);
    tab_.topLeftCorner(rows_, cols_) = M;
    tab_.col(rhs_col()).head(rows_) = r;
    for (Eigen::Index i = 0; i < rows_; ++i)
      if (basis_[i] >= cols_)
        tab_(i, basis_[i]) = Scalar(1);
    cost_ = c;
    rhs_scale_ = std::max<Scalar>(Scalar(1), r.size() ? r.cwiseAbs().maxCoeff()
                                                       : Scalar(0));
  }

  LpStatus run(int &iterations) {
    if (n_art_ > 0) {
      // Phase 1: minimise the sum of artificials.
      load_phase_one_costs();
      const auto st = iterate(cols_ + n_art_, iterations);
      if (st != LpStatus::Optimal)
        throw NumericalFailure("phase one of the simplex did not converge");
      if (-tab_(rows_, rhs_col()) >
          Scalar(settings_.feasibility_tol) * rhs_scale_)
        return LpStatus::Infeasible;
      drive_out_artificials(iterations);
    }
    load_phase_two_costs();
    return iterate(cols_, iterations);
  }

  /// Values of the structural variables.
  VectorX solution() const {
    VectorX y = VectorX::Zero(cols_);
    for (Eigen::Index i = 0; i < rows_; ++i)
      if (basis_[i] < cols_)
        y(basis_[i]) = std::max(Scalar(0), tab_(i, rhs_col()));
    return y;
  }

private:
  Eigen::Index rhs_col() const { return tab_.cols() - 1; }

  void load_phase_one_costs() {
    tab_.row(rows_).setZero();
    tab_.row(rows_).segment(cols_, n_art_).setOnes();
    for (Eigen::Index i = 0; i < rows_; ++i)
      if (basis_[i] >= cols_)
        tab_.row(rows_) -= tab_.row(i);
  }

  void load_phase_two_costs() {
    tab_.row(rows_).setZero();
    tab_.row(rows_).head(cols_) = cost_.transpose();
    for (Eigen::Index i = 0; i < rows_; ++i) {
      const Eigen::Index b = basis_[i];
      if (b < cols_ && tab_(rows_, b) != Scalar(0))
        tab_.row(rows_) -= tab_(rows_, b) * tab_.row(i);
    }
  }

  void pivot(Eigen::Index r, Eigen::Index e) {
    tab_.row(r) /= tab_(r, e);
    for (Eigen::Index i = 0; i <= rows_; ++i) {
      if (i == r)
        continue;
      const Scalar f = tab_(i, e);
      if (f != Scalar(0))
        tab_.row(i) -= f * tab_.row(r);
    }
    basis_[r] = e;
  }

  LpStatus iterate(Eigen::Index eligible_cols, int &iterations) {
    for (;;) {
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < eligible_cols; ++j)
        if (tab_(rows_, j) < -Scalar(settings_.optimality_tol)) {
          enter = j;
          break;
        }
      if (enter < 0)
        return LpStatus::Optimal;

      Eigen::Index leave = -1;
      Scalar best = std::numeric_limits<Scalar>::infinity();
      for (Eigen::Index i = 0; i < rows_; ++i) {
        const Scalar a = tab_(i, enter);
        if (a <= Scalar(settings_.pivot_tol))
          continue;
        const Scalar ratio = std::max(Scalar(0), tab_(i, rhs_col())) / a;
        if (ratio < best ||
            (leave >= 0 && ratio == best && basis_[i] < basis_[leave])) {
          best = ratio;
          leave = i;
        }
      }
      if (leave < 0)
        return LpStatus::Unbounded;
      if (++iterations > settings_.max_pivots)
        throw NumericalFailure("simplex pivot budget exhausted");
      pivot(leave, enter);
    }
  }

  void drive_out_artificials(int &iterations) {
    for (Eigen::Index i = 0; i < rows_; ++i) {
      if (basis_[i] < cols_)
        continue;
      Eigen::Index best = -1;
      Scalar mag = Scalar(settings_.pivot_tol);
      for (Eigen::Index j = 0; j < cols_; ++j)
        if (std::abs(tab_(i, j)) > mag) {
          mag = std::abs(tab_(i, j));
          best = j;
        }
      if (best >= 0) {
        pivot(i, best);
        ++iterations;
      } else {
        // Redundant row: the artificial stays basic at (numerically) zero
        // and is pinned there by excluding artificials from phase two.
        tab_(i, rhs_col()) = Scalar(0);
      }
    }
  }

  SimplexSettings settings_;
  Eigen::Index rows_;
  Eigen::Index cols_;
  Eigen::Index n_art_ = 0;
  Tableau tab_;
  VectorX cost_;
  std::vector<Eigen::Index> basis_;
  Scalar rhs_scale_ = Scalar(1);
};

} // namespace detail

/// Solves a small dense LP with a two-phase simplex (Bland's rule).
///
/// Variables are mapped onto non-negative ones: split into a difference of
/// two when their range contains zero, otherwise shifted by the finite lower
/// bound or reflected about the finite upper bound. Optimal solutions are re-checked against the original
/// constraints; a failed check raises NumericalFailure rather than
/// returning an inaccurate point.
template <typename Scalar>
LpSolutionTpl<Scalar> solve(const LinearProgramTpl<Scalar> &lp,
                            const SimplexSettings &settings = {}) {
  using VectorX = VectorXTpl<Scalar>;
  using MatrixX = MatrixXTpl<Scalar>;
  constexpr Scalar inf = std::numeric_limits<Scalar>::infinity();

  const Eigen::Index n = lp.num_vars();
  const Eigen::Index n_ineq = lp.ineq_matrix.rows();
  const Eigen::Index n_eq = lp.eq_matrix.rows();
  if (lp.ineq_matrix.cols() != n || lp.ineq_rhs.size() != n_ineq ||
      lp.eq_matrix.cols() != n || lp.eq_rhs.size() != n_eq ||
      lp.lower.size() != n || lp.upper.size() != n)
    throw MalformedProgram("linear program dimensions are inconsistent");
  if (!lp.objective.allFinite() || !lp.ineq_matrix.allFinite() ||
      !lp.ineq_rhs.allFinite() || !lp.eq_matrix.allFinite() ||
      !lp.eq_rhs.allFinite())
    throw MalformedProgram("linear program data must be finite");
  for (Eigen::Index j = 0; j < n; ++j)
    if (std::isnan(lp.lower(j)) || std::isnan(lp.upper(j)) ||
        lp.lower(j) == inf || lp.upper(j) == -inf)
      throw MalformedProgram("invalid variable bound");

  LpSolutionTpl<Scalar> sol;
  for (Eigen::Index j = 0; j < n; ++j)
    if (lp.lower(j) > lp.upper(j)) {
      sol.status = LpStatus::Infeasible;
      return sol;
    }

  // x = offset + T y, y >= 0. Variables whose range contains zero are
  // split into positive and negative parts so the simplex starts at x = 0.
  VectorX offset = VectorX::Zero(n);
  std::vector<std::pair<Eigen::Index, Scalar>> pos(n);
  std::vector<Eigen::Index> neg(n, -1);
  std::vector<std::pair<Eigen::Index, Scalar>> box_rows; // (y column, cap)
  Eigen::Index ny = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    const Scalar lo = lp.lower(j), up = lp.upper(j);
    if (lo < Scalar(0) && up > Scalar(0)) {
      pos[j] = {ny++, Scalar(1)};
      neg[j] = ny++;
      if (std::isfinite(up))
        box_rows.push_back({pos[j].first, up});
      if (std::isfinite(lo))
        box_rows.push_back({neg[j], -lo});
    } else if (std::isfinite(lo)) {
      offset(j) = lo;
      pos[j] = {ny++, Scalar(1)};
      if (std::isfinite(up))
        box_rows.push_back({pos[j].first, up - lo});
    } else {
      offset(j) = up;
      pos[j] = {ny++, Scalar(-1)};
    }
  }
  MatrixX T = MatrixX::Zero(n, ny);
  for (Eigen::Index j = 0; j < n; ++j) {
    T(j, pos[j].first) = pos[j].second;
    if (neg[j] >= 0)
      T(j, neg[j]) = Scalar(-1);
  }

  const Eigen::Index n_box = static_cast<Eigen::Index>(box_rows.size());
  const Eigen::Index rows = n_ineq + n_eq + n_box;
  const Eigen::Index n_slack = n_ineq + n_box;
  const Eigen::Index cols = ny + n_slack;
  MatrixX M = MatrixX::Zero(rows, cols);
  VectorX r(rows);
  VectorX c = VectorX::Zero(cols);
  c.head(ny) = T.transpose() * lp.objective;

  if (n_ineq > 0) {
    M.block(0, 0, n_ineq, ny) = lp.ineq_matrix * T;
    M.block(0, ny, n_ineq, n_ineq) = -MatrixX::Identity(n_ineq, n_ineq);
    r.head(n_ineq) = lp.ineq_rhs - lp.ineq_matrix * offset;
  }
  if (n_eq > 0) {
    M.block(n_ineq, 0, n_eq, ny) = lp.eq_matrix * T;
    r.segment(n_ineq, n_eq) = lp.eq_rhs - lp.eq_matrix * offset;
  }
  for (Eigen::Index k = 0; k < n_box; ++k) {
    const Eigen::Index row = n_ineq + n_eq + k;
    M(row, box_rows[k].first) = Scalar(1);
    M(row, ny + n_ineq + k) = Scalar(1);
    r(row) = box_rows[k].second;
  }

  // Normalise to r >= 0 and pick slack columns as the starting basis where
  // they appear with coefficient +1.
  std::vector<Eigen::Index> basis(rows, -1);
  for (Eigen::Index i = 0; i < rows; ++i) {
    Eigen::Index slack = -1;
    if (i < n_ineq)
      slack = ny + i;
    else if (i >= n_ineq + n_eq)
      slack = ny + n_ineq + (i - n_ineq - n_eq);
    if (r(i) < Scalar(0) ||
        (r(i) == Scalar(0) && slack >= 0 && M(i, slack) < Scalar(0))) {
      M.row(i) *= Scalar(-1);
      r(i) = -r(i);
    }
    if (slack >= 0 && M(i, slack) == Scalar(1))
      basis[i] = slack;
  }

  detail::DenseSimplex<Scalar> simplex(M, r, c, basis, settings);
  sol.status = simplex.run(sol.iterations);
  if (sol.status != LpStatus::Optimal)
    return sol;

  const VectorX y = simplex.solution().head(ny);
  VectorX x = offset + T * y;
  // Clamp away round-off past the bounds.
  x = x.cwiseMax(lp.lower).cwiseMin(lp.upper);

  auto scale = [](const VectorX &v) {
    return Scalar(1) + (v.size() ? v.cwiseAbs().maxCoeff() : Scalar(0));
  };
  const Scalar tol = Scalar(settings.verify_tol);
  if (n_ineq > 0 && ((lp.ineq_matrix * x - lp.ineq_rhs).minCoeff() <
                     -tol * scale(lp.ineq_rhs)))
    throw NumericalFailure("simplex solution violates an inequality");
  if (n_eq > 0 && ((lp.eq_matrix * x - lp.eq_rhs).cwiseAbs().maxCoeff() >
                   tol * scale(lp.eq_rhs)))
    throw NumericalFailure("simplex solution violates an equality");

  sol.objective_value = lp.objective.dot(x);
  sol.x = std::move(x);
  return sol;
}

} // namespace mcwc
