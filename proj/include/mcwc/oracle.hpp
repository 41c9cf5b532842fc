#pragma once

// Ground truth for wrench feasibility, straight from the generator
// matrices. Deliberately independent of the hull and WCM code.

#include "mcwc/contact_model.hpp"
#include "mcwc/lp.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace mcwc {

/// Relative width of the band around the WCM boundary inside which the
/// hull-based and LP-based answers are not compared.
inline constexpr double kBoundaryBand = 1e-7;

template <typename _Scalar> struct MembershipVerdictTpl {
  using Scalar = _Scalar;
  bool feasible = false;
  /// Non-negative generator weights realising the wrench, when feasible.
  std::optional<VectorXTpl<Scalar>> coefficients;
};

struct AgreementReport {
  long agree_feasible = 0;
  long agree_infeasible = 0;
  long disagree = 0;
  long boundary_excluded = 0;

  long total() const {
    return agree_feasible + agree_infeasible + disagree + boundary_excluded;
  }
};

using MembershipVerdict = MembershipVerdictTpl<double>;

namespace detail {

/// Is target in the cone spanned by the columns of G?
template <typename Scalar>
MembershipVerdictTpl<Scalar>
cone_membership(const MatrixXTpl<Scalar> &G, const VectorXTpl<Scalar> &target) {
  MembershipVerdictTpl<Scalar> out;
  const Scalar scale = target.cwiseAbs().maxCoeff();
  if (scale == Scalar(0)) {
    out.feasible = true;
    out.coefficients = VectorXTpl<Scalar>::Zero(G.cols());
    return out;
  }
  LinearProgramTpl<Scalar> lp(G.cols());
  lp.lower.setZero();
  lp.eq_matrix = G;
  lp.eq_rhs = target / scale;
  LpSolutionTpl<Scalar> sol;
  try {
    sol = solve(lp);
  } catch (const Error &e) {
    throw LpFailure(std::string("membership LP failed: ") + e.what());
  }
  if (!sol.optimal())
    return out;
  out.feasible = true;
  out.coefficients = (*sol.x * scale).cwiseMax(Scalar(0));
  return out;
}

template <typename Scalar>
void require_anchor(const Vec3Tpl<Scalar> &a, const Vec3Tpl<Scalar> &b) {
  if ((a - b).cwiseAbs().maxCoeff() > Scalar(1e-12))
    throw AnchorMismatch("wrench is not expressed about the anchor point");
}

} // namespace detail

/// Is there A >= 0 with [upsilon; gamma] A = [F; M]?
template <typename Scalar>
MembershipVerdictTpl<Scalar>
wrench_membership_lp(const GeneratingMatricesTpl<Scalar> &gen,
                     const WrenchTpl<Scalar> &wrench) {
  detail::require_anchor(gen.anchor, wrench.about);
  return detail::cone_membership<Scalar>(gen.stacked(), wrench.stacked());
}

/// Is there A >= 0 with upsilon A = F, the moment being left free?
template <typename Scalar>
MembershipVerdictTpl<Scalar>
force_membership_lp(const GeneratingMatricesTpl<Scalar> &gen,
                    const Vec3Tpl<Scalar> &force) {
  return detail::cone_membership<Scalar>(gen.upsilon, force);
}

/// [upsilon; gamma] A with A_k ~ Exp(1), drawn from `rng`.
template <typename Scalar, typename Rng>
WrenchTpl<Scalar> sample_feasible_wrench(const GeneratingMatricesTpl<Scalar> &gen,
                                         Rng &rng) {
  std::exponential_distribution<double> exp1(1.0);
  VectorXTpl<Scalar> A(gen.cols());
  for (Eigen::Index k = 0; k < A.size(); ++k)
    A(k) = Scalar(exp1(rng));
  return WrenchTpl<Scalar>(gen.upsilon * A, gen.gamma * A, gen.anchor);
}

template <typename Scalar>
WrenchTpl<Scalar> sample_feasible_wrench(const GeneratingMatricesTpl<Scalar> &gen,
                                         std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return sample_feasible_wrench(gen, rng);
}

/// A wrench close to the boundary of the feasible cone, on either side.
///
/// Starts from a feasible sample, walks along a random direction in the span
/// of the generators until the oracle rejects it, bisects the crossing, then
/// steps a random relative amount (1e-5 .. 1e-1) before or after it.
template <typename Scalar, typename Rng>
WrenchTpl<Scalar>
sample_boundary_wrench(const GeneratingMatricesTpl<Scalar> &gen, Rng &rng) {
  using Vec6 = Vec6Tpl<Scalar>;
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto P = gen.stacked();
  auto feasible = [&](const Vec6 &w) {
    return detail::cone_membership<Scalar>(P, w).feasible;
  };
  // Directions are drawn inside the span of the generators: leaving the
  // span is infeasible at any step, so it would never straddle anything.
  const Eigen::JacobiSVD<MatrixXTpl<Scalar>> svd(MatrixXTpl<Scalar>(P),
                                                 Eigen::ComputeFullU);
  const auto &sv = svd.singularValues();
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > Scalar(1e-9) * sv(0))
    ++rank;
  const MatrixXTpl<Scalar> span = svd.matrixU().leftCols(rank);

  for (int attempt = 0; attempt < 64; ++attempt) {
    const Vec6 w0 = sample_feasible_wrench(gen, rng).stacked();
    Vec6 d;
    for (int i = 0; i < 6; ++i)
      d(i) = Scalar(gauss(rng));
    d = span * (span.transpose() * d);
    if (d.norm() == Scalar(0))
      continue;
    d *= w0.norm() / d.norm();

    Scalar lo = Scalar(0), hi = Scalar(1);
    bool crossed = false;
    for (int grow = 0; grow < 12; ++grow) {
      if (!feasible(w0 + hi * d)) {
        crossed = true;
        break;
      }
      lo = hi;
      hi *= Scalar(2);
    }
    if (!crossed)
      continue; // d points into the recession cone.
    for (int it = 0; it < 24; ++it) {
      const Scalar mid = Scalar(0.5) * (lo + hi);
      (feasible(w0 + mid * d) ? lo : hi) = mid;
    }
    const Scalar t_star = Scalar(0.5) * (lo + hi);
    const double rel = std::pow(10.0, -5.0 + 4.0 * unit(rng));
    const double sign = unit(rng) < 0.5 ? -1.0 : 1.0;
    const Vec6 w = w0 + t_star * Scalar(1.0 + sign * rel) * d;
    return WrenchTpl<Scalar>(w.template head<3>(), w.template tail<3>(),
                             gen.anchor);
  }
  throw LpFailure("could not find a direction leaving the wrench cone");
}

/// Agreement between a WCM (anything exposing `rows` and `anchor`) and the
/// oracle on n sampled wrenches: even draws are constructively feasible,
/// odd draws straddle the boundary. Samples whose normalised WCM margin is
/// within kBoundaryBand of zero are counted as excluded. Rows that occur
/// with both signs encode an equality; a sample satisfying it to round-off
/// is on the constraint, not near its boundary, and is still compared.
template <typename Scalar, typename Wcm>
AgreementReport compare_wcm_oracle(const GeneratingMatricesTpl<Scalar> &gen,
                                   const Wcm &wcm, long n_samples,
                                   std::uint64_t seed) {
  detail::require_anchor<Scalar>(gen.anchor, wcm.anchor);
  AgreementReport rep;
  std::mt19937_64 rng(seed);
  const auto P = gen.stacked();
  const Eigen::Index k = wcm.rows.rows();
  std::vector<bool> paired(std::size_t(k), false);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = i + 1; j < k; ++j)
      if ((wcm.rows.row(i) + wcm.rows.row(j)).cwiseAbs().maxCoeff() <=
          Scalar(1e-12)) {
        paired[std::size_t(i)] = paired[std::size_t(j)] = true;
      }
  for (long s = 0; s < n_samples; ++s) {
    const auto wrench = (s % 2 == 0) ? sample_feasible_wrench(gen, rng)
                                     : sample_boundary_wrench(gen, rng);
    const Vec6Tpl<Scalar> w = wrench.stacked();
    const Scalar norm = w.norm();
    const VectorXTpl<Scalar> slack = wcm.rows * w;
    const Scalar margin = slack.minCoeff();
    bool in_band = false;
    for (Eigen::Index i = 0; i < k && norm > Scalar(0); ++i) {
      const Scalar rel = std::abs(slack(i)) / norm;
      in_band = in_band || (rel <= Scalar(kBoundaryBand) &&
                            !(paired[std::size_t(i)] && rel <= Scalar(1e-12)));
    }
    if (in_band) {
      ++rep.boundary_excluded;
      continue;
    }
    const bool by_wcm = margin >= -Scalar(1e-9) * (Scalar(1) + norm);
    const bool by_lp = detail::cone_membership<Scalar>(P, w).feasible;
    if (by_wcm != by_lp)
      ++rep.disagree;
    else if (by_lp)
      ++rep.agree_feasible;
    else
      ++rep.agree_infeasible;
  }
  return rep;
}

} // namespace mcwc
