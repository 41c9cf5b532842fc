#pragma once

#include "mcwc/contact_model.hpp"
#include "mcwc/feasibility.hpp"
#include "mcwc/hull.hpp"
#include "mcwc/oracle.hpp"

#include <type_traits>

namespace mcwc {

/// Relative slack allowed when testing W [F; M] >= 0.
inline constexpr double kMembershipTol = 1e-9;
/// Generators must satisfy v . u > kWitnessTol |v| |u|.
inline constexpr double kWitnessTol = 1e-10;

template <typename _Scalar> struct ModifiedGeneratorsTpl {
  using Scalar = _Scalar;
  Matrix3XTpl<Scalar> upsilon_tilde;
  Matrix3XTpl<Scalar> gamma_tilde;
  /// R_v, world to witness-aligned frame.
  Mat3Tpl<Scalar> rotation;
  Vec3Tpl<Scalar> witness;

  Matrix6XTpl<Scalar> stacked() const {
    Matrix6XTpl<Scalar> p(6, upsilon_tilde.cols());
    p << upsilon_tilde, gamma_tilde;
    return p;
  }
};

enum class WcmSource { Computed, Shifted };

/// Rows W (unit norm each) with W [F; M] >= 0 exactly for the feasible
/// wrenches about `anchor`.
template <typename _Scalar> struct WrenchConstraintMatrixTpl {
  using Scalar = _Scalar;
  using MatrixX6 = MatrixX6Tpl<Scalar>;
  using Vec3 = Vec3Tpl<Scalar>;

  MatrixX6 rows;
  Vec3 anchor = Vec3::Zero();
  Vec3 witness = Vec3::Zero();
  WcmSource source = WcmSource::Computed;
  /// Displacement applied by the last shift (zero when Computed).
  Vec3 shift = Vec3::Zero();
  /// Dimension of the 5D point set the rows were built from.
  Eigen::Index affine_dim = 0;
  Eigen::Index num_facets = 0;

  Eigen::Index size() const { return rows.rows(); }
};

using ModifiedGenerators = ModifiedGeneratorsTpl<double>;
using WrenchConstraintMatrix = WrenchConstraintMatrixTpl<double>;

/// Rotates generators into the witness frame and rescales each column pair
/// so its force has unit component along v.
template <typename Scalar>
ModifiedGeneratorsTpl<Scalar>
modified_generators(const GeneratingMatricesTpl<Scalar> &gen,
                    const Vec3Tpl<Scalar> &v) {
  ModifiedGeneratorsTpl<Scalar> out;
  out.witness = v;
  out.rotation = rotation_aligning_z(v);
  const Scalar vnorm = v.norm();
  const Eigen::RowVectorX<Scalar> dots = v.transpose() * gen.upsilon;
  const Eigen::RowVectorX<Scalar> lengths = gen.upsilon.colwise().norm();
  for (Eigen::Index i = 0; i < dots.size(); ++i)
    if (!(dots(i) > Scalar(kWitnessTol) * vnorm * lengths(i)))
      throw WitnessOnBoundary("witness is not strictly inside the dual cone "
                              "of every generator");
  const Eigen::RowVectorX<Scalar> factor = vnorm * dots.cwiseInverse();
  out.upsilon_tilde = (out.rotation * gen.upsilon).array().rowwise() *
                      factor.array();
  out.gamma_tilde =
      (out.rotation * gen.gamma).array().rowwise() * factor.array();
  return out;
}

/// Scales every row to unit Euclidean norm.
template <typename Scalar>
void canonicalize_rows(MatrixX6Tpl<Scalar> &rows) {
  for (Eigen::Index r = 0; r < rows.rows(); ++r) {
    const Scalar n = rows.row(r).norm();
    if (n > Scalar(0))
      rows.row(r) /= n;
  }
}

template <typename Scalar>
WrenchConstraintMatrixTpl<Scalar>
build_wcm(const GeneratingMatricesTpl<Scalar> &gen, const Vec3Tpl<Scalar> &v,
          const HullSettings &settings = {}) {
  const auto mod = modified_generators(gen, v);
  const Eigen::Index n = gen.cols();

  // Drop the third (unit) row: points are [Fx Fy Mx My Mz] / Fz.
  MatrixXTpl<Scalar> pts(5, n);
  pts.row(0) = mod.upsilon_tilde.row(0);
  pts.row(1) = mod.upsilon_tilde.row(1);
  pts.bottomRows(3) = mod.gamma_tilde;

  HullResultTpl<Scalar> hull;
  try {
    hull = convex_hull(PointCloudTpl<Scalar>(std::move(pts)), settings);
  } catch (const HullFailure &) {
    throw;
  } catch (const Error &e) {
    throw HullFailure(e.what());
  }

  // a . p >= w  becomes  [a1 a2 -w a3 a4 a5] [F; M] >= 0 in the v frame.
  auto to_row = [](const VectorXTpl<Scalar> &a, Scalar w) {
    Eigen::Matrix<Scalar, 1, 6> r;
    r << a(0), a(1), -w, a(2), a(3), a(4);
    return r;
  };
  const Eigen::Index k = Eigen::Index(hull.facets.size()) +
                         2 * Eigen::Index(hull.equalities.size()) + 1;
  MatrixX6Tpl<Scalar> rows(k, 6);
  Eigen::Index r = 0;
  for (const auto &f : hull.facets)
    rows.row(r++) = to_row(f.normal, f.offset);
  for (const auto &e : hull.equalities) {
    rows.row(r++) = to_row(e.normal, e.offset);
    rows.row(r++) = -to_row(e.normal, e.offset);
  }
  rows.row(r++) << Scalar(0), Scalar(0), Scalar(1), Scalar(0), Scalar(0),
      Scalar(0);

  // Back to the world frame: [F_v; M_v] = blockdiag(R_v, R_v) [F; M].
  MatrixX6Tpl<Scalar> world(k, 6);
  world.leftCols(3).noalias() = rows.leftCols(3) * mod.rotation;
  world.rightCols(3).noalias() = rows.rightCols(3) * mod.rotation;
  canonicalize_rows(world);

  WrenchConstraintMatrixTpl<Scalar> out;
  out.rows = std::move(world);
  out.anchor = gen.anchor;
  out.witness = v;
  out.affine_dim = hull.affine_dim;
  out.num_facets = Eigen::Index(hull.facets.size());
  return out;
}

template <typename Scalar>
WrenchConstraintMatrixTpl<Scalar>
build_wcm(const ContactConfigurationTpl<Scalar> &config,
          const Vec3Tpl<Scalar> &com, const Vec3Tpl<Scalar> &v,
          const HullSettings &settings = {}) {
  return build_wcm(build_generating_matrices(config, com), v, settings);
}

/// Re-anchors W from A to B = A + delta:
///   W_delta = W [[I, 0], [skew(delta), I]].
template <typename Scalar>
WrenchConstraintMatrixTpl<Scalar>
shift_wcm(const WrenchConstraintMatrixTpl<Scalar> &w,
          const Vec3Tpl<Scalar> &delta) {
  WrenchConstraintMatrixTpl<Scalar> out;
  out.rows.resize(w.rows.rows(), 6);
  out.rows.rightCols(3) = w.rows.rightCols(3);
  out.rows.leftCols(3) = w.rows.leftCols(3);
  if (!delta.isZero(0)) {
    out.rows.leftCols(3).noalias() += w.rows.rightCols(3) * skew(delta);
    canonicalize_rows(out.rows);
  }
  out.anchor = w.anchor + delta;
  out.witness = w.witness;
  out.source = WcmSource::Shifted;
  out.shift = delta;
  out.affine_dim = w.affine_dim;
  out.num_facets = w.num_facets;
  return out;
}

/// min over rows of W [F; M].
template <typename Scalar>
Scalar constraint_margin(const WrenchConstraintMatrixTpl<Scalar> &w,
                         const WrenchTpl<Scalar> &wrench) {
  detail::require_anchor(w.anchor, wrench.about);
  return (w.rows * wrench.stacked()).minCoeff();
}

template <typename Scalar>
bool wrench_feasible(const WrenchConstraintMatrixTpl<Scalar> &w,
                     const WrenchTpl<Scalar> &wrench) {
  const Scalar margin = constraint_margin(w, wrench);
  return margin >=
         -Scalar(kMembershipTol) * (Scalar(1) + wrench.stacked().norm());
}

/// Can the contacts produce the motion in `q` with the CoM at `com`?
///
/// Unconstrained configurations accept any force; when the query also fixes
/// the angular momentum rate the full wrench goes to the LP oracle, since
/// the classification says nothing about moments. Constrained
/// configurations are answered from the WCM, which must be anchored at
/// `com`; a query without a moment asks about the force alone and is sent
/// to the oracle as well.
template <typename Scalar>
bool acceleration_feasible(const ClassificationTpl<Scalar> &cls,
                           const WrenchConstraintMatrixTpl<std::type_identity_t<Scalar>> *wcm,
                           const RigidBodyParamsTpl<Scalar> &body,
                           const MotionQueryTpl<Scalar> &q,
                           const Vec3Tpl<Scalar> &com) {
  const auto wrench = required_wrench(body, q, com);
  auto generating_at_com = [&] {
    return shift_generating_matrices(cls.generating,
                                     Vec3Tpl<Scalar>(com - cls.generating.anchor));
  };
  if (!cls.constrained()) {
    if (!q.angular_momentum_rate)
      return true;
    return wrench_membership_lp(generating_at_com(), wrench).feasible;
  }
  if (!q.angular_momentum_rate)
    return force_membership_lp(generating_at_com(), wrench.force).feasible;
  if (wcm == nullptr)
    throw InvalidArgument("a constrained configuration needs its WCM");
  return wrench_feasible(*wcm, wrench);
}

} // namespace mcwc
