#pragma once

#include "mcwc/contact_model.hpp"
#include "mcwc/lp.hpp"

namespace mcwc {

/// Separates s* = 0 (dual cones meet only at the origin) from s* < 0.
inline constexpr double kClassificationTol = 1e-8;

enum class Verdict { Unconstrained, Constrained };

template <typename _Scalar> struct DualIntersectionResultTpl {
  using Scalar = _Scalar;
  Scalar s_star = Scalar(0);
  /// Zero when Unconstrained.
  Vec3Tpl<Scalar> v = Vec3Tpl<Scalar>::Zero();
  Verdict status = Verdict::Unconstrained;
};

template <typename _Scalar> struct ClassificationTpl {
  using Scalar = _Scalar;
  Verdict variant = Verdict::Unconstrained;
  /// Witness scaled to unit infinity norm; zero when Unconstrained.
  Vec3Tpl<Scalar> witness = Vec3Tpl<Scalar>::Zero();
  GeneratingMatricesTpl<Scalar> generating;
  Scalar s_star = Scalar(0);
  bool used_parallel_shortcut = false;

  bool constrained() const { return variant == Verdict::Constrained; }
};

struct ClassifyOptions {
  /// Skip the LP when every contact shares the same normal.
  bool parallel_shortcut = false;
};

using DualIntersectionResult = DualIntersectionResultTpl<double>;
using Classification = ClassificationTpl<double>;

/// Looks for a direction v making a positive angle with every force
/// generator:
///
///   minimize s  s.t.  upsilon^T v + s >= 0,  s >= -1,  -1 <= v_k <= 1.
///
/// s* = 0 means no such v exists and any total force can be produced.
template <typename Scalar>
DualIntersectionResultTpl<Scalar>
dual_intersection_lp(const GeneratingMatricesTpl<Scalar> &gen) {
  const Eigen::Index n = gen.cols();
  LinearProgramTpl<Scalar> lp(4);
  lp.objective << Scalar(0), Scalar(0), Scalar(0), Scalar(1);
  lp.ineq_matrix.resize(n, 4);
  lp.ineq_matrix.leftCols(3) = gen.upsilon.transpose();
  lp.ineq_matrix.col(3).setOnes();
  lp.ineq_rhs = VectorXTpl<Scalar>::Zero(n);
  lp.lower << Scalar(-1), Scalar(-1), Scalar(-1), Scalar(-1);
  lp.upper.head(3).setOnes();

  LpSolutionTpl<Scalar> sol;
  try {
    sol = solve(lp);
  } catch (const Error &e) {
    throw LpFailure(std::string("dual intersection LP failed: ") + e.what());
  }
  // v = 0, s = 0 is always feasible and s is bounded below.
  if (!sol.optimal())
    throw LpFailure("dual intersection LP did not reach an optimum");

  DualIntersectionResultTpl<Scalar> res;
  res.s_star = *sol.objective_value;
  if (res.s_star < -Scalar(kClassificationTol)) {
    res.status = Verdict::Constrained;
    res.v = sol.x->head(3);
  }
  return res;
}

namespace detail {
template <typename Scalar>
bool all_normals_parallel(const ContactConfigurationTpl<Scalar> &config) {
  const Vec3Tpl<Scalar> n0 = config[0].normal();
  for (const auto &c : config.contacts())
    if ((c.normal() - n0).cwiseAbs().maxCoeff() > Scalar(1e-12))
      return false;
  return true;
}
} // namespace detail

/// Decides whether arbitrary total force is achievable at `com`.
template <typename Scalar>
ClassificationTpl<Scalar>
classify(const ContactConfigurationTpl<Scalar> &config,
         const Vec3Tpl<Scalar> &com, const ClassifyOptions &opts = {}) {
  ClassificationTpl<Scalar> cls;
  cls.generating = build_generating_matrices(config, com);

  if (opts.parallel_shortcut && detail::all_normals_parallel(config)) {
    const Vec3Tpl<Scalar> n = config[0].normal();
    cls.variant = Verdict::Constrained;
    cls.witness = n / n.cwiseAbs().maxCoeff();
    cls.s_star = Scalar(-1);
    cls.used_parallel_shortcut = true;
    return cls;
  }

  const auto dual = dual_intersection_lp(cls.generating);
  cls.s_star = dual.s_star;
  cls.variant = dual.status;
  if (dual.status == Verdict::Constrained)
    cls.witness = dual.v / dual.v.cwiseAbs().maxCoeff();
  return cls;
}

} // namespace mcwc
