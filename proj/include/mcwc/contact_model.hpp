#pragma once

#include "mcwc/fwd.hpp"

#include <Eigen/Geometry>

#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <vector>

namespace mcwc {

/// Force and moment, the moment being taken about `about` (world frame).
template <typename _Scalar> struct WrenchTpl {
  using Scalar = _Scalar;
  using Vec3 = Vec3Tpl<Scalar>;
  using Vec6 = Vec6Tpl<Scalar>;

  Vec3 force = Vec3::Zero();
  Vec3 moment = Vec3::Zero();
  Vec3 about = Vec3::Zero();

  WrenchTpl() = default;
  WrenchTpl(const Vec3 &f, const Vec3 &m, const Vec3 &point)
      : force(f), moment(m), about(point) {
    if (!force.allFinite() || !moment.allFinite() || !about.allFinite())
      throw InvalidArgument("wrench components must be finite");
  }

  /// Stacked [F; M].
  Vec6 stacked() const {
    Vec6 w;
    w << force, moment;
    return w;
  }
};

/// m-sided pyramid approximating a Coulomb cone of coefficient mu.
struct FrictionConeSpec {
  double mu = 0.5;
  int sides = 4;

  FrictionConeSpec() = default;
  FrictionConeSpec(double mu_, int sides_) : mu(mu_), sides(sides_) {
    // mu == 0 is tolerated: the pyramid collapses onto the normal ray.
    if (!std::isfinite(mu) || mu < 0.)
      throw InvalidArgument("mu must be a finite non-negative number");
    if (sides < 3)
      throw InvalidArgument("sides must be at least 3");
  }

  bool operator==(const FrictionConeSpec &) const = default;
};

template <typename _Scalar> struct ContactTpl {
  using Scalar = _Scalar;
  using Vec3 = Vec3Tpl<Scalar>;
  using Mat3 = Mat3Tpl<Scalar>;

  /// World position of the contact point.
  Vec3 point = Vec3::Zero();
  /// Local contact frame to world; the local z-axis is the inward normal.
  Mat3 rotation = Mat3::Identity();
  FrictionConeSpec cone;

  ContactTpl() = default;
  ContactTpl(const Vec3 &p, const Mat3 &R, const FrictionConeSpec &c)
      : point(p), rotation(R), cone(c) {
    if (!point.allFinite() || !rotation.allFinite())
      throw InvalidArgument("contact point and rotation must be finite");
    const Scalar ortho =
        (rotation.transpose() * rotation - Mat3::Identity())
            .cwiseAbs()
            .maxCoeff();
    if (ortho > Scalar(1e-10) || rotation.determinant() <= Scalar(0))
      throw InvalidArgument("contact rotation must be a proper rotation");
  }

  Vec3 normal() const { return rotation.col(2); }

  bool operator==(const ContactTpl &other) const {
    return point == other.point && rotation == other.rotation &&
           cone == other.cone;
  }
};

/// Ordered, non-empty list of contacts. Exact duplicates are accepted and
/// flagged since they only add redundant generators.
template <typename _Scalar> class ContactConfigurationTpl {
public:
  using Scalar = _Scalar;
  using Contact = ContactTpl<Scalar>;

  ContactConfigurationTpl() = default;
  explicit ContactConfigurationTpl(std::vector<Contact> contacts)
      : contacts_(std::move(contacts)) {
    if (contacts_.empty())
      throw InvalidArgument("a contact configuration needs at least one "
                            "contact");
    for (std::size_t i = 0; i < contacts_.size() && !has_duplicates_; ++i)
      for (std::size_t j = i + 1; j < contacts_.size(); ++j)
        if (contacts_[i].point == contacts_[j].point &&
            contacts_[i].rotation == contacts_[j].rotation) {
          has_duplicates_ = true;
          break;
        }
  }

  const std::vector<Contact> &contacts() const { return contacts_; }
  std::size_t size() const { return contacts_.size(); }
  const Contact &operator[](std::size_t i) const { return contacts_[i]; }
  bool has_duplicates() const { return has_duplicates_; }

  /// Total number of pyramid edges over all contacts.
  Eigen::Index num_generators() const {
    Eigen::Index n = 0;
    for (const auto &c : contacts_)
      n += c.cone.sides;
    return n;
  }

  bool operator==(const ContactConfigurationTpl &other) const {
    return contacts_ == other.contacts_;
  }

private:
  std::vector<Contact> contacts_;
  bool has_duplicates_ = false;
};

struct ColumnOrigin {
  std::size_t contact;
  int edge;
};

/// Stacked force generators (upsilon) and their moments about `anchor`
/// (gamma). Column k of both belongs to the contact/edge in column_origin[k].
template <typename _Scalar> struct GeneratingMatricesTpl {
  using Scalar = _Scalar;
  using Matrix3X = Matrix3XTpl<Scalar>;
  using Matrix6X = Matrix6XTpl<Scalar>;
  using Vec3 = Vec3Tpl<Scalar>;

  Matrix3X upsilon;
  Matrix3X gamma;
  Vec3 anchor = Vec3::Zero();
  std::vector<ColumnOrigin> column_origin;

  Eigen::Index cols() const { return upsilon.cols(); }

  /// [upsilon; gamma], the 6 x N wrench generator matrix.
  Matrix6X stacked() const {
    Matrix6X p(6, upsilon.cols());
    p << upsilon, gamma;
    return p;
  }
};

template <typename _Scalar> struct RigidBodyParamsTpl {
  using Scalar = _Scalar;
  using Vec3 = Vec3Tpl<Scalar>;

  Scalar mass = Scalar(1);
  Vec3 gravity = Vec3(Scalar(0), Scalar(0), Scalar(-9.81));

  RigidBodyParamsTpl() = default;
  RigidBodyParamsTpl(Scalar m, const Vec3 &g) : mass(m), gravity(g) {
    if (!(mass > Scalar(0)) || !std::isfinite(double(mass)))
      throw InvalidArgument("mass must be positive");
    if (!gravity.allFinite())
      throw InvalidArgument("gravity must be finite");
  }
};

/// Desired CoM acceleration and, optionally, rate of change of angular
/// momentum. Leaving the latter empty asks about the force alone.
template <typename _Scalar> struct MotionQueryTpl {
  using Scalar = _Scalar;
  using Vec3 = Vec3Tpl<Scalar>;

  Vec3 com_accel = Vec3::Zero();
  std::optional<Vec3> angular_momentum_rate;
};

using Wrench = WrenchTpl<double>;
using Contact = ContactTpl<double>;
using ContactConfiguration = ContactConfigurationTpl<double>;
using GeneratingMatrices = GeneratingMatricesTpl<double>;
using RigidBodyParams = RigidBodyParamsTpl<double>;
using MotionQuery = MotionQueryTpl<double>;

/// Edge vectors of the friction pyramid in the local contact frame.
/// Column i is [mu cos(2 pi (i + 1/2) / m), mu sin(...), 1] (0-based i).
template <typename Scalar = double>
Matrix3XTpl<Scalar> cone_generators(const FrictionConeSpec &cone) {
  const int m = cone.sides;
  Matrix3XTpl<Scalar> U(3, m);
  for (int i = 0; i < m; ++i) {
    const double angle = 2. * std::numbers::pi * (i + 0.5) / m;
    U(0, i) = Scalar(cone.mu * std::cos(angle));
    U(1, i) = Scalar(cone.mu * std::sin(angle));
    U(2, i) = Scalar(1);
  }
  return U;
}

template <typename Derived>
Mat3Tpl<typename Derived::Scalar> skew(const Eigen::MatrixBase<Derived> &r) {
  EIGEN_STATIC_ASSERT_VECTOR_SPECIFIC_SIZE(Derived, 3);
  using Scalar = typename Derived::Scalar;
  Mat3Tpl<Scalar> S;
  S << Scalar(0), -r(2), r(1), //
      r(2), Scalar(0), -r(0),  //
      -r(1), r(0), Scalar(0);
  return S;
}

template <typename Scalar>
GeneratingMatricesTpl<Scalar>
build_generating_matrices(const ContactConfigurationTpl<Scalar> &config,
                          const Vec3Tpl<Scalar> &com) {
  GeneratingMatricesTpl<Scalar> gen;
  const Eigen::Index total = config.num_generators();
  gen.upsilon.resize(3, total);
  gen.gamma.resize(3, total);
  gen.anchor = com;
  gen.column_origin.reserve(static_cast<std::size_t>(total));

  Eigen::Index col = 0;
  for (std::size_t i = 0; i < config.size(); ++i) {
    const auto &c = config[i];
    const Matrix3XTpl<Scalar> forces =
        c.rotation * cone_generators<Scalar>(c.cone);
    const Eigen::Index m = forces.cols();
    gen.upsilon.middleCols(col, m) = forces;
    gen.gamma.middleCols(col, m) = skew(c.point - com) * forces;
    for (int j = 0; j < m; ++j)
      gen.column_origin.push_back({i, j});
    col += m;
  }
  return gen;
}

/// Re-expresses the moment generators about `anchor + delta`; the force
/// generators are unchanged.
template <typename Scalar>
GeneratingMatricesTpl<Scalar>
shift_generating_matrices(const GeneratingMatricesTpl<Scalar> &gen,
                          const Vec3Tpl<Scalar> &delta) {
  GeneratingMatricesTpl<Scalar> out = gen;
  out.gamma.noalias() -= skew(delta) * gen.upsilon;
  out.anchor = gen.anchor + delta;
  return out;
}

/// Total contact wrench about `com` needed to realise the query:
/// F = m (a - g), M = Ldot (zero when the query leaves it open).
template <typename Scalar>
WrenchTpl<Scalar> required_wrench(const RigidBodyParamsTpl<Scalar> &body,
                                  const MotionQueryTpl<Scalar> &q,
                                  const Vec3Tpl<Scalar> &com) {
  const Vec3Tpl<Scalar> force = body.mass * (q.com_accel - body.gravity);
  const Vec3Tpl<Scalar> moment =
      q.angular_momentum_rate.value_or(Vec3Tpl<Scalar>::Zero());
  return WrenchTpl<Scalar>(force, moment, com);
}

/// Rotation R with R * v / |v| = e_z.
///
/// For v in the lower hemisphere the result is R' * Rx(pi), where Rx(pi)
/// flips v into the upper hemisphere and R' is the Rodrigues rotation
/// from there to e_z. In particular v = -e_z maps to Rx(pi) exactly.
template <typename Derived>
Mat3Tpl<typename Derived::Scalar>
rotation_aligning_z(const Eigen::MatrixBase<Derived> &v) {
  using Scalar = typename Derived::Scalar;
  using Vec3 = Vec3Tpl<Scalar>;
  using Mat3 = Mat3Tpl<Scalar>;
  const Scalar norm = v.norm();
  if (!(norm > Scalar(1e-12)))
    throw ZeroVector("cannot align e_z with a zero vector");
  Vec3 dir = v / norm;
  Mat3 flip = Mat3::Identity();
  if (dir.z() < Scalar(0)) {
    flip.diagonal() << Scalar(1), Scalar(-1), Scalar(-1);
    dir = flip * dir;
  }
  // Rodrigues with axis dir x e_z: R = I + K + K^2 / (1 + cos).
  const Vec3 axis(dir.y(), -dir.x(), Scalar(0));
  const Scalar c = dir.z();
  const Mat3 K = skew(axis);
  const Mat3 R = Mat3::Identity() + K + K * K / (Scalar(1) + c);
  return R * flip;
}

/// Completes an inward surface normal to a local contact frame. The first
/// tangent is world-x projected onto the tangent plane (world-y when the
/// normal is within 1e-6 of +-x).
template <typename Derived>
Mat3Tpl<typename Derived::Scalar>
rotation_from_normal(const Eigen::MatrixBase<Derived> &normal) {
  using Scalar = typename Derived::Scalar;
  using Vec3 = Vec3Tpl<Scalar>;
  const Scalar norm = normal.norm();
  if (!(norm > Scalar(1e-12)))
    throw ZeroVector("contact normal must be non-zero");
  const Vec3 n = normal / norm;
  Vec3 ref = Vec3::UnitX();
  if (Scalar(1) - std::abs(n.x()) <= Scalar(1e-6))
    ref = Vec3::UnitY();
  const Vec3 t1 = (ref - ref.dot(n) * n).normalized();
  const Vec3 t2 = n.cross(t1);
  Mat3Tpl<Scalar> R;
  R << t1, t2, n;
  return R;
}

} // namespace mcwc
