#include "test_support.hpp"

#include <doctest.h>

#include <cmath>

using namespace mcwc;
using doctest::Approx;

TEST_CASE("cone generators follow the pyramid edge formula") {
  const auto U = cone_generators(FrictionConeSpec(0.8, 4));
  REQUIRE(U.cols() == 4);
  const double h = 0.8 * std::sqrt(2.) / 2.;
  CHECK(U(0, 0) == Approx(h).epsilon(1e-14));
  CHECK(U(1, 0) == Approx(h).epsilon(1e-14));
  CHECK(U(0, 0) == Approx(0.56569).epsilon(1e-5));
  for (int i = 0; i < 4; ++i)
    CHECK(U(2, i) == 1.0);

  // The four (x, y) pairs are the four sign combinations of +-h.
  int seen = 0;
  for (int i = 0; i < 4; ++i) {
    CHECK(std::abs(std::abs(U(0, i)) - h) < 1e-14);
    CHECK(std::abs(std::abs(U(1, i)) - h) < 1e-14);
    seen |= 1 << ((U(0, i) > 0) * 2 + (U(1, i) > 0));
  }
  CHECK(seen == 0b1111);
}

TEST_CASE("frictionless cone collapses to the normal ray") {
  const auto U = cone_generators(FrictionConeSpec(0.0, 4));
  for (int i = 0; i < 4; ++i)
    CHECK(U.col(i).isApprox(Vec3::UnitZ()));
}

TEST_CASE("cone invariants are enforced") {
  CHECK_THROWS_AS(FrictionConeSpec(0.5, 2), InvalidArgument);
  CHECK_THROWS_AS(FrictionConeSpec(-0.1, 4), InvalidArgument);
  CHECK_THROWS_AS(FrictionConeSpec(std::nan(""), 4), InvalidArgument);
  Mat3 bad = Mat3::Identity();
  bad(0, 0) = -1; // reflection
  CHECK_THROWS_AS(Contact(Vec3::Zero(), bad, FrictionConeSpec(0.5, 4)),
                  InvalidArgument);
  CHECK_THROWS_AS(ContactConfiguration(std::vector<Contact>{}), InvalidArgument);
}

TEST_CASE("rotating the generators by 2 pi / m permutes them") {
  for (int m : {3, 4, 5, 8}) {
    const auto U = cone_generators(FrictionConeSpec(0.7, m));
    const Mat3 Rz =
        Eigen::AngleAxisd(2. * std::numbers::pi / m, Vec3::UnitZ()).matrix();
    const Matrix3XTpl<double> V = Rz * U;
    for (int i = 0; i < m; ++i) {
      double best = 1e9;
      for (int j = 0; j < m; ++j)
        best = std::min(best, (V.col(i) - U.col(j)).cwiseAbs().maxCoeff());
      CHECK(best < 1e-12);
    }
  }
}

TEST_CASE("skew matches the cross product") {
  CHECK(skew(Vec3::Zero()).isZero(0.));
  CHECK(skew(Vec3::UnitX()) * Vec3::UnitY() == Vec3::UnitZ());
  std::mt19937_64 rng(7);
  for (int k = 0; k < 200; ++k) {
    const Vec3 r = test::random_vec(rng, 3.), x = test::random_vec(rng, 3.);
    const Vec3 cross(r.y() * x.z() - r.z() * x.y(),
                     r.z() * x.x() - r.x() * x.z(),
                     r.x() * x.y() - r.y() * x.x());
    CHECK((skew(r) * x - cross).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((skew(r) + skew(r).transpose()).isZero(0.));
  }
}

TEST_CASE("generating matrices: sizes") {
  std::vector<Contact> four, twelve;
  for (int i = 0; i < 12; ++i) {
    const auto c = test::flat_contact(Vec3(0.1 * i, 0.05 * (i % 3), 0.));
    if (i < 4)
      four.push_back(c);
    twelve.push_back(c);
  }
  const auto g4 =
      build_generating_matrices(ContactConfiguration(four), Vec3(0, 0, 1));
  CHECK(g4.upsilon.rows() == 3);
  CHECK(g4.upsilon.cols() == 16);
  CHECK(g4.gamma.cols() == 16);
  const auto g12 =
      build_generating_matrices(ContactConfiguration(twelve), Vec3(0, 0, 1));
  CHECK(g12.upsilon.cols() == 48);
}

TEST_CASE("generating matrices: single contact at the anchor") {
  const ContactConfiguration cfg({test::flat_contact(Vec3(0.3, -0.2, 0.1))});
  const auto g = build_generating_matrices(cfg, Vec3(0.3, -0.2, 0.1));
  CHECK(g.gamma.isZero(0.));
  CHECK(g.upsilon.isApprox(cone_generators(FrictionConeSpec(0.8, 4))));
}

TEST_CASE("generating matrices: column consistency and heterogeneous cones") {
  std::mt19937_64 rng(11);
  std::vector<Contact> cs;
  for (int i = 0; i < 5; ++i)
    cs.emplace_back(test::random_vec(rng), test::random_rotation(rng),
                    FrictionConeSpec(0.3 + 0.1 * i, 3 + i));
  const ContactConfiguration cfg(cs);
  const Vec3 com = test::random_vec(rng);
  const auto g = build_generating_matrices(cfg, com);
  CHECK(g.cols() == 3 + 4 + 5 + 6 + 7);
  REQUIRE(g.column_origin.size() == std::size_t(g.cols()));
  for (Eigen::Index k = 0; k < g.cols(); ++k) {
    const auto &o = g.column_origin[k];
    const Vec3 expect = skew(cfg[o.contact].point - com) * g.upsilon.col(k);
    CHECK((g.gamma.col(k) - expect).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(cfg[o.contact].normal().dot(g.upsilon.col(k)) ==
          Approx(1.0).epsilon(1e-12));
  }

  // Re-anchoring the generators equals rebuilding them.
  const Vec3 delta(0.1, -0.3, 0.2);
  const auto shifted = shift_generating_matrices(g, delta);
  const auto rebuilt = build_generating_matrices(cfg, Vec3(com + delta));
  CHECK((shifted.gamma - rebuilt.gamma).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("duplicate contacts are flagged, not rejected") {
  const auto c = test::flat_contact(Vec3(0, 0, 0));
  const ContactConfiguration cfg({c, c});
  CHECK(cfg.has_duplicates());
  CHECK_FALSE(ContactConfiguration({c}).has_duplicates());
}

TEST_CASE("required wrench") {
  const RigidBodyParams body(10., Vec3(0, 0, -9.81));
  const Vec3 com(0.1, 0.2, 0.9);

  MotionQuery free_fall{Vec3(0, 0, -9.81), Vec3::Zero()};
  auto w = required_wrench(body, free_fall, com);
  CHECK(w.force.isZero(1e-12));
  CHECK(w.about == com);

  MotionQuery stand{Vec3::Zero(), Vec3::Zero()};
  w = required_wrench(body, stand, com);
  CHECK((w.force - Vec3(0, 0, 98.1)).norm() < 1e-12);
  CHECK(w.moment.isZero(0.));

  MotionQuery push{Vec3(1, 0, 0), Vec3(0.5, 0, 0)};
  w = required_wrench(body, push, com);
  CHECK((w.force - Vec3(10, 0, 98.1)).norm() < 1e-12);
  CHECK(w.moment == Vec3(0.5, 0, 0));

  CHECK_THROWS_AS(RigidBodyParams(0., Vec3::Zero()), InvalidArgument);
}

TEST_CASE("rotation aligning z") {
  CHECK(rotation_aligning_z(Vec3(0, 0, 5)).isApprox(Mat3::Identity()));

  const Mat3 flip = rotation_aligning_z(Vec3(0, 0, -1));
  Mat3 rx;
  rx << 1, 0, 0, 0, -1, 0, 0, 0, -1;
  CHECK((flip - rx).cwiseAbs().maxCoeff() < 1e-15);

  CHECK_THROWS_AS(rotation_aligning_z(Vec3(0, 0, 1e-13)), ZeroVector);

  std::mt19937_64 rng(3);
  std::vector<Vec3> dirs = {Vec3(1, 1, 1), Vec3(1, 0, 0), Vec3(0, -1, 0),
                            Vec3(1e-9, 0, -1), Vec3(-1e-7, 2e-8, -1),
                            Vec3(0.3, -0.2, -1e-14)};
  for (int i = 0; i < 200; ++i)
    dirs.push_back(test::random_vec(rng, 2.));
  for (const Vec3 &v : dirs) {
    const Mat3 R = rotation_aligning_z(v);
    CHECK((R * v.normalized() - Vec3::UnitZ()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((R.transpose() * R - Mat3::Identity()).cwiseAbs().maxCoeff() <
          1e-12);
    CHECK(R.determinant() == Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("frames completed from a normal follow the tangent convention") {
  const Mat3 ground = rotation_from_normal(Vec3(0, 0, 2));
  CHECK(ground.isApprox(Mat3::Identity()));
  const Mat3 wall = rotation_from_normal(Vec3(-1, 0, 0));
  CHECK(wall.col(0).isApprox(Vec3::UnitY()));
  CHECK(wall.col(2).isApprox(Vec3(-1, 0, 0)));
  CHECK(wall.determinant() == Approx(1.0));
  const Mat3 ramp = rotation_from_normal(Vec3(-1, 0, 1));
  CHECK(ramp.col(0).isApprox(Vec3(1, 0, 1).normalized()));
  CHECK(ramp.determinant() == Approx(1.0));
}
