#include "mcwc/hull.hpp"
#include "mcwc/contact_model.hpp"
#include "mcwc/lp.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <algorithm>
#include <functional>

using namespace mcwc;

namespace {

/// Is q a convex combination of the columns of P?
bool in_hull_lp(const MatrixX &P, const VectorX &q) {
  LinearProgram lp(P.cols());
  lp.lower.setZero();
  lp.eq_matrix.resize(P.rows() + 1, P.cols());
  lp.eq_matrix << P, Eigen::RowVectorXd::Ones(P.cols());
  lp.eq_rhs.resize(P.rows() + 1);
  lp.eq_rhs << q, 1.;
  return solve(lp).optimal();
}

using Plane = std::pair<VectorX, double>;

/// Facets by brute force: hyperplanes through d affinely independent points
/// with every point on one side.
std::vector<Plane> brute_force_facets(const MatrixX &P) {
  const Eigen::Index d = P.rows(), n = P.cols();
  std::vector<Plane> out;
  std::vector<Eigen::Index> idx(d);
  std::function<void(Eigen::Index, Eigen::Index)> rec = [&](Eigen::Index start,
                                                            Eigen::Index k) {
    if (k == d) {
      MatrixX D(d - 1, d);
      for (Eigen::Index j = 1; j < d; ++j)
        D.row(j - 1) = (P.col(idx[j]) - P.col(idx[0])).transpose();
      Eigen::JacobiSVD<MatrixX> svd(D, Eigen::ComputeFullV);
      if (d > 1 && svd.singularValues()(d - 2) < 1e-9)
        return;
      VectorX a = d > 1 ? VectorX(svd.matrixV().col(d - 1)) : VectorX::Ones(1);
      double w = a.dot(P.col(idx[0]));
      const VectorX s = (a.transpose() * P).transpose().array() - w;
      if (s.minCoeff() < -1e-9) {
        if (s.maxCoeff() > 1e-9)
          return;
        a = -a;
        w = -w;
      }
      for (const auto &p : out)
        if ((p.first - a).cwiseAbs().maxCoeff() < 1e-7 &&
            std::abs(p.second - w) < 1e-7)
          return;
      out.push_back({a, w});
      return;
    }
    for (Eigen::Index i = start; i < n; ++i) {
      idx[k] = i;
      rec(i + 1, k + 1);
    }
  };
  rec(0, 0);
  return out;
}

bool same_planes(const HullResult &h, const std::vector<Plane> &expect) {
  if (h.facets.size() != expect.size())
    return false;
  for (const auto &f : h.facets) {
    bool found = false;
    for (const auto &p : expect)
      found = found || ((f.normal - p.first).cwiseAbs().maxCoeff() < 1e-7 &&
                        std::abs(f.offset - p.second) < 1e-7);
    if (!found)
      return false;
  }
  return true;
}

void check_invariants(const PointCloud &pc, const HullResult &h) {
  CHECK(h.affine_dim + Eigen::Index(h.equalities.size()) == pc.dim());
  for (const auto &f : h.facets) {
    CHECK(f.normal.norm() == doctest::Approx(1.0).epsilon(1e-12));
    const VectorX slack =
        (f.normal.transpose() * pc.points).transpose().array() - f.offset;
    CHECK(slack.minCoeff() >= -1e-9);
    CHECK(Eigen::Index(f.vertices.size()) >= h.affine_dim);
    for (auto v : f.vertices)
      CHECK(std::abs(slack(v)) <= 1e-9);
  }
  for (const auto &e : h.equalities) {
    CHECK(e.normal.norm() == doctest::Approx(1.0).epsilon(1e-12));
    for (Eigen::Index i = 0; i < pc.size(); ++i)
      CHECK(std::abs(e.normal.dot(pc.points.col(i)) - e.offset) <= 1e-9);
  }
}

/// Membership via the hull agrees with the LP on mixtures of the points
/// (inside) and on points pushed outward from them.
void check_membership(const PointCloud &pc, const HullResult &h, int queries,
                      std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0., 1.);
  std::normal_distribution<double> g(0., 1.);
  const Eigen::Index d = pc.dim(), n = pc.size();
  int compared = 0;
  for (int q = 0; q < queries; ++q) {
    VectorX lam(n);
    for (Eigen::Index i = 0; i < n; ++i)
      lam(i) = -std::log(1. - u(rng));
    VectorX pt = pc.points * (lam / lam.sum());
    if (q % 2) {
      VectorX dir(d);
      for (Eigen::Index i = 0; i < d; ++i)
        dir(i) = g(rng);
      pt = pc.points.col(q % n) + 0.3 * u(rng) * dir;
    }
    // Points in the affine hull sit exactly on the equalities; only the
    // facets and genuine off-plane offsets get the boundary band.
    double facet_slack = std::numeric_limits<double>::infinity();
    for (const auto &f : h.facets)
      facet_slack = std::min(facet_slack, f.normal.dot(pt) - f.offset);
    double off_plane = 0.;
    for (const auto &e : h.equalities)
      off_plane = std::max(off_plane, std::abs(e.normal.dot(pt) - e.offset));
    if (std::abs(facet_slack) <= 1e-7 || (off_plane > 1e-12 && off_plane <= 1e-7))
      continue;
    ++compared;
    CHECK(h.contains(pt) == in_hull_lp(pc.points, pt));
  }
  CHECK(compared > queries / 2);
}

MatrixX cube(int d) {
  MatrixX P(d, 1 << d);
  for (int i = 0; i < (1 << d); ++i)
    for (int k = 0; k < d; ++k)
      P(k, i) = (i >> k) & 1 ? 1. : -1.;
  return P;
}

} // namespace

TEST_CASE("affine dimension") {
  MatrixX one(5, 1);
  one << 1, 2, 3, 4, 5;
  CHECK(affine_dimension(PointCloud(one)).dim == 0);

  MatrixX line(5, 3);
  VectorX a(5), dir(5);
  a << 1, 0, -1, 2, 0.5;
  dir << 0.3, 1, 0, -2, 1;
  line << a, a + dir, a - 2.5 * dir;
  CHECK(affine_dimension(PointCloud(line)).dim == 1);

  // 16 generator points of four generic contacts.
  std::mt19937_64 rng(1);
  std::vector<Contact> cs;
  for (int i = 0; i < 4; ++i)
    cs.emplace_back(test::random_vec(rng), test::random_rotation(rng),
                    FrictionConeSpec(0.8, 4));
  const auto gen =
      build_generating_matrices(ContactConfiguration(cs), Vec3(Vec3::Zero()));
  MatrixX pts(5, gen.cols());
  pts << gen.upsilon.topRows(2), gen.gamma;
  CHECK(affine_dimension(PointCloud(pts)).dim == 5);
}

TEST_CASE("unit square") {
  const PointCloud pc(cube(2));
  const auto h = convex_hull(pc);
  CHECK(h.affine_dim == 2);
  CHECK(h.equalities.empty());
  REQUIRE(h.facets.size() == 4);
  for (const auto &f : h.facets) {
    CHECK(f.offset == doctest::Approx(-1.0));
    CHECK(f.normal.cwiseAbs().maxCoeff() == doctest::Approx(1.0));
  }
  check_invariants(pc, h);
}

TEST_CASE("tangential square of a single pyramid") {
  const auto U = cone_generators(FrictionConeSpec(0.8, 4));
  const PointCloud pc(MatrixX(U.topRows(2)));
  const auto h = convex_hull(pc);
  REQUIRE(h.facets.size() == 4);
  const double half = 0.8 * std::sqrt(0.5);
  for (const auto &f : h.facets) {
    // Edges of the square x = +-h, y = +-h.
    CHECK(f.normal.cwiseAbs().maxCoeff() == doctest::Approx(1.0));
    CHECK(f.offset == doctest::Approx(-half).epsilon(1e-12));
  }
}

TEST_CASE("5D simplex has six facets") {
  MatrixX P = MatrixX::Zero(5, 6);
  P.rightCols(5) = MatrixX::Identity(5, 5);
  const PointCloud pc(P);
  const auto h = convex_hull(pc);
  CHECK(h.facets.size() == 6);
  check_invariants(pc, h);
}

TEST_CASE("degenerate inputs") {
  MatrixX same(3, 4);
  same.colwise() = Vec3(1, 2, 3);
  const PointCloud pc(same);
  const auto h = convex_hull(pc);
  CHECK(h.affine_dim == 0);
  CHECK(h.facets.empty());
  CHECK(h.equalities.size() == 3);
  CHECK(h.contains(Vec3(1, 2, 3)));
  CHECK_FALSE(h.contains(Vec3(1, 2, 3.1)));
  CHECK_THROWS_AS(PointCloud(MatrixX(3, 0)), DegenerateInput);

  // A planar square sitting in 4D.
  MatrixX flat = MatrixX::Zero(4, 4);
  flat.topRows(2) = cube(2);
  flat.row(3).setConstant(2.);
  const PointCloud fpc(flat);
  const auto fh = convex_hull(fpc);
  CHECK(fh.affine_dim == 2);
  CHECK(fh.equalities.size() == 2);
  CHECK(fh.facets.size() == 4);
  check_invariants(fpc, fh);
  check_membership(fpc, fh, 200, 3);
}

TEST_CASE("hull matches brute-force facet enumeration") {
  std::mt19937_64 rng(123);
  std::normal_distribution<double> g(0., 1.);
  for (int d = 2; d <= 5; ++d) {
    for (int trial = 0; trial < 6; ++trial) {
      const int n = d + 3 + trial;
      MatrixX P(d, n);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < n; ++j)
          P(i, j) = g(rng);
      const PointCloud pc(P);
      const auto h = convex_hull(pc);
      CHECK(same_planes(h, brute_force_facets(P)));
      check_invariants(pc, h);
    }
  }
  // Highly degenerate: cubes and cube + centre.
  for (int d = 2; d <= 5; ++d) {
    MatrixX P = cube(d);
    const PointCloud pc(P);
    const auto h = convex_hull(pc);
    CHECK(h.facets.size() == std::size_t(2 * d));
    check_invariants(pc, h);
  }
}

TEST_CASE("membership agrees with the LP oracle") {
  std::mt19937_64 rng(77);
  std::normal_distribution<double> g(0., 1.);
  for (int d = 3; d <= 5; ++d) {
    MatrixX P(d, 30);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < 30; ++j)
        P(i, j) = g(rng);
    const PointCloud pc(P);
    const auto h = convex_hull(pc);
    check_invariants(pc, h);
    check_membership(pc, h, 1000, 10 + d);
  }
  // A lattice: many coplanar points on every facet.
  MatrixX grid(3, 27);
  int k = 0;
  for (int x = -1; x <= 1; ++x)
    for (int y = -1; y <= 1; ++y)
      for (int z = -1; z <= 1; ++z)
        grid.col(k++) << x, y, z;
  const PointCloud gpc(grid);
  const auto gh = convex_hull(gpc);
  CHECK(gh.facets.size() == 6);
  check_invariants(gpc, gh);
  check_membership(gpc, gh, 1000, 5);
}

TEST_CASE("permutation invariance and facet reproducibility") {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> g(0., 1.);
  MatrixX P(4, 20);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 20; ++j)
      P(i, j) = g(rng);
  const auto h = convex_hull(PointCloud(P));

  std::vector<Eigen::Index> perm(20);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  MatrixX Q(4, 20);
  for (int j = 0; j < 20; ++j)
    Q.col(j) = P.col(perm[j]);
  const auto hq = convex_hull(PointCloud(Q));
  REQUIRE(hq.facets.size() == h.facets.size());
  for (std::size_t i = 0; i < h.facets.size(); ++i) {
    CHECK((h.facets[i].normal - hq.facets[i].normal).cwiseAbs().maxCoeff() <
          1e-9);
    CHECK(std::abs(h.facets[i].offset - hq.facets[i].offset) < 1e-9);
  }

  // Each facet's incident points span exactly that facet's plane.
  for (const auto &f : h.facets) {
    MatrixX inc(4, Eigen::Index(f.vertices.size()));
    for (Eigen::Index c = 0; c < inc.cols(); ++c)
      inc.col(c) = P.col(f.vertices[c]);
    const auto sub = convex_hull(PointCloud(inc));
    CHECK(sub.affine_dim == 3);
    REQUIRE(sub.equalities.size() == 1);
    const auto &e = sub.equalities[0];
    const double sign = e.normal.dot(f.normal) > 0 ? 1. : -1.;
    CHECK((sign * e.normal - f.normal).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(std::abs(sign * e.offset - f.offset) < 1e-9);
  }
}
