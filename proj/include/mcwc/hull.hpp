#pragma once

#include "mcwc/fwd.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <vector>

namespace mcwc {

/// Finite set of points, one per column.
template <typename _Scalar> struct PointCloudTpl {
  using Scalar = _Scalar;
  using MatrixX = MatrixXTpl<Scalar>;

  MatrixX points;

  PointCloudTpl() = default;
  explicit PointCloudTpl(MatrixX pts) : points(std::move(pts)) {
    if (points.cols() < 1 || points.rows() < 1)
      throw DegenerateInput("a point cloud needs at least one point");
    if (!points.allFinite())
      throw InvalidArgument("point coordinates must be finite");
  }

  Eigen::Index dim() const { return points.rows(); }
  Eigen::Index size() const { return points.cols(); }
};

/// normal . p = offset
template <typename _Scalar> struct HyperplaneTpl {
  using Scalar = _Scalar;
  VectorXTpl<Scalar> normal;
  Scalar offset = Scalar(0);
};

/// Supporting half-space normal . p >= offset with unit normal, and the
/// indices of input points lying on it.
template <typename _Scalar> struct FacetTpl {
  using Scalar = _Scalar;
  VectorXTpl<Scalar> normal;
  Scalar offset = Scalar(0);
  std::vector<Eigen::Index> vertices;
};

template <typename _Scalar> struct HullResultTpl {
  using Scalar = _Scalar;
  using VectorX = VectorXTpl<Scalar>;

  Eigen::Index dim = 0;
  Eigen::Index affine_dim = 0;
  std::vector<FacetTpl<Scalar>> facets;
  std::vector<HyperplaneTpl<Scalar>> equalities;

  /// Smallest constraint slack at q; equalities count as two half-spaces.
  template <typename Derived>
  Scalar margin(const Eigen::MatrixBase<Derived> &q) const {
    Scalar m = std::numeric_limits<Scalar>::infinity();
    for (const auto &f : facets)
      m = std::min(m, f.normal.dot(q) - f.offset);
    for (const auto &e : equalities)
      m = std::min(m, -std::abs(e.normal.dot(q) - e.offset));
    return m;
  }

  template <typename Derived>
  bool contains(const Eigen::MatrixBase<Derived> &q,
                Scalar tol = Scalar(1e-9)) const {
    return margin(q) >= -tol;
  }
};

template <typename _Scalar> struct AffineHullTpl {
  using Scalar = _Scalar;
  Eigen::Index dim = 0;
  /// Orthonormal basis of the affine hull's direction space (d x dim).
  MatrixXTpl<Scalar> basis;
  /// Orthonormal complement (d x (d - dim)).
  MatrixXTpl<Scalar> complement;
  VectorXTpl<Scalar> centroid;
};

struct HullSettings {
  /// Singular values below rank_tol * sigma_max count as zero.
  double rank_tol = 1e-9;
  /// A point is beyond a facet when farther than this (times the cloud
  /// diameter).
  double visibility_tol = 1e-11;
  /// Simplicial facets whose planes agree to this (times the diameter)
  /// are reported once.
  double merge_tol = 1e-9;
};

using PointCloud = PointCloudTpl<double>;
using Hyperplane = HyperplaneTpl<double>;
using Facet = FacetTpl<double>;
using HullResult = HullResultTpl<double>;
using AffineHull = AffineHullTpl<double>;

template <typename Scalar>
AffineHullTpl<Scalar> affine_dimension(const PointCloudTpl<Scalar> &pc,
                                       Scalar tol = Scalar(1e-9)) {
  using MatrixX = MatrixXTpl<Scalar>;
  const Eigen::Index d = pc.dim();
  AffineHullTpl<Scalar> out;
  out.centroid = pc.points.rowwise().mean();
  const MatrixX centered = pc.points.colwise() - out.centroid;

  Eigen::JacobiSVD<MatrixX> svd(centered, Eigen::ComputeFullU);
  const auto &sv = svd.singularValues();
  const Scalar smax = sv.size() ? sv(0) : Scalar(0);
  const Scalar magnitude =
      Scalar(1) + pc.points.cwiseAbs().maxCoeff();
  const Scalar floor =
      Scalar(1e-14) * magnitude * std::sqrt(Scalar(pc.size()));
  Eigen::Index rank = 0;
  if (smax > floor)
    for (Eigen::Index i = 0; i < sv.size(); ++i)
      if (sv(i) > tol * smax)
        ++rank;
  out.dim = rank;
  out.basis = svd.matrixU().leftCols(rank);
  out.complement = svd.matrixU().rightCols(d - rank);
  return out;
}

namespace detail {

/// Beneath-beyond/quickhull over points that are full-dimensional in their
/// own (k-dimensional) space.
template <typename Scalar> class QuickHull {
public:
  using VectorX = VectorXTpl<Scalar>;
  using MatrixX = MatrixXTpl<Scalar>;

  struct SimplexFacet {
    std::vector<Eigen::Index> verts;
    std::vector<Eigen::Index> neighbors; // neighbors[j] is opposite verts[j]
    VectorX normal;                      // outward
    Scalar offset = Scalar(0);
    std::vector<Eigen::Index> outside;
    bool alive = true;
    int visit = -1;

    Scalar height(const VectorX &p) const { return normal.dot(p) - offset; }
  };

  QuickHull(const MatrixX &pts, Scalar eps) : pts_(pts), eps_(eps) {
    k_ = pts_.rows();
  }

  std::vector<SimplexFacet> run() {
    build_initial_simplex();
    std::vector<Eigen::Index> stack;
    for (Eigen::Index f = 0; f < Eigen::Index(facets_.size()); ++f)
      stack.push_back(f);
    int round = 0;
    while (!stack.empty()) {
      const Eigen::Index f = stack.back();
      if (!facets_[f].alive || facets_[f].outside.empty()) {
        stack.pop_back();
        continue;
      }
      const Eigen::Index apex = furthest_outside(facets_[f]);
      add_point(f, apex, ++round, stack);
    }
    std::vector<SimplexFacet> out;
    for (auto &f : facets_)
      if (f.alive)
        out.push_back(std::move(f));
    return out;
  }

  const VectorX &interior() const { return interior_; }

private:
  VectorX point(Eigen::Index i) const { return pts_.col(i); }

  Eigen::Index furthest_outside(const SimplexFacet &f) const {
    Eigen::Index best = f.outside.front();
    Scalar hbest = f.height(point(best));
    for (Eigen::Index i : f.outside) {
      const Scalar h = f.height(point(i));
      if (h > hbest) {
        hbest = h;
        best = i;
      }
    }
    return best;
  }

  void set_plane(SimplexFacet &f) const {
    if (k_ == 1) {
      f.normal = VectorX::Ones(1);
    } else {
      MatrixX diffs(k_ - 1, k_);
      const VectorX p0 = point(f.verts[0]);
      for (Eigen::Index j = 1; j < k_; ++j)
        diffs.row(j - 1) = (point(f.verts[j]) - p0).transpose();
      Eigen::JacobiSVD<MatrixX> svd(diffs, Eigen::ComputeFullV);
      f.normal = svd.matrixV().col(k_ - 1);
    }
    Scalar off = Scalar(0);
    for (Eigen::Index v : f.verts)
      off += f.normal.dot(point(v));
    f.offset = off / Scalar(k_);
    if (f.height(interior_) > Scalar(0)) {
      f.normal = -f.normal;
      f.offset = -f.offset;
    }
  }

  void build_initial_simplex() {
    const Eigen::Index n = pts_.cols();
    std::vector<Eigen::Index> chosen;
    // First vertex: smallest first coordinate.
    Eigen::Index i0 = 0;
    for (Eigen::Index i = 1; i < n; ++i)
      if (pts_(0, i) < pts_(0, i0))
        i0 = i;
    chosen.push_back(i0);
    MatrixX dirs(k_, 0);
    while (Eigen::Index(chosen.size()) < k_ + 1) {
      Eigen::Index best = -1;
      Scalar dbest = Scalar(-1);
      for (Eigen::Index i = 0; i < n; ++i) {
        VectorX r = point(i) - point(i0);
        if (dirs.cols() > 0)
          r -= dirs * (dirs.transpose() * r);
        const Scalar dist = r.norm();
        if (dist > dbest) {
          dbest = dist;
          best = i;
        }
      }
      if (dbest <= eps_)
        throw HullFailure("point set is flatter than the hull tolerance");
      VectorX r = point(best) - point(i0);
      if (dirs.cols() > 0)
        r -= dirs * (dirs.transpose() * r);
      dirs.conservativeResize(k_, dirs.cols() + 1);
      dirs.col(dirs.cols() - 1) = r.normalized();
      chosen.push_back(best);
    }

    interior_ = VectorX::Zero(k_);
    for (Eigen::Index v : chosen)
      interior_ += point(v);
    interior_ /= Scalar(k_ + 1);

    // Facet o omits chosen[o]; its neighbour opposite chosen[v] omits v.
    for (Eigen::Index o = 0; o <= k_; ++o) {
      SimplexFacet f;
      for (Eigen::Index v = 0; v <= k_; ++v)
        if (v != o) {
          f.verts.push_back(chosen[v]);
          f.neighbors.push_back(v);
        }
      set_plane(f);
      facets_.push_back(std::move(f));
    }

    std::vector<bool> used(n, false);
    for (Eigen::Index v : chosen)
      used[v] = true;
    std::vector<Eigen::Index> all;
    for (Eigen::Index i = 0; i < n; ++i)
      if (!used[i])
        all.push_back(i);
    std::vector<Eigen::Index> ids(facets_.size());
    std::iota(ids.begin(), ids.end(), Eigen::Index(0));
    assign_outside(all, ids);
  }

  void assign_outside(const std::vector<Eigen::Index> &candidates,
                      const std::vector<Eigen::Index> &targets) {
    for (Eigen::Index p : candidates) {
      const VectorX q = point(p);
      Scalar hbest = eps_;
      Eigen::Index best = -1;
      for (Eigen::Index f : targets) {
        const Scalar h = facets_[f].height(q);
        if (h > hbest) {
          hbest = h;
          best = f;
        }
      }
      if (best >= 0)
        facets_[best].outside.push_back(p);
    }
  }

  void add_point(Eigen::Index start, Eigen::Index apex, int round,
                 std::vector<Eigen::Index> &stack) {
    const VectorX q = point(apex);
    std::vector<Eigen::Index> visible{start};
    facets_[start].visit = round;
    for (std::size_t head = 0; head < visible.size(); ++head) {
      for (Eigen::Index nb : facets_[visible[head]].neighbors) {
        auto &g = facets_[nb];
        if (g.visit == round)
          continue;
        if (g.height(q) > eps_) {
          g.visit = round;
          visible.push_back(nb);
        }
      }
    }

    struct Horizon {
      Eigen::Index visible;
      Eigen::Index slot;
      Eigen::Index neighbor;
    };
    std::vector<Horizon> horizon;
    for (Eigen::Index f : visible)
      for (Eigen::Index j = 0; j < k_; ++j) {
        const Eigen::Index nb = facets_[f].neighbors[j];
        if (facets_[nb].visit != round)
          horizon.push_back({f, j, nb});
      }

    std::vector<Eigen::Index> created;
    std::map<std::vector<Eigen::Index>, std::pair<Eigen::Index, Eigen::Index>>
        ridges;
    for (const auto &h : horizon) {
      SimplexFacet nf;
      nf.verts = facets_[h.visible].verts;
      nf.verts[h.slot] = apex;
      nf.neighbors.assign(k_, -1);
      nf.neighbors[h.slot] = h.neighbor;
      set_plane(nf);
      const Eigen::Index id = Eigen::Index(facets_.size());
      auto &nbf = facets_[h.neighbor];
      for (auto &back : nbf.neighbors)
        if (back == h.visible) {
          back = id;
          break;
        }
      facets_.push_back(std::move(nf));
      created.push_back(id);

      for (Eigen::Index j = 0; j < k_; ++j) {
        if (j == h.slot)
          continue;
        std::vector<Eigen::Index> key;
        key.reserve(k_ - 1);
        for (Eigen::Index t = 0; t < k_; ++t)
          if (t != j)
            key.push_back(facets_[id].verts[t]);
        std::sort(key.begin(), key.end());
        auto it = ridges.find(key);
        if (it == ridges.end()) {
          ridges.emplace(std::move(key), std::make_pair(id, j));
        } else {
          const auto [other, slot] = it->second;
          facets_[id].neighbors[j] = other;
          facets_[other].neighbors[slot] = id;
          ridges.erase(it);
        }
      }
    }
    if (!ridges.empty())
      throw HullFailure("inconsistent horizon while inserting a point");

    std::vector<Eigen::Index> orphans;
    for (Eigen::Index f : visible) {
      auto &vf = facets_[f];
      vf.alive = false;
      for (Eigen::Index p : vf.outside)
        if (p != apex)
          orphans.push_back(p);
      vf.outside.clear();
    }
    assign_outside(orphans, created);
    for (Eigen::Index f : created)
      if (!facets_[f].outside.empty())
        stack.push_back(f);
  }

  const MatrixX &pts_;
  Scalar eps_;
  Eigen::Index k_ = 0;
  VectorX interior_;
  std::vector<SimplexFacet> facets_;
};

template <typename Scalar>
void canonicalize_sign(VectorXTpl<Scalar> &n, Scalar &offset) {
  for (Eigen::Index i = 0; i < n.size(); ++i) {
    if (std::abs(n(i)) <= Scalar(1e-12))
      continue;
    if (n(i) < Scalar(0)) {
      n = -n;
      offset = -offset;
    }
    return;
  }
}

template <typename Scalar>
bool lex_less(const VectorXTpl<Scalar> &a, Scalar oa,
              const VectorXTpl<Scalar> &b, Scalar ob) {
  for (Eigen::Index i = 0; i < a.size(); ++i)
    if (a(i) != b(i))
      return a(i) < b(i);
  return oa < ob;
}

} // namespace detail

/// Half-space description of conv(points), computed in the points' affine
/// hull and lifted back: facets are inequalities, the affine hull's
/// orthogonal complement contributes equalities.
template <typename Scalar>
HullResultTpl<Scalar> convex_hull(const PointCloudTpl<Scalar> &pc,
                                  const HullSettings &settings = {}) {
  using VectorX = VectorXTpl<Scalar>;
  using MatrixX = MatrixXTpl<Scalar>;

  HullResultTpl<Scalar> res;
  res.dim = pc.dim();
  const auto aff = affine_dimension(pc, Scalar(settings.rank_tol));
  res.affine_dim = aff.dim;

  for (Eigen::Index j = 0; j < aff.complement.cols(); ++j) {
    HyperplaneTpl<Scalar> e;
    e.normal = aff.complement.col(j);
    e.offset = e.normal.dot(aff.centroid);
    detail::canonicalize_sign(e.normal, e.offset);
    res.equalities.push_back(std::move(e));
  }
  if (aff.dim == 0)
    return res;

  const MatrixX local =
      aff.basis.transpose() * (pc.points.colwise() - aff.centroid);
  const VectorX lo = local.rowwise().minCoeff();
  const VectorX hi = local.rowwise().maxCoeff();
  const Scalar diam = std::max((hi - lo).norm(), Scalar(1e-300));

  detail::QuickHull<Scalar> qh(local, Scalar(settings.visibility_tol) * diam);
  auto simplicial = qh.run();

  // Merge simplicial facets sharing a plane.
  const Scalar mtol = Scalar(settings.merge_tol);
  struct Group {
    VectorX normal;
    Scalar offset;
    std::vector<Eigen::Index> verts;
  };
  std::vector<Group> groups;
  for (auto &f : simplicial) {
    const VectorX n = -f.normal; // inward
    const Scalar o = -f.offset;
    bool merged = false;
    for (auto &g : groups)
      if ((g.normal - n).cwiseAbs().maxCoeff() <= mtol &&
          std::abs(g.offset - o) <= mtol * diam) {
        g.verts.insert(g.verts.end(), f.verts.begin(), f.verts.end());
        merged = true;
        break;
      }
    if (!merged)
      groups.push_back({n, o, f.verts});
  }

  for (auto &g : groups) {
    std::sort(g.verts.begin(), g.verts.end());
    g.verts.erase(std::unique(g.verts.begin(), g.verts.end()), g.verts.end());
    if (Eigen::Index(g.verts.size()) > aff.dim && aff.dim > 1) {
      // Least-squares refit through every incident point.
      MatrixX inc(aff.dim, Eigen::Index(g.verts.size()));
      for (Eigen::Index c = 0; c < inc.cols(); ++c)
        inc.col(c) = local.col(g.verts[c]);
      const VectorX mean = inc.rowwise().mean();
      const MatrixX centered = inc.colwise() - mean;
      Eigen::JacobiSVD<MatrixX> svd(centered, Eigen::ComputeFullU);
      VectorX n = svd.matrixU().col(aff.dim - 1);
      if (n.dot(g.normal) < Scalar(0))
        n = -n;
      g.normal = n;
    }

    FacetTpl<Scalar> facet;
    facet.normal = aff.basis * g.normal;
    facet.normal.normalize();
    facet.offset = (facet.normal.transpose() * pc.points).minCoeff();
    facet.vertices.clear();
    for (Eigen::Index i = 0; i < pc.size(); ++i)
      if (facet.normal.dot(pc.points.col(i)) - facet.offset <=
          Scalar(settings.merge_tol) * diam)
        facet.vertices.push_back(i);
    res.facets.push_back(std::move(facet));
  }

  std::sort(res.facets.begin(), res.facets.end(),
            [](const auto &a, const auto &b) {
              return detail::lex_less(a.normal, a.offset, b.normal, b.offset);
            });
  return res;
}

} // namespace mcwc
