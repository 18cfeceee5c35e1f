#include "sbpfr/mesh.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace sbpfr {

namespace {

std::shared_ptr<const NodalBasis<double>> make_mapping_basis(int p_map) {
  return std::make_shared<const NodalBasis<double>>(p_map, warp_blend_nodes<double>(p_map));
}

Mat affine_image(const std::array<Vec2, 3>& v, const Pts& xhat) {
  Mat x(2, xhat.cols());
  for (Eigen::Index q = 0; q < xhat.cols(); ++q)
    x.col(q) = -(xhat(0, q) + xhat(1, q)) / 2 * v[0] + (1 + xhat(0, q)) / 2 * v[1] +
               (1 + xhat(1, q)) / 2 * v[2];
  return x;
}

}  // namespace

Pts Mesh::map_points(int k, const Pts& xhat) const {
  return mapping_nodes[k] * basis_->values(xhat).transpose();
}

Mesh split_cartesian_mesh(int M, double L, SplitPattern pattern) {
  if (M < 1 || !(L > 0)) throw TopologyError("split-Cartesian mesh needs M >= 1 and L > 0");
  Mesh mesh;
  mesh.M = M;
  mesh.L = L;
  mesh.p_map = 1;
  mesh.pattern = pattern;
  const double h = L / M;
  const auto basis = make_mapping_basis(1);
  mesh.set_mapping_basis(basis);
  for (int j = 0; j < M; ++j) {
    for (int i = 0; i < M; ++i) {
      const Vec2 ll(i * h, j * h), lr((i + 1) * h, j * h), ur((i + 1) * h, (j + 1) * h),
          ul(i * h, (j + 1) * h);
      const bool anti = pattern == SplitPattern::Alternating && (i + j) % 2 == 1;
      const auto pair = anti ? std::array{std::array{ll, lr, ul}, std::array{lr, ur, ul}}
                             : std::array{std::array{ll, lr, ur}, std::array{ll, ur, ul}};
      for (const auto& tri : pair) {
        mesh.vertices.push_back(tri);
        mesh.mapping_nodes.push_back(affine_image(tri, basis->nodes()));
      }
    }
  }
  return mesh;
}

Vec2 warp_map(const Vec2& x, double L) {
  constexpr double pi = std::numbers::pi;
  const double s = std::sin(pi * x(0) / L) * std::sin(pi * x(1) / L);
  return {x(0) + L / 5 * s, x(1) + L / 5 * std::exp(1 - x(1) / L) * s};
}

Mesh warp_mesh(const Mesh& mesh, int p_map) {
  if (p_map < 1) throw TopologyError("mapping degree must be at least 1");
  Mesh out;
  out.M = mesh.M;
  out.L = mesh.L;
  out.p_map = p_map;
  out.warped = true;
  out.pattern = mesh.pattern;
  out.vertices = mesh.vertices;
  const auto basis = make_mapping_basis(p_map);
  out.set_mapping_basis(basis);
  for (const auto& tri : mesh.vertices) {
    Mat x = affine_image(tri, basis->nodes());
    for (Eigen::Index i = 0; i < x.cols(); ++i) x.col(i) = warp_map(x.col(i), mesh.L);
    out.mapping_nodes.push_back(std::move(x));
  }
  return out;
}

MappingJacobians mapping_jacobians(const Mesh& mesh, const Pts& xhat) {
  const int K = mesh.num_elements();
  const Eigen::Index n = xhat.cols();
  const std::array<Mat, 2> grad = {mesh.mapping_basis().gradient(xhat, 0),
                                   mesh.mapping_basis().gradient(xhat, 1)};
  MappingJacobians out;
  for (auto& m : out.jac) m.resize(n, K);
  out.det.resize(n, K);
  for (int k = 0; k < K; ++k) {
    for (int m = 0; m < 2; ++m) {
      const Mat d = mesh.mapping_nodes[k] * grad[m].transpose();  // 2 x n
      out.jac[m].col(k) = d.row(0).transpose();
      out.jac[2 + m].col(k) = d.row(1).transpose();
    }
    out.det.col(k) = out.jac[0].col(k).cwiseProduct(out.jac[3].col(k)) -
                     out.jac[1].col(k).cwiseProduct(out.jac[2].col(k));
    for (Eigen::Index q = 0; q < n; ++q)
      if (!(out.det(q, k) > 0))
        throw TopologyError("orientation violated: nonpositive Jacobian on element " +
                            std::to_string(k));
  }
  return out;
}

GeometricFactors geometric_factors(const Mesh& mesh, const Pts& volume_nodes,
                                   const std::array<Pts, kNumFacets>& facet_nodes) {
  GeometricFactors geo;
  geo.affine = mesh.is_affine();
  const auto vol = mapping_jacobians(mesh, volume_nodes);
  geo.J = vol.det;
  // adj(J) = [[J22, -J12], [-J21, J11]] with J_am = dX_a/dxhat_m
  geo.adj[0] = vol.jac[3];
  geo.adj[1] = -vol.jac[1];
  geo.adj[2] = -vol.jac[2];
  geo.adj[3] = vol.jac[0];

  const Eigen::Index nf = facet_nodes[0].cols();
  const int K = mesh.num_elements();
  geo.Jf.resize(kNumFacets * nf, K);
  geo.nx.resize(kNumFacets * nf, K);
  geo.ny.resize(kNumFacets * nf, K);
  const ReferenceTriangle<double> tri;
  for (int g = 0; g < kNumFacets; ++g) {
    const auto fj = mapping_jacobians(mesh, facet_nodes[g]);
    const double n0 = tri.normals[g](0), n1 = tri.normals[g](1);
    // component n of J J^-T nhat is sum_m adj(m,n) nhat_m
    const Mat ax = fj.jac[3] * n0 - fj.jac[2] * n1;
    const Mat ay = -fj.jac[1] * n0 + fj.jac[0] * n1;
    const Mat len = (ax.array().square() + ay.array().square()).sqrt().matrix();
    geo.Jf.middleRows(g * nf, nf) = len;
    geo.nx.middleRows(g * nf, nf) = ax.cwiseQuotient(len);
    geo.ny.middleRows(g * nf, nf) = ay.cwiseQuotient(len);
  }
  return geo;
}

Connectivity periodic_connectivity(const Mesh& mesh, const std::array<Pts, kNumFacets>& facet_nodes) {
  const int K = mesh.num_elements();
  const int F = kNumFacets * K;
  const double tol = 1e-10 * mesh.h();
  const std::array<Vec2, 5> shifts = {Vec2(0, 0), Vec2(mesh.L, 0), Vec2(-mesh.L, 0),
                                      Vec2(0, mesh.L), Vec2(0, -mesh.L)};

  std::vector<Mat> coords(F);
  std::vector<Vec2> centers(F);
  for (int k = 0; k < K; ++k) {
    for (int g = 0; g < kNumFacets; ++g) {
      coords[3 * k + g] = mesh.map_points(k, facet_nodes[g]);
      centers[3 * k + g] = coords[3 * k + g].rowwise().mean();
    }
  }

  Connectivity conn;
  conn.records.resize(F);
  auto name = [](int f) {
    return "(element " + std::to_string(f / 3) + ", facet " + std::to_string(f % 3) + ")";
  };
  for (int a = 0; a < F; ++a) {
    if (conn.records[a].elem >= 0) continue;
    int match = -1;
    Vec2 shift = Vec2::Zero();
    for (int b = 0; b < F; ++b) {
      if (b == a) continue;
      for (const auto& t : shifts) {
        if ((centers[a] - centers[b] - t).norm() < tol) {
          if (match >= 0) throw TopologyError("ambiguous facet match for " + name(a));
          match = b;
          shift = t;
        }
      }
    }
    if (match < 0) throw TopologyError("unmatched facet " + name(a));
    if (conn.records[match].elem >= 0) throw TopologyError("facet matched twice: " + name(match));

    const Eigen::Index nf = coords[a].cols();
    std::vector<int> perm(nf, -1), inv(nf, -1);
    for (Eigen::Index i = 0; i < nf; ++i) {
      for (Eigen::Index j = 0; j < nf; ++j) {
        if ((coords[a].col(i) - coords[match].col(j) - shift).norm() < tol) {
          if (perm[i] >= 0) throw TopologyError("ambiguous node match on " + name(a));
          perm[i] = static_cast<int>(j);
          inv[j] = static_cast<int>(i);
        }
      }
      if (perm[i] < 0) throw TopologyError("facet nodes do not align on " + name(a));
    }
    conn.records[a] = {a / 3, a % 3, match / 3, match % 3, perm, shift};
    conn.records[match] = {match / 3, match % 3, a / 3, a % 3, inv, Vec2(-shift)};
  }
  return conn;
}

double weights_match_residual(const Connectivity& conn, const GeometricFactors& geo,
                              const std::array<Mat, kNumFacets>& Wf) {
  const Eigen::Index nf = Wf[0].rows();
  double worst = 0;
  for (const auto& r : conn.records) {
    const Vec ja = geo.Jf.col(r.elem).segment(r.facet * nf, nf);
    const Vec jb = geo.Jf.col(r.nbr).segment(r.nbr_facet * nf, nf);
    Mat T = Mat::Zero(nf, nf);
    for (Eigen::Index i = 0; i < nf; ++i) T(i, r.perm[i]) = 1;
    const Mat lhs = T.transpose() * Wf[r.facet] * ja.asDiagonal() * T;
    const Mat rhs = Wf[r.nbr_facet] * jb.asDiagonal();
    worst = std::max(worst, (lhs - rhs).norm());
  }
  return worst;
}

}  // namespace sbpfr
