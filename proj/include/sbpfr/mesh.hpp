#pragma once

// Split-Cartesian triangulations of the periodic square (0,L)^2, polynomial
// element mappings, geometric factors and periodic facet connectivity.
//
// Square (i,j) holds elements 2(jM+i) (the lower triangle) and 2(jM+i)+1
// (the upper one). Vertices of every triangle are listed counterclockwise
// starting from the lowest, then leftmost, corner, and reference vertex v1
// maps to that corner.
//
// With the main diagonal, from (i,j) to (i+1,j+1):
//   lower: (i,j), (i+1,j), (i+1,j+1)    facets bottom, right, diagonal
//   upper: (i,j), (i+1,j+1), (i,j+1)    facets diagonal, top, left
// With the anti-diagonal, from (i+1,j) to (i,j+1):
//   lower: (i,j), (i+1,j), (i,j+1)      facets bottom, diagonal, left
//   upper: (i+1,j), (i+1,j+1), (i,j+1)  facets right, top, diagonal
//
// The uniform pattern uses the main diagonal everywhere; the alternating
// pattern switches to the anti-diagonal on squares with i + j odd.

#include "sbpfr/refelem.hpp"
#include "sbpfr/types.hpp"

#include <array>
#include <memory>
#include <vector>

namespace sbpfr {

enum class SplitPattern { Uniform, Alternating };

class Mesh {
 public:
  int M = 0;
  double L = 0;
  int p_map = 1;
  bool warped = false;
  SplitPattern pattern = SplitPattern::Alternating;
  std::vector<std::array<Vec2, 3>> vertices;  // straight-sided vertices, before warping
  std::vector<Mat> mapping_nodes;             // 2 x N_map physical mapping nodes per element

  int num_elements() const { return static_cast<int>(mapping_nodes.size()); }
  double h() const { return L / M; }
  bool is_affine() const { return p_map == 1; }
  const NodalBasis<double>& mapping_basis() const { return *basis_; }

  /// Physical images of reference points on element k.
  Pts map_points(int k, const Pts& xhat) const;

  void set_mapping_basis(std::shared_ptr<const NodalBasis<double>> b) { basis_ = std::move(b); }

 private:
  std::shared_ptr<const NodalBasis<double>> basis_;
};

Mesh split_cartesian_mesh(int M, double L, SplitPattern pattern = SplitPattern::Alternating);

/// Smooth bijection of (0,L)^2 that fixes the boundary.
Vec2 warp_map(const Vec2& x, double L);

/// Re-interpolates every element with degree-p_map Lagrange nodes and moves
/// them by warp_map.
Mesh warp_mesh(const Mesh& mesh, int p_map);

/// Geometric quantities sampled at reference points; every matrix has one
/// column per element.
struct GeometricFactors {
  Mat J;                    // Jacobian determinant at volume points
  std::array<Mat, 4> adj;   // J (dX/dxhat)^-1, entry (m,n) stored at 2m+n
  Mat Jf;                   // facet scaling at stacked facet points
  Mat nx, ny;               // unit outward physical normal at stacked facet points
  bool affine = false;
};

struct MappingJacobians {
  std::array<Mat, 4> jac;  // dX_a/dxhat_m stored at 2a+m
  Mat det;
};

/// Jacobian matrices at reference points for every element.
MappingJacobians mapping_jacobians(const Mesh& mesh, const Pts& xhat);

GeometricFactors geometric_factors(const Mesh& mesh, const Pts& volume_nodes,
                                   const std::array<Pts, kNumFacets>& facet_nodes);

struct InterfaceRecord {
  int elem = -1, facet = -1;
  int nbr = -1, nbr_facet = -1;
  std::vector<int> perm;  // node i of this facet meets node perm[i] of the neighbour facet
  Vec2 shift = Vec2::Zero();
};

struct Connectivity {
  std::vector<InterfaceRecord> records;  // index 3*elem + facet
  const InterfaceRecord& at(int k, int g) const { return records[3 * k + g]; }
};

Connectivity periodic_connectivity(const Mesh& mesh, const std::array<Pts, kNumFacets>& facet_nodes);

/// Worst |T^T (W_g J_g) T - W_h J_h|_F over all records.
double weights_match_residual(const Connectivity& conn, const GeometricFactors& geo,
                              const std::array<Mat, kNumFacets>& Wf);

}  // namespace sbpfr
