#pragma once

// Discrete inner products and the reference-element operators built on them:
// mass, projection, differentiation, the VCJH penalty K, lifting and filter.

#include "sbpfr/refelem.hpp"
#include "sbpfr/types.hpp"

#include <array>
#include <optional>
#include <string>

namespace sbpfr {

enum class Variant { QuadratureI, QuadratureII, Collocation };

std::string to_string(Variant v);
/// Accepts quadrature_i, quadrature_ii, collocation (case-insensitive).
Variant variant_from_string(const std::string& s);

/// VCJH parameter giving the largest stable explicit step, tabulated for p = 2..4.
double vcjh_c_plus(int p);

struct InnerProduct {
  Variant variant;
  int p = 0;
  Pts volume_nodes;
  Mat W;
  Vec facet_params;  // nodes on [-1,1], shared by all facets
  std::array<Pts, kNumFacets> facet_nodes;
  std::array<Mat, kNumFacets> Wf;
  int volume_degree = 0;
  int facet_degree = 0;
};

/// `volume_rule` replaces the default degree-2p rule for the quadrature variants.
InnerProduct build_inner_product(Variant variant, int p,
                                 const QuadratureRule<double>* volume_rule = nullptr);

/// Solution basis: orthonormal modal for the quadrature variants, Lagrange on
/// the volume nodes for collocation.
class SolutionBasis {
 public:
  explicit SolutionBasis(int p) : modal_(p) {}
  SolutionBasis(int p, const Pts& nodes) : modal_(p), nodal_(NodalBasis<double>(p, nodes)) {}

  int size() const { return modal_.size(); }
  bool is_nodal() const { return nodal_.has_value(); }
  Mat values(const Pts& x) const { return nodal_ ? nodal_->values(x) : modal_.values(x); }
  Mat gradient(const Pts& x, int m) const {
    return nodal_ ? nodal_->gradient(x, m) : modal_.gradient(x, m);
  }
  /// Maps coefficients in this basis to orthonormal modal coefficients.
  Mat to_modal() const {
    return nodal_ ? nodal_->modal_vandermonde_inverse() : Mat::Identity(size(), size());
  }
  Mat from_modal() const {
    return nodal_ ? nodal_->modal_vandermonde() : Mat::Identity(size(), size());
  }

 private:
  PkdBasis<double> modal_;
  std::optional<NodalBasis<double>> nodal_;
};

struct ReferenceOperators {
  int p = 0;
  Variant variant;
  double c = 0;
  ReferenceTriangle<double> tri;
  InnerProduct ip;
  SolutionBasis basis;
  Mat V;
  std::array<Mat, kNumFacets> Vf;
  Mat M, Minv, P;
  std::array<Mat, 2> D;
  Mat K, F;
  std::array<Mat, kNumFacets> L;

  int num_modes() const { return static_cast<int>(M.rows()); }
  int num_volume_nodes() const { return static_cast<int>(V.rows()); }
  int num_facet_nodes() const { return static_cast<int>(Vf[0].rows()); }
};

ReferenceOperators build_reference_operators(int p, Variant variant, double c,
                                             const QuadratureRule<double>* volume_rule = nullptr);

/// Smallest eigenvalue >= 1e-12 * largest, after checking symmetry.
bool is_spd(const Mat& A);

Mat mass_matrix(const Mat& V, const Mat& W);
/// V^T W diag(j) V. Not symmetric when W is dense and j varies.
Mat physical_mass(const Mat& V, const Mat& W, const Vec& j);
Mat projection_matrix(const Mat& M, const Mat& V, const Mat& W);
Mat physical_projection(const Mat& V, const Mat& W, const Vec& j);

/// Differentiation in the orthonormal modal basis, exact on the degree-p space.
std::array<Mat, 2> modal_diff_matrices(int p);

/// (c/2) sum_q binom(p,q) (D1^(p-q) D2^q)^T M (D1^(p-q) D2^q).
Mat vcjh_k_matrix(const std::array<Mat, 2>& D, const Mat& M, int p, double c);
std::array<Mat, kNumFacets> lifting_matrices(const Mat& M, const Mat& K,
                                             const std::array<Mat, kNumFacets>& Vf,
                                             const std::array<Mat, kNumFacets>& Wf);
/// (I + M^-1 K)^-1.
Mat filter_matrix(const Mat& M, const Mat& K);

/// max_m |M D_m + D_m^T M - sum_g n_m V_g^T W_g V_g|_F / |M|_F.
double check_sbp(const ReferenceOperators& ops);
/// max_m |(P1)^T M D_m - sum_g n_m (P1)^T V_g^T W_g V_g|.
double check_divergence_theorem(const ReferenceOperators& ops);

}  // namespace sbpfr
