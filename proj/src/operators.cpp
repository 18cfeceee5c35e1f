#include "sbpfr/operators.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace sbpfr {

std::string to_string(Variant v) {
  switch (v) {
    case Variant::QuadratureI: return "quadrature_i";
    case Variant::QuadratureII: return "quadrature_ii";
    case Variant::Collocation: return "collocation";
  }
  return "unknown";
}

Variant variant_from_string(const std::string& s) {
  std::string t(s);
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char ch) { return std::tolower(ch); });
  if (t == "quadrature_i") return Variant::QuadratureI;
  if (t == "quadrature_ii") return Variant::QuadratureII;
  if (t == "collocation") return Variant::Collocation;
  throw ConfigError("unknown inner-product variant `" + s + "`");
}

double vcjh_c_plus(int p) {
  switch (p) {
    case 2: return 4.3e-2;
    case 3: return 6.0e-4;
    case 4: return 5.6e-6;
  }
  throw ConfigError("c_plus is tabulated only for p = 2, 3, 4 (got " + std::to_string(p) + ")");
}

namespace {

Mat diag(const Vec& w) { return w.asDiagonal(); }

/// Gram matrix of the 1D Lagrange basis on `nodes`, exact for degree 2n-2.
Mat lagrange_gram(const Vec& nodes) {
  const int n = static_cast<int>(nodes.size());
  const auto gl = gauss_legendre_rule<double>(n);
  Mat ell(n, n);  // ell(q, i) = l_i(gl_q)
  for (int q = 0; q < n; ++q) {
    for (int i = 0; i < n; ++i) {
      double l = 1;
      for (int k = 0; k < n; ++k)
        if (k != i) l *= (gl.nodes(q) - nodes(k)) / (nodes(i) - nodes(k));
      ell(q, i) = l;
    }
  }
  return ell.transpose() * gl.weights.asDiagonal() * ell;
}

Mat matrix_power(const Mat& A, int e) {
  Mat r = Mat::Identity(A.rows(), A.cols());
  for (int k = 0; k < e; ++k) r = r * A;
  return r;
}

Mat spd_inverse(const Mat& A, const char* what) {
  Eigen::LLT<Mat> llt(A);
  if (llt.info() != Eigen::Success) throw ConstructionError(std::string(what) + " is not SPD");
  return llt.solve(Mat::Identity(A.rows(), A.cols()));
}

}  // namespace

bool is_spd(const Mat& A) {
  if (A.rows() != A.cols() || A.rows() == 0) return false;
  if ((A - A.transpose()).norm() > 1e-12 * std::max(1.0, A.norm())) return false;
  Eigen::SelfAdjointEigenSolver<Mat> es(A, Eigen::EigenvaluesOnly);
  const Vec& ev = es.eigenvalues();
  return ev(ev.size() - 1) > 0 && ev(0) >= 1e-12 * ev(ev.size() - 1);
}

InnerProduct build_inner_product(Variant variant, int p, const QuadratureRule<double>* volume_rule) {
  if (p < 1) throw ConstructionError("inner products need p >= 1");
  ReferenceTriangle<double> tri;
  InnerProduct ip;
  ip.variant = variant;
  ip.p = p;

  if (variant == Variant::Collocation) {
    ip.volume_nodes = warp_blend_nodes<double>(p);
    const NodalBasis<double> nodal(p, ip.volume_nodes);
    const auto rule = triangle_volume_rule<double>(2 * p);
    const Mat phi = nodal.values(rule.nodes);
    ip.W = phi.transpose() * rule.weights.asDiagonal() * phi;
    ip.W = (ip.W + ip.W.transpose()) / 2;
    ip.volume_degree = 2 * p;
    ip.facet_params = gauss_lobatto_rule<double>(p + 1).nodes;
    const Mat gram = lagrange_gram(ip.facet_params);
    for (int g = 0; g < kNumFacets; ++g) {
      ip.facet_nodes[g] = tri.facet_points(g, ip.facet_params);
      ip.Wf[g] = tri.facet_lengths[g] / 2 * gram;
    }
    ip.facet_degree = 2 * p;
  } else {
    const auto rule = volume_rule ? *volume_rule : triangle_volume_rule<double>(2 * p);
    if (rule.degree < 2 * p) throw ConstructionError("volume rule degree is below 2p");
    if ((rule.weights.array() <= 0).any()) throw ConstructionError("volume rule has nonpositive weights");
    ip.volume_nodes = rule.nodes;
    ip.W = diag(rule.weights);
    ip.volume_degree = rule.degree;
    const auto f = variant == Variant::QuadratureI ? gauss_legendre_rule<double>(p + 1)
                                                    : gauss_lobatto_rule<double>(p + 1);
    ip.facet_params = f.nodes;
    for (int g = 0; g < kNumFacets; ++g) {
      ip.facet_nodes[g] = tri.facet_points(g, f.nodes);
      ip.Wf[g] = diag(tri.facet_lengths[g] / 2 * f.weights);
    }
    ip.facet_degree = f.degree;
  }

  if (!is_spd(ip.W)) throw ConstructionError("volume inner-product matrix is not SPD");
  for (int g = 0; g < kNumFacets; ++g)
    if (!is_spd(ip.Wf[g])) throw ConstructionError("facet inner-product matrix is not SPD");
  return ip;
}

Mat mass_matrix(const Mat& V, const Mat& W) {
  Mat M = V.transpose() * W * V;
  return (M + M.transpose()) / 2;
}

Mat physical_mass(const Mat& V, const Mat& W, const Vec& j) {
  return V.transpose() * W * j.asDiagonal() * V;
}

Mat projection_matrix(const Mat& M, const Mat& V, const Mat& W) {
  return M.llt().solve(V.transpose() * W);
}

Mat physical_projection(const Mat& V, const Mat& W, const Vec& j) {
  const Mat Mk = physical_mass(V, W, j);
  // W is dense for collocation, so Mk need not be symmetric
  const Eigen::FullPivLU<Mat> lu(Mk);
  if (!lu.isInvertible())
    throw ConstructionError("physical mass matrix is singular (positive Jacobian required)");
  return lu.solve(V.transpose() * W * j.asDiagonal());
}

std::array<Mat, 2> modal_diff_matrices(int p) {
  const PkdBasis<double> basis(p);
  const auto rule = triangle_volume_rule<double>(2 * p);
  const Mat phi = basis.values(rule.nodes);
  const Mat M0 = phi.transpose() * rule.weights.asDiagonal() * phi;
  Eigen::LLT<Mat> llt(M0);
  std::array<Mat, 2> D;
  for (int m = 0; m < 2; ++m)
    D[m] = llt.solve(phi.transpose() * rule.weights.asDiagonal() * basis.gradient(rule.nodes, m));
  return D;
}

Mat vcjh_k_matrix(const std::array<Mat, 2>& D, const Mat& M, int p, double c) {
  if (c < 0) throw ConstructionError("VCJH parameter must be nonnegative");
  const Eigen::Index n = M.rows();
  Mat K = Mat::Zero(n, n);
  if (c == 0) return K;
  double binom = 1;
  for (int q = 0; q <= p; ++q) {
    const Mat Da = matrix_power(D[0], p - q) * matrix_power(D[1], q);
    K += binom * Da.transpose() * M * Da;
    binom = binom * (p - q) / (q + 1);
  }
  K *= c / 2;
  return (K + K.transpose()) / 2;
}

std::array<Mat, kNumFacets> lifting_matrices(const Mat& M, const Mat& K,
                                             const std::array<Mat, kNumFacets>& Vf,
                                             const std::array<Mat, kNumFacets>& Wf) {
  const Mat inv = spd_inverse(M + K, "M + K");
  std::array<Mat, kNumFacets> L;
  for (int g = 0; g < kNumFacets; ++g) L[g] = inv * Vf[g].transpose() * Wf[g];
  return L;
}

Mat filter_matrix(const Mat& M, const Mat& K) {
  return spd_inverse(M + K, "M + K") * M;
}

ReferenceOperators build_reference_operators(int p, Variant variant, double c,
                                             const QuadratureRule<double>* volume_rule) {
  ReferenceOperators ops{.p = p,
                         .variant = variant,
                         .c = c,
                         .tri = {},
                         .ip = build_inner_product(variant, p, volume_rule),
                         .basis = SolutionBasis(p)};
  if (variant == Variant::Collocation) ops.basis = SolutionBasis(p, ops.ip.volume_nodes);

  ops.V = ops.basis.values(ops.ip.volume_nodes);
  for (int g = 0; g < kNumFacets; ++g) ops.Vf[g] = ops.basis.values(ops.ip.facet_nodes[g]);
  ops.M = mass_matrix(ops.V, ops.ip.W);
  if (!is_spd(ops.M)) throw ConstructionError("mass matrix is not SPD (rank-deficient V)");
  ops.Minv = spd_inverse(ops.M, "mass matrix");
  ops.P = ops.Minv * ops.V.transpose() * ops.ip.W;

  // Modal core, then a change of basis: c_modal = T c.
  const auto D0 = modal_diff_matrices(p);
  const Mat T = ops.basis.to_modal();
  const Mat Tinv = ops.basis.from_modal();
  for (int m = 0; m < 2; ++m) ops.D[m] = Tinv * D0[m] * T;
  const Mat K0 = vcjh_k_matrix(D0, Mat::Identity(ops.M.rows(), ops.M.cols()), p, c);
  ops.K = T.transpose() * K0 * T;
  ops.K = (ops.K + ops.K.transpose()) / 2;
  if (!is_spd(ops.M + ops.K)) throw ConstructionError("M + K is not SPD for the chosen c");

  ops.L = lifting_matrices(ops.M, ops.K, ops.Vf, ops.ip.Wf);
  ops.F = filter_matrix(ops.M, ops.K);
  return ops;
}

double check_sbp(const ReferenceOperators& ops) {
  double worst = 0;
  for (int m = 0; m < 2; ++m) {
    Mat r = ops.M * ops.D[m] + ops.D[m].transpose() * ops.M;
    for (int g = 0; g < kNumFacets; ++g)
      r -= ops.tri.normals[g](m) * ops.Vf[g].transpose() * ops.ip.Wf[g] * ops.Vf[g];
    worst = std::max(worst, r.norm() / ops.M.norm());
  }
  return worst;
}

double check_divergence_theorem(const ReferenceOperators& ops) {
  const Vec p1 = ops.P * Vec::Ones(ops.num_volume_nodes());
  double worst = 0;
  for (int m = 0; m < 2; ++m) {
    Eigen::RowVectorXd r = p1.transpose() * ops.M * ops.D[m];
    for (int g = 0; g < kNumFacets; ++g)
      r -= ops.tri.normals[g](m) * p1.transpose() * ops.Vf[g].transpose() * ops.ip.Wf[g] * ops.Vf[g];
    worst = std::max(worst, r.norm());
  }
  return worst;
}

}  // namespace sbpfr
