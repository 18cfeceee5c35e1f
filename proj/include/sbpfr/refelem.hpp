#pragma once

// Reference triangle, Jacobi polynomials, Gauss rules, the orthonormal
// collapsed-coordinate basis, warp & blend nodes and Vandermonde matrices.
//
// Reference triangle: vertices v1=(-1,-1), v2=(1,-1), v3=(-1,1).
// Facet g runs from vertex g to vertex g+1 (cyclic), counterclockwise:
//   facet 0: v1 -> v2 (x2 = -1), facet 1: v2 -> v3 (x1 + x2 = 0),
//   facet 2: v3 -> v1 (x1 = -1).
// A facet parameter s in [-1,1] maps to ((1-s)/2) start + ((1+s)/2) end.

#include "sbpfr/types.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

namespace sbpfr {

inline constexpr int kNumFacets = 3;

/// Number of modes of the total-degree-p space in two variables.
constexpr int num_modes(int p) { return (p + 1) * (p + 2) / 2; }

template <typename Scalar = double>
struct ReferenceTriangle {
  std::array<Eigen::Matrix<Scalar, 2, 1>, 3> vertices;
  std::array<Eigen::Matrix<Scalar, 2, 1>, 3> normals;
  std::array<Scalar, 3> facet_lengths;
  Scalar area;

  ReferenceTriangle() {
    vertices[0] << -1, -1;
    vertices[1] << 1, -1;
    vertices[2] << -1, 1;
    const Scalar r = Scalar(1) / std::sqrt(Scalar(2));
    normals[0] << 0, -1;
    normals[1] << r, r;
    normals[2] << -1, 0;
    facet_lengths = {Scalar(2), Scalar(2) * std::sqrt(Scalar(2)), Scalar(2)};
    area = Scalar(2);
  }

  /// Maps facet parameters s in [-1,1] onto facet g.
  Points<Scalar> facet_points(int g, const Vector<Scalar>& s) const {
    const auto& a = vertices[g];
    const auto& b = vertices[(g + 1) % 3];
    Points<Scalar> x(2, s.size());
    for (Eigen::Index i = 0; i < s.size(); ++i)
      x.col(i) = (1 - s(i)) / 2 * a + (1 + s(i)) / 2 * b;
    return x;
  }
};

// ---------------------------------------------------------------------------
// Jacobi polynomials (standard normalization, P_n(1) = binom(n+a, n))

template <typename Scalar>
Scalar jacobi_eval(int n, Scalar a, Scalar b, Scalar x) {
  if (n == 0) return Scalar(1);
  Scalar p0 = 1;
  Scalar p1 = ((a + b + 2) * x + (a - b)) / 2;
  for (int k = 1; k < n; ++k) {
    const Scalar s = 2 * k + a + b;
    const Scalar c1 = 2 * (k + 1) * (k + a + b + 1) * s;
    const Scalar c2 = (s + 1) * ((s + 2) * s * x + a * a - b * b);
    const Scalar c3 = 2 * (k + a) * (k + b) * (s + 2);
    const Scalar p2 = (c2 * p1 - c3 * p0) / c1;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

template <typename Scalar>
Scalar jacobi_derivative(int n, Scalar a, Scalar b, Scalar x) {
  if (n == 0) return Scalar(0);
  return (n + a + b + 1) / 2 * jacobi_eval(n - 1, a + 1, b + 1, x);
}

/// Squared weighted L2 norm of P_n^(a,b) on [-1,1].
template <typename Scalar>
Scalar jacobi_norm_squared(int n, Scalar a, Scalar b) {
  using std::exp;
  using std::lgamma;
  const Scalar lg = lgamma(n + a + 1) + lgamma(n + b + 1) - lgamma(n + a + b + 1) -
                    lgamma(Scalar(n + 1));
  return std::pow(Scalar(2), a + b + 1) / (2 * n + a + b + 1) * exp(lg);
}

// ---------------------------------------------------------------------------
// One-dimensional Gauss rules

template <typename Scalar = double>
struct QuadratureRule1D {
  Vector<Scalar> nodes;
  Vector<Scalar> weights;
  int degree = 0;
};

template <typename Scalar = double>
struct QuadratureRule {
  Points<Scalar> nodes;
  Vector<Scalar> weights;
  int degree = 0;
};

/// Roots of P_n^(a,b), ascending, by Newton iteration with deflation
/// started from Chebyshev points.
template <typename Scalar>
Vector<Scalar> jacobi_roots(int n, Scalar a, Scalar b) {
  constexpr int kMaxIter = 100;
  const Scalar tol = Scalar(1e-15);
  Vector<Scalar> x(n);
  for (int k = 0; k < n; ++k) {
    Scalar r = -std::cos((2 * k + 1) * std::numbers::pi_v<Scalar> / (2 * n));
    if (k > 0) r = (r + x(k - 1)) / 2;
    bool converged = false;
    for (int it = 0; it < kMaxIter; ++it) {
      Scalar s = 0;
      for (int i = 0; i < k; ++i) s += 1 / (r - x(i));
      const Scalar f = jacobi_eval(n, a, b, r);
      const Scalar delta = -f / (jacobi_derivative(n, a, b, r) - s * f);
      r += delta;
      if (std::abs(delta) <= tol) {
        converged = true;
        break;
      }
    }
    if (!converged)
      throw ConstructionError("Jacobi root iteration did not converge (n=" +
                              std::to_string(n) + ")");
    x(k) = r;
  }
  return x;
}

/// n-point Gauss-Jacobi rule for the weight (1-x)^a (1+x)^b.
template <typename Scalar = double>
QuadratureRule1D<Scalar> gauss_jacobi_rule(int n, Scalar a, Scalar b) {
  if (n < 1) throw ConstructionError("Gauss rule needs at least one node");
  QuadratureRule1D<Scalar> rule;
  rule.nodes = jacobi_roots(n, a, b);
  rule.weights.resize(n);
  using std::lgamma;
  const Scalar lg = lgamma(n + a + 1) + lgamma(n + b + 1) - lgamma(n + a + b + 1) -
                    lgamma(Scalar(n + 1));
  const Scalar scale = std::pow(Scalar(2), a + b + 1) * std::exp(lg);
  for (int i = 0; i < n; ++i) {
    const Scalar x = rule.nodes(i);
    const Scalar d = jacobi_derivative(n, a, b, x);
    rule.weights(i) = scale / ((1 - x * x) * d * d);
  }
  rule.degree = 2 * n - 1;
  return rule;
}

template <typename Scalar = double>
QuadratureRule1D<Scalar> gauss_legendre_rule(int n) {
  return gauss_jacobi_rule<Scalar>(n, Scalar(0), Scalar(0));
}

template <typename Scalar = double>
QuadratureRule1D<Scalar> gauss_lobatto_rule(int n) {
  if (n < 2) throw ConstructionError("Gauss-Lobatto rule needs at least two nodes");
  QuadratureRule1D<Scalar> rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  rule.nodes(0) = -1;
  rule.nodes(n - 1) = 1;
  if (n > 2) rule.nodes.segment(1, n - 2) = jacobi_roots(n - 2, Scalar(1), Scalar(1));
  for (int i = 0; i < n; ++i) {
    const Scalar pn = jacobi_eval(n - 1, Scalar(0), Scalar(0), rule.nodes(i));
    rule.weights(i) = Scalar(2) / (n * (n - 1) * pn * pn);
  }
  rule.degree = 2 * n - 3;
  return rule;
}

/// Positive rule on the reference triangle exact for total degree `degree`:
/// Gauss-Legendre x Gauss-Jacobi(1,0) in collapsed coordinates.
template <typename Scalar = double>
QuadratureRule<Scalar> triangle_volume_rule(int degree) {
  if (degree < 0) throw ConstructionError("negative quadrature degree");
  const int n = (degree + 2) / 2;
  const auto ga = gauss_legendre_rule<Scalar>(n);
  const auto gb = gauss_jacobi_rule<Scalar>(n, Scalar(1), Scalar(0));
  QuadratureRule<Scalar> rule;
  rule.nodes.resize(2, n * n);
  rule.weights.resize(n * n);
  int q = 0;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i, ++q) {
      const Scalar a = ga.nodes(i), b = gb.nodes(j);
      rule.nodes(0, q) = (1 + a) * (1 - b) / 2 - 1;
      rule.nodes(1, q) = b;
      rule.weights(q) = ga.weights(i) * gb.weights(j) / 2;
    }
  }
  rule.degree = 2 * n - 1;
  return rule;
}

/// Reads `degree <d>` followed by `x y w` lines; checks the weight sum and
/// monomial exactness up to the declared degree.
QuadratureRule<double> load_quadrature_rule(const std::string& path);

/// Exact integral of x1^i x2^j over the reference triangle.
double triangle_monomial_integral(int i, int j);

// ---------------------------------------------------------------------------
// Orthonormal modal basis

/// Mode index pairs (i, j) in storage order; total degree i + j.
inline std::vector<std::pair<int, int>> mode_indices(int p) {
  std::vector<std::pair<int, int>> idx;
  idx.reserve(num_modes(p));
  for (int i = 0; i <= p; ++i)
    for (int j = 0; j <= p - i; ++j) idx.emplace_back(i, j);
  return idx;
}

template <typename Scalar = double>
class PkdBasis {
 public:
  explicit PkdBasis(int p) : p_(p), modes_(mode_indices(p)) {
    if (p < 0) throw ConstructionError("negative polynomial degree");
  }

  int degree() const { return p_; }
  int size() const { return num_modes(p_); }
  const std::vector<std::pair<int, int>>& modes() const { return modes_; }

  /// Values at each point: rows are points, columns are modes.
  Matrix<Scalar> values(const Points<Scalar>& x) const {
    Matrix<Scalar> v(x.cols(), size());
    for (Eigen::Index q = 0; q < x.cols(); ++q) {
      const auto [a, b] = collapse(x(0, q), x(1, q));
      const Scalar y = (1 - b) / 2;
      for (int k = 0; k < size(); ++k) {
        const auto [i, j] = modes_[k];
        v(q, k) = scale(i, j) * jacobi_eval(i, Scalar(0), Scalar(0), a) * ipow(y, i) *
                  jacobi_eval(j, Scalar(2 * i + 1), Scalar(0), b);
      }
    }
    return v;
  }

  /// Partial derivative along x_{m+1}, m in {0,1}. The apex x2 = 1 uses the
  /// limit value; the collapsed coordinate a is arbitrary there.
  Matrix<Scalar> gradient(const Points<Scalar>& x, int m) const {
    Matrix<Scalar> g(x.cols(), size());
    for (Eigen::Index q = 0; q < x.cols(); ++q) {
      const auto [a, b] = collapse(x(0, q), x(1, q));
      const Scalar y = (1 - b) / 2;
      for (int k = 0; k < size(); ++k) {
        const auto [i, j] = modes_[k];
        const Scalar pa = jacobi_eval(i, Scalar(0), Scalar(0), a);
        const Scalar da = jacobi_derivative(i, Scalar(0), Scalar(0), a);
        const Scalar qb = jacobi_eval(j, Scalar(2 * i + 1), Scalar(0), b);
        const Scalar dqb = jacobi_derivative(j, Scalar(2 * i + 1), Scalar(0), b);
        const Scalar ym1 = i > 0 ? ipow(y, i - 1) : Scalar(0);
        Scalar d;
        if (m == 0) {
          d = da * ym1 * qb;
        } else {
          d = da * (1 + a) / 2 * ym1 * qb + pa * (ipow(y, i) * dqb - Scalar(i) / 2 * ym1 * qb);
        }
        g(q, k) = scale(i, j) * d;
      }
    }
    return g;
  }

 private:
  static std::pair<Scalar, Scalar> collapse(Scalar x1, Scalar x2) {
    const Scalar b = x2;
    const Scalar a = (std::abs(1 - x2) > Scalar(1e-14)) ? 2 * (1 + x1) / (1 - x2) - 1
                                                      : Scalar(-1);
    return {a, b};
  }
  static Scalar ipow(Scalar y, int e) {
    Scalar r = 1;
    for (int k = 0; k < e; ++k) r *= y;
    return r;
  }
  static Scalar scale(int i, int j) { return std::sqrt(Scalar((2 * i + 1) * (i + j + 1)) / 2); }

  int p_;
  std::vector<std::pair<int, int>> modes_;
};

// ---------------------------------------------------------------------------
// Warp & blend nodes

namespace detail {

template <typename Scalar>
Scalar warp_factor(int p, const Vector<Scalar>& lgl, Scalar r) {
  Scalar warp = 0;
  for (int i = 0; i <= p; ++i) {
    const Scalar ri = -1 + Scalar(2 * i) / p;
    Scalar l = 1;
    for (int k = 0; k <= p; ++k) {
      if (k == i) continue;
      const Scalar rk = -1 + Scalar(2 * k) / p;
      l *= (r - rk) / (ri - rk);
    }
    warp += l * (lgl(i) - ri);
  }
  if (std::abs(r) < 1 - Scalar(1e-10)) warp /= 1 - r * r;
  return warp;
}

}  // namespace detail

/// Warp & blend nodes on the reference triangle for 1 <= p <= 8, ordered
/// bottom row first.
template <typename Scalar = double>
Points<Scalar> warp_blend_nodes(int p) {
  static constexpr double kAlpha[] = {0.0, 0.0, 1.4152, 0.1001, 0.2751, 0.9800, 1.0999, 1.2832};
  if (p < 1 || p > 8) throw ConstructionError("warp & blend nodes are tabulated for 1 <= p <= 8");
  const Scalar alpha = kAlpha[p - 1];
  const Vector<Scalar> lgl = gauss_lobatto_rule<Scalar>(p + 1).nodes;
  const Scalar s3 = std::sqrt(Scalar(3));
  const Scalar c2 = std::cos(2 * std::numbers::pi_v<Scalar> / 3),
               sn2 = std::sin(2 * std::numbers::pi_v<Scalar> / 3);
  const Scalar c4 = std::cos(4 * std::numbers::pi_v<Scalar> / 3),
               sn4 = std::sin(4 * std::numbers::pi_v<Scalar> / 3);

  Points<Scalar> out(2, num_modes(p));
  int k = 0;
  for (int n = 0; n <= p; ++n) {
    for (int m = 0; m <= p - n; ++m, ++k) {
      const Scalar l1 = Scalar(n) / p, l3 = Scalar(m) / p, l2 = 1 - l1 - l3;
      Scalar x = -l2 + l3;
      Scalar y = (-l2 - l3 + 2 * l1) / s3;
      const Scalar w1 = 4 * l2 * l3 * detail::warp_factor(p, lgl, l3 - l2) * (1 + (alpha * l1) * (alpha * l1));
      const Scalar w2 = 4 * l1 * l3 * detail::warp_factor(p, lgl, l1 - l3) * (1 + (alpha * l2) * (alpha * l2));
      const Scalar w3 = 4 * l1 * l2 * detail::warp_factor(p, lgl, l2 - l1) * (1 + (alpha * l3) * (alpha * l3));
      x += w1 + c2 * w2 + c4 * w3;
      y += sn2 * w2 + sn4 * w3;
      // equilateral -> biunit
      const Scalar b1 = (s3 * y + 1) / 3;
      const Scalar b2 = (-3 * x - s3 * y + 2) / 6;
      const Scalar b3 = (3 * x - s3 * y + 2) / 6;
      out(0, k) = -b2 + b3 - b1;
      out(1, k) = -b2 - b3 + b1;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Vandermonde matrices and the nodal basis

template <typename Basis, typename Scalar>
Matrix<Scalar> vandermonde(const Basis& basis, const Points<Scalar>& x) {
  return basis.values(x);
}

template <typename Basis, typename Scalar>
Matrix<Scalar> grad_vandermonde(const Basis& basis, const Points<Scalar>& x, int m) {
  return basis.gradient(x, m);
}

/// Lagrange basis on a unisolvent set, expressed through the modal basis.
template <typename Scalar = double>
class NodalBasis {
 public:
  NodalBasis(int p, Points<Scalar> nodes) : modal_(p), nodes_(std::move(nodes)) {
    if (nodes_.cols() != modal_.size())
      throw ConstructionError("nodal set size does not match the polynomial space");
    vt_ = modal_.values(nodes_);
    Eigen::FullPivLU<Matrix<Scalar>> lu(vt_);
    lu.setThreshold(Scalar(1e-10));
    if (lu.rank() != modal_.size())
      throw ConstructionError("nodal set is not unisolvent");
    vt_inv_ = lu.inverse();
  }

  int degree() const { return modal_.degree(); }
  int size() const { return modal_.size(); }
  const Points<Scalar>& nodes() const { return nodes_; }
  const PkdBasis<Scalar>& modal() const { return modal_; }
  /// Modal Vandermonde at the defining nodes and its inverse.
  const Matrix<Scalar>& modal_vandermonde() const { return vt_; }
  const Matrix<Scalar>& modal_vandermonde_inverse() const { return vt_inv_; }

  Matrix<Scalar> values(const Points<Scalar>& x) const { return modal_.values(x) * vt_inv_; }
  Matrix<Scalar> gradient(const Points<Scalar>& x, int m) const {
    return modal_.gradient(x, m) * vt_inv_;
  }

 private:
  PkdBasis<Scalar> modal_;
  Points<Scalar> nodes_;
  Matrix<Scalar> vt_;
  Matrix<Scalar> vt_inv_;
};

}  // namespace sbpfr
