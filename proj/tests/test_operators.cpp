#include "sbpfr/operators.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace sbpfr;

namespace {

const Variant kVariants[] = {Variant::QuadratureI, Variant::QuadratureII, Variant::Collocation};

Vec random_vec(int n, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> u(-1, 1);
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = u(gen);
  return v;
}

Pts sample_points(int n, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  Pts x(2, n);
  for (int i = 0; i < n; ++i) {
    double a = u(gen), b = u(gen);
    if (a + b > 1) {
      a = 1 - a;
      b = 1 - b;
    }
    x(0, i) = -1 + 2 * a;
    x(1, i) = -1 + 2 * b;
  }
  return x;
}

// Monomials x1^i x2^j with i + j <= p, in a fixed order; used as a basis
// independent of the PKD machinery.
std::vector<std::pair<int, int>> monomials(int p) {
  std::vector<std::pair<int, int>> m;
  for (int d = 0; d <= p; ++d)
    for (int j = 0; j <= d; ++j) m.emplace_back(d - j, j);
  return m;
}

Mat monomial_values(int p, const Pts& x) {
  const auto mono = monomials(p);
  Mat v(x.cols(), mono.size());
  for (Eigen::Index q = 0; q < x.cols(); ++q)
    for (std::size_t k = 0; k < mono.size(); ++k)
      v(q, k) = std::pow(x(0, q), mono[k].first) * std::pow(x(1, q), mono[k].second);
  return v;
}

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

double binom(int n, int k) { return factorial(n) / (factorial(k) * factorial(n - k)); }

}  // namespace

TEST_CASE("inner product shapes follow the variant") {
  const auto q1 = build_inner_product(Variant::QuadratureI, 2);
  CHECK(q1.facet_params.size() == 3);
  CHECK(q1.facet_degree == 5);
  CHECK(q1.volume_degree >= 4);

  const auto q2 = build_inner_product(Variant::QuadratureII, 2);
  CHECK(q2.facet_params.size() == 3);
  CHECK(q2.facet_degree == 3);

  const auto col = build_inner_product(Variant::Collocation, 3);
  CHECK(col.volume_nodes.cols() == 10);
  CHECK((col.W - col.W.transpose()).norm() <= 1e-14);
  CHECK((col.W - Mat(col.W.diagonal().asDiagonal())).norm() > 1e-3);

  // column sums of W are the exact integrals of the nodal basis functions
  NodalBasis<double> nb(3, col.volume_nodes);
  const auto rule = triangle_volume_rule<double>(10);
  const Vec exact = nb.values(rule.nodes).transpose() * rule.weights;
  CHECK((col.W.colwise().sum().transpose() - exact).norm() <= 1e-13);

  for (int p = 2; p <= 4; ++p) {
    for (Variant v : kVariants) {
      const auto ip = build_inner_product(v, p);
      CHECK(is_spd(ip.W));
      for (int g = 0; g < kNumFacets; ++g) {
        CHECK(is_spd(ip.Wf[g]));
        // facet nodes lie on their facet
        const ReferenceTriangle<double> tri;
        const Vec2 a = tri.vertices[g], b = tri.vertices[(g + 1) % 3];
        const Vec2 t = (b - a).normalized();
        for (Eigen::Index i = 0; i < ip.facet_nodes[g].cols(); ++i) {
          const Vec2 d = ip.facet_nodes[g].col(i) - a;
          CHECK(std::abs(t.x() * d.y() - t.y() * d.x()) <= 1e-12);
        }
      }
      if (v != Variant::Collocation) {
        CHECK((ip.W - Mat(ip.W.diagonal().asDiagonal())).norm() == 0.0);
        CHECK((ip.W.diagonal().array() > 0).all());
      }
    }
  }
}

TEST_CASE("mass and projection") {
  for (int p = 2; p <= 4; ++p) {
    const auto q1 = build_reference_operators(p, Variant::QuadratureI, 0.0);
    CHECK((q1.M - Mat::Identity(q1.M.rows(), q1.M.cols())).norm() <= 1e-12);

    const auto col = build_reference_operators(p, Variant::Collocation, 0.0);
    CHECK((col.V - Mat::Identity(col.V.rows(), col.V.cols())).norm() <= 1e-12);
    CHECK((col.M - col.ip.W).norm() <= 1e-12);
    CHECK((col.P - Mat::Identity(col.P.rows(), col.P.cols())).norm() <= 1e-11);

    for (Variant v : kVariants) {
      const auto ops = build_reference_operators(p, v, 0.0);
      CHECK(is_spd(ops.M));
      const int np = ops.num_modes();
      for (unsigned s = 0; s < 20; ++s) {
        const Vec c = random_vec(np, 100 * p + s);
        CHECK((ops.P * (ops.V * c) - c).norm() <= 1e-11);
      }

      // constant J scales mass and leaves the projection unchanged
      const double J = 0.37;
      const Vec j = Vec::Constant(ops.num_volume_nodes(), J);
      CHECK((physical_mass(ops.V, ops.ip.W, j) - J * ops.M).norm() <= 1e-13);
      CHECK((physical_projection(ops.V, ops.ip.W, j) - ops.P).norm() <= 1e-12);

      // the projection of 1 reproduces 1 at volume and facet nodes
      const Vec one = ops.P * Vec::Ones(ops.num_volume_nodes());
      CHECK((ops.V * one - Vec::Ones(ops.num_volume_nodes())).norm() <= 1e-12);
      for (int g = 0; g < kNumFacets; ++g)
        CHECK((ops.Vf[g] * one - Vec::Ones(ops.num_facet_nodes())).norm() <= 1e-12);
      for (int m = 0; m < 2; ++m) CHECK((ops.D[m] * one).norm() <= 1e-12);
    }
  }
}

TEST_CASE("differentiation is exact on the solution space") {
  for (int p = 2; p <= 4; ++p) {
    for (Variant v : {Variant::QuadratureI, Variant::Collocation}) {
      const auto ops = build_reference_operators(p, v, 0.0);
      const Pts x = sample_points(15, 7 + p);
      const Mat phi = ops.basis.values(x);
      const Vec c = random_vec(ops.num_modes(), 31 * p);
      for (int m = 0; m < 2; ++m) {
        const Vec exact = ops.basis.gradient(x, m) * c;
        CHECK((phi * (ops.D[m] * c) - exact).norm() <= 1e-11);
      }
    }
  }

  for (int p = 2; p <= 4; ++p) {
    const auto D = modal_diff_matrices(p);
    Mat pw = Mat::Identity(D[0].rows(), D[0].cols());
    for (int k = 0; k <= p; ++k) pw = pw * D[0];
    CHECK(pw.norm() <= 1e-11);
  }

  // x1 x2 -> x2, with coefficients from exact projection onto the PKD basis
  const int p = 3;
  const PkdBasis<double> basis(p);
  const auto rule = triangle_volume_rule<double>(2 * p + 2);
  const Mat phi = basis.values(rule.nodes);
  Vec f(rule.weights.size()), g(rule.weights.size());
  for (Eigen::Index q = 0; q < f.size(); ++q) {
    f(q) = rule.nodes(0, q) * rule.nodes(1, q);
    g(q) = rule.nodes(1, q);
  }
  const Vec cf = phi.transpose() * rule.weights.asDiagonal() * f;
  const Vec cg = phi.transpose() * rule.weights.asDiagonal() * g;
  CHECK((modal_diff_matrices(p)[0] * cf - cg).norm() <= 1e-12);
}

TEST_CASE("SBP and discrete divergence theorem by variant") {
  for (int p = 2; p <= 4; ++p) {
    for (Variant v : kVariants) {
      const auto ops = build_reference_operators(p, v, 0.0);
      const double sbp = check_sbp(ops);
      if (v == Variant::QuadratureII)
        CHECK(sbp > 1e-3);
      else
        CHECK(sbp <= 1e-12);
      CHECK(check_divergence_theorem(ops) <= 1e-12);
    }
  }
}

TEST_CASE("VCJH penalty matrix") {
  for (int p = 2; p <= 4; ++p) {
    for (Variant v : kVariants) {
      const auto dg = build_reference_operators(p, v, 0.0);
      CHECK(dg.K.norm() == 0.0);
      CHECK((dg.F - Mat::Identity(dg.F.rows(), dg.F.cols())).norm() <= 1e-14);

      const auto ops = build_reference_operators(p, v, vcjh_c_plus(p));
      CHECK((ops.K - ops.K.transpose()).norm() <= 1e-12 * ops.K.norm());
      CHECK(is_spd(ops.M + ops.K));
      for (int m = 0; m < 2; ++m)
        CHECK((ops.K * ops.D[m]).norm() <= 1e-12 * ops.K.norm() * ops.D[m].norm());

      Eigen::JacobiSVD<Mat> svd(ops.K);
      const Vec& sv = svd.singularValues();
      int rank = 0;
      for (Eigen::Index i = 0; i < sv.size(); ++i) rank += sv(i) > 1e-10 * sv(0);
      CHECK(rank == p + 1);
      Eigen::SelfAdjointEigenSolver<Mat> es(ops.K);
      CHECK(es.eigenvalues().minCoeff() >= -1e-12 * sv(0));
    }
  }
}

TEST_CASE("K matches the Sobolev seminorm of monomial expansions") {
  // For |alpha| = p the alpha-derivative of a degree-p polynomial is
  // alpha! times its x^alpha coefficient.
  for (int p = 2; p <= 4; ++p) {
    const double c = vcjh_c_plus(p);
    const auto ops = build_reference_operators(p, Variant::QuadratureI, c);
    const Pts nodes = warp_blend_nodes<double>(p);
    const Mat A = monomial_values(p, nodes);
    const Mat to_mono = A.partialPivLu().solve(ops.basis.values(nodes));
    const auto mono = monomials(p);
    Mat Kref = Mat::Zero(ops.num_modes(), ops.num_modes());
    for (std::size_t k = 0; k < mono.size(); ++k) {
      const auto [i, j] = mono[k];
      if (i + j != p) continue;
      const double s = factorial(i) * factorial(j);
      const Eigen::RowVectorXd d = s * to_mono.row(k);
      Kref += c / 2.0 * binom(p, j) * 2.0 * d.transpose() * d;
    }
    CHECK((ops.K - Kref).norm() <= 1e-11 * std::max(1.0, Kref.norm()));
  }
}

TEST_CASE("lifting matrices") {
  for (int p = 2; p <= 4; ++p) {
    for (Variant v : kVariants) {
      const auto dg = build_reference_operators(p, v, 0.0);
      for (int g = 0; g < kNumFacets; ++g) {
        const Mat ref = dg.Minv * dg.Vf[g].transpose() * dg.ip.Wf[g];
        CHECK((dg.L[g] - ref).norm() <= 1e-13 * std::max(1.0, ref.norm()));
      }

      const auto ops = build_reference_operators(p, v, vcjh_c_plus(p));
      const Vec one = ops.P * Vec::Ones(ops.num_volume_nodes());
      for (int g = 0; g < kNumFacets; ++g) {
        const Eigen::RowVectorXd lhs = one.transpose() * (ops.M + ops.K) * ops.L[g];
        const Eigen::RowVectorXd rhs = Vec::Ones(ops.num_facet_nodes()).transpose() * ops.ip.Wf[g];
        CHECK((lhs - rhs).norm() <= 1e-12);
      }
    }
  }
}

TEST_CASE("correction fields satisfy the weighted integration-by-parts identity") {
  // Tested against polynomials written in monomials, with volume integrals
  // from an independent high-degree rule and the Sobolev term from monomial
  // coefficients.
  for (int p = 2; p <= 4; ++p) {
    for (Variant v : {Variant::QuadratureI, Variant::Collocation}) {
      const double c = vcjh_c_plus(p);
      const auto ops = build_reference_operators(p, v, c);
      const Pts nodes = warp_blend_nodes<double>(p);
      const Mat A = monomial_values(p, nodes);
      const Mat basis_to_mono = A.partialPivLu().solve(ops.basis.values(nodes));
      const auto mono = monomials(p);
      const auto rule = triangle_volume_rule<double>(2 * p + 2);
      const Mat mono_q = monomial_values(p, rule.nodes);

      for (unsigned s = 0; s < 3; ++s) {
        const Vec vm = random_vec(static_cast<int>(mono.size()), 1000 * p + s);  // monomial coeffs
        const Vec vq = mono_q * vm;
        for (int g = 0; g < kNumFacets; ++g) {
          const Vec vf = monomial_values(p, ops.ip.facet_nodes[g]) * vm;
          for (int j = 0; j < ops.num_facet_nodes(); ++j) {
            const Vec hm = basis_to_mono * ops.L[g].col(j);
            double lhs = (vq.array() * (mono_q * hm).array() * rule.weights.array()).sum();
            for (std::size_t k = 0; k < mono.size(); ++k) {
              const auto [a1, a2] = mono[k];
              if (a1 + a2 != p) continue;
              const double s2 = factorial(a1) * factorial(a2);
              lhs += c / 2.0 * binom(p, a2) * 2.0 * (s2 * vm(k)) * (s2 * hm(k));
            }
            const double rhs = (vf.transpose() * ops.ip.Wf[g].col(j))(0);
            CHECK(std::abs(lhs - rhs) <= 1e-11);
          }
        }
      }
    }
  }
}

TEST_CASE("filter acts only on the highest-degree modes") {
  for (int p = 2; p <= 4; ++p) {
    for (Variant v : kVariants) {
      const auto ops = build_reference_operators(p, v, vcjh_c_plus(p));
      CHECK((ops.F - filter_matrix(ops.M, ops.K)).norm() <= 1e-14);
      const Mat Fm = ops.basis.to_modal() * ops.F * ops.basis.from_modal();
      const auto modes = mode_indices(p);
      Mat E = Fm - Mat::Identity(Fm.rows(), Fm.cols());
      for (std::size_t a = 0; a < modes.size(); ++a)
        for (std::size_t b = 0; b < modes.size(); ++b) {
          const bool top = modes[a].first + modes[a].second == p || modes[b].first + modes[b].second == p;
          if (!top) CHECK(std::abs(E(a, b)) <= 1e-12);
        }
      CHECK(E.norm() > 1e-8);

      // polynomials of degree < p pass through unchanged
      const PkdBasis<double> low(p - 1);
      Vec cm = Vec::Zero(ops.num_modes());
      const Vec r = random_vec(low.size(), 5 * p);
      std::size_t t = 0;
      for (std::size_t a = 0; a < modes.size(); ++a)
        if (modes[a].first + modes[a].second < p) cm(a) = r(t++);
      const Vec cb = ops.basis.from_modal() * cm;
      CHECK((ops.F * cb - cb).norm() <= 1e-12);
    }
  }
}

TEST_CASE("transformed filter identity on a curved element") {
  for (int p = 2; p <= 4; ++p) {
    for (Variant v : {Variant::QuadratureI, Variant::Collocation}) {
      const auto ops = build_reference_operators(p, v, vcjh_c_plus(p));
      Vec j = (random_vec(ops.num_volume_nodes(), 77 * p).array() * 0.3 + 1.0).matrix();
      const Mat Mk = physical_mass(ops.V, ops.ip.W, j);
      const Mat PJV = ops.Minv * Mk;
      const Mat Fk = PJV.inverse() * ops.F * PJV;
      const Mat lhs = (ops.M + ops.K) * PJV;
      const Mat rhs = Mk * Fk.inverse();
      CHECK((lhs - rhs).norm() <= 1e-11 * lhs.norm());
    }
  }
}

TEST_CASE("c_plus presets and errors") {
  CHECK(vcjh_c_plus(2) == 4.3e-2);
  CHECK(vcjh_c_plus(3) == 6.0e-4);
  CHECK(vcjh_c_plus(4) == 5.6e-6);
  CHECK_THROWS_AS(vcjh_c_plus(5), ConfigError);
  CHECK_THROWS(build_reference_operators(2, Variant::QuadratureI, -1.0));
  CHECK(variant_from_string("Collocation") == Variant::Collocation);
  CHECK_THROWS_AS(variant_from_string("gauss"), ConfigError);
}
