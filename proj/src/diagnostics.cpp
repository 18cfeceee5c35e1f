#include "sbpfr/diagnostics.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace sbpfr {

Vec l2_difference(const Discretization& disc, const SolutionState& a, const SolutionState& b) {
  const auto& ops = disc.ops();
  const auto rule = triangle_volume_rule<double>(4 * ops.p);
  const Mat phi = ops.basis.values(rule.nodes);
  const Mat J = mapping_jacobians(disc.mesh(), rule.nodes).det;
  const int K = disc.num_elements();
  Vec out = Vec::Zero(a.num_eq);
  const Mat diff = phi * (a.coeffs - b.coeffs);
  for (int e = 0; e < a.num_eq; ++e) {
    double s = 0;
    for (int k = 0; k < K; ++k)
      s += (rule.weights.cwiseProduct(J.col(k))).dot(diff.col(e * K + k).cwiseAbs2());
    out(e) = std::sqrt(s);
  }
  return out;
}

Vec conservation_functional(const Discretization& disc, const SolutionState& s) {
  const int K = disc.num_elements();
  Vec out = Vec::Zero(s.num_eq);
  for (int e = 0; e < s.num_eq; ++e)
    for (int k = 0; k < K; ++k) out(e) += disc.conservation_row(k).dot(s.element(e, k));
  return out;
}

namespace {

void require_affine(const Discretization& disc) {
  if (!disc.affine())
    throw std::invalid_argument("the VCJH energy norm is only defined here for affine meshes");
}

}  // namespace

double energy_norm_squared(const Discretization& disc, const SolutionState& s) {
  require_affine(disc);
  const Mat MK = disc.ops().M + disc.ops().K;
  const int K = disc.num_elements();
  double total = 0;
  for (int e = 0; e < s.num_eq; ++e)
    for (int k = 0; k < K; ++k) {
      const auto u = s.element(e, k);
      total += disc.affine_jacobian(k) * u.dot(MK * u);
    }
  return total;
}

double energy_rate(const Discretization& disc, const Mat& U, const Mat& dU) {
  require_affine(disc);
  const Mat MK = disc.ops().M + disc.ops().K;
  const int K = disc.num_elements();
  double total = 0;
  for (Eigen::Index col = 0; col < U.cols(); ++col)
    total += 2 * disc.affine_jacobian(static_cast<int>(col % K)) * U.col(col).dot(MK * dU.col(col));
  return total;
}

double advection_interface_dissipation(const Discretization& disc, const AdvectionLaw& law,
                                       double lambda, const Mat& U) {
  const auto& ops = disc.ops();
  const auto& geo = disc.geometry();
  const int nf = ops.num_facet_nodes();
  double total = 0;
  for (const auto& r : disc.connectivity().records) {
    const Vec um = ops.Vf[r.facet] * U.col(r.elem);
    const Vec upn = ops.Vf[r.nbr_facet] * U.col(r.nbr);
    Vec d(nf), w(nf);
    for (int i = 0; i < nf; ++i) {
      const int row = r.facet * nf + i;
      d(i) = um(i) - upn(r.perm[i]);
      const Vec2 n(geo.nx(row, r.elem), geo.ny(row, r.elem));
      w(i) = std::abs(law.a.dot(n)) * geo.Jf(row, r.elem);
    }
    total += d.dot(ops.ip.Wf[r.facet] * w.cwiseProduct(d));
  }
  return -0.5 * lambda * total;
}

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void emit_table(const std::vector<DiagnosticsRecord>& records, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write table " + path);
  out << "variant,c,lambda_or_equation,equivalence,conservation_strong,conservation_weak,"
         "energy_strong,energy_weak,stable_strong,stable_weak\n";
  const std::string bad = "UNSTABLE";
  auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string("NA"); };
  for (const auto& r : records) {
    const bool both = r.stable_strong && r.stable_weak;
    out << to_string(r.variant) << ',' << r.c_label << ',' << r.component << ','
        << (both ? format_double(r.equivalence) : bad) << ','
        << (r.stable_strong ? format_double(r.conservation_strong) : bad) << ','
        << (r.stable_weak ? format_double(r.conservation_weak) : bad) << ','
        << (r.stable_strong ? opt(r.energy_strong) : bad) << ','
        << (r.stable_weak ? opt(r.energy_weak) : bad) << ','
        << (r.stable_strong ? "true" : "false") << ',' << (r.stable_weak ? "true" : "false") << '\n';
  }
  if (!out) throw std::runtime_error("write failed for table " + path);
}

}  // namespace sbpfr
