#pragma once

// Quantities compared across runs: L2 differences, conservation functionals,
// the VCJH energy norm, and the CSV tables that collect them.

#include "sbpfr/solver.hpp"

#include <optional>
#include <string>
#include <vector>

namespace sbpfr {

/// sqrt(sum_k int (a-b)^2 J) per equation, with a degree-4p rule.
Vec l2_difference(const Discretization& disc, const SolutionState& a, const SolutionState& b);

/// sum_k 1^T W J^(k) V u per equation.
Vec conservation_functional(const Discretization& disc, const SolutionState& s);

/// sum over elements and equations of J^(k) u^T (M+K) u. Affine meshes only.
double energy_norm_squared(const Discretization& disc, const SolutionState& s);

/// 2 sum_k J^(k) u^T (M+K) du/dt. Affine meshes only.
double energy_rate(const Discretization& disc, const Mat& U, const Mat& dU);

/// -(lambda/2) sum over facet records of |a.n| d^T W_g J_g d with d the
/// trace jump; each interface is visited from both sides.
double advection_interface_dissipation(const Discretization& disc, const AdvectionLaw& law,
                                       double lambda, const Mat& U);

/// One row of a results table: a (variant, c, lambda or equation) entry
/// comparing a strong-form and a weak-form run.
struct DiagnosticsRecord {
  Variant variant = Variant::QuadratureI;
  std::string c_label;
  double c = 0;
  std::string component;  // lambda value or equation name
  bool stable_strong = true;
  bool stable_weak = true;
  double equivalence = 0;
  double conservation_strong = 0;
  double conservation_weak = 0;
  std::optional<double> energy_strong;
  std::optional<double> energy_weak;
};

/// Writes one CSV with a header row; unstable entries become UNSTABLE.
void emit_table(const std::vector<DiagnosticsRecord>& records, const std::string& path);

/// 17 significant digits.
std::string format_double(double x);

}  // namespace sbpfr
