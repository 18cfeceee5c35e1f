#pragma once

// Semi-discrete residual forms on a periodic mesh and explicit RK4 marching.
//
// Coefficients of all elements and equations live in one matrix with N_p rows
// and one column per (equation, element) pair, column index e*K + k. This
// lets every reference operator act on all elements with a single product.

#include "sbpfr/mesh.hpp"
#include "sbpfr/operators.hpp"
#include "sbpfr/physics.hpp"

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace sbpfr {

enum class ResidualForm { StrongFR, StrongDG, WeakDG, WeakFiltered, WeakZwanenburg };

std::string to_string(ResidualForm f);
ResidualForm form_from_string(const std::string& s);
/// strong_dg and weak_dg are only defined for c = 0.
bool form_requires_dg(ResidualForm f);

enum class Problem { Advection, Euler };

std::string to_string(Problem p);

/// Conservation law plus interface-flux choice.
struct Model {
  Problem problem = Problem::Advection;
  AdvectionLaw advection;
  double lambda = 1.0;
  EulerLaw euler;

  int num_eq() const { return problem == Problem::Advection ? 1 : 4; }
};

struct SolutionState {
  double t = 0;
  int num_eq = 1;
  int num_elements = 0;
  Mat coeffs;  // N_p x (num_eq * K)

  auto element(int e, int k) { return coeffs.col(e * num_elements + k); }
  auto element(int e, int k) const { return coeffs.col(e * num_elements + k); }
};

/// Reference operators bound to a mesh: geometry, connectivity and the
/// per-element inverse physical mass matrices.
class Discretization {
 public:
  Discretization(std::shared_ptr<const ReferenceOperators> ops, Mesh mesh);

  const ReferenceOperators& ops() const { return *ops_; }
  const Mesh& mesh() const { return mesh_; }
  const GeometricFactors& geometry() const { return geo_; }
  const Connectivity& connectivity() const { return conn_; }
  int num_elements() const { return mesh_.num_elements(); }
  bool affine() const { return geo_.affine; }

  /// M^(k) = V^T W J^(k) V.
  Mat physical_mass(int k) const;
  /// (M^(k))^-1; equals M^-1 / J^(k) on affine elements.
  const Mat& physical_mass_inverse(int k) const { return minv_[k]; }
  double affine_jacobian(int k) const { return geo_.J(0, k); }
  /// Row vector 1^T W J^(k) V.
  Eigen::RowVectorXd conservation_row(int k) const { return cons_.col(k).transpose(); }

  /// Physical coordinates of the volume nodes, 2 x N per element.
  const std::vector<Mat>& volume_points() const { return points_; }

 private:
  std::shared_ptr<const ReferenceOperators> ops_;
  Mesh mesh_;
  GeometricFactors geo_;
  Connectivity conn_;
  std::vector<Mat> minv_;
  Mat cons_;
  std::vector<Mat> points_;
};

/// u = P^(k) u0(nodes) on every element.
SolutionState init_projection(const Discretization& disc, int num_eq,
                              const std::function<Vec(const Vec2&)>& u0);

/// Right-hand side du/dt for one residual form; holds reusable workspace, so
/// one instance must not be shared across threads.
class SemiDiscreteOperator {
 public:
  SemiDiscreteOperator(std::shared_ptr<const Discretization> disc, Model model, ResidualForm form);

  void operator()(const Mat& U, Mat& dU);
  Mat evaluate(const Mat& U) {
    Mat dU;
    (*this)(U, dU);
    return dU;
  }

  /// Contravariant volume fluxes f^(m) at volume nodes, N x (num_eq K).
  void transformed_flux_nodal(const Mat& Unodal, Mat& F0, Mat& F1) const;
  /// J^(k,g)-scaled numerical fluxes at stacked facet nodes.
  void facet_flux_nodal(const Mat& Ufacet, Mat& Fstar) const;

  const Discretization& discretization() const { return *disc_; }
  const Model& model() const { return model_; }
  ResidualForm form() const { return form_; }

 private:
  std::shared_ptr<const Discretization> disc_;
  Model model_;
  ResidualForm form_;
  bool strong_ = false;

  Mat V_, Vf_, P_;
  std::array<Mat, 2> vol_;  // acts on contravariant flux at volume nodes
  Mat surf_;                // acts on facet data
  std::array<Vec, 2> nref_; // reference normal per stacked facet node
  std::array<Mat, 2> contra_velocity_;  // advection only
  Mat an_;                              // advection only: a.n
  std::vector<Eigen::Index> ext_;       // exterior gather index into the first equation block

  Mat Un_, Uf_, F0_, F1_, Fs_, PF_, R_;
};

struct TimeStep {
  double dt = 0;
  long steps = 0;
};

/// dt = T / floor(T / dt*), dt* = beta h / ((2p+1) a).
TimeStep time_step_size(double T, double h, double a, int p, double beta);

struct RunResult {
  SolutionState state;
  bool stable = true;
  long failed_step = -1;
  std::string reason;
};

using StepHook = std::function<void(long step, const SolutionState&)>;

/// Classical RK4. Reports instability instead of throwing when values grow
/// past 1e6 (max|u0| + 1), turn non-finite, or leave the admissible set.
RunResult rk4_advance(SolutionState state, const std::function<void(const Mat&, Mat&)>& rhs,
                      double dt, long steps, const StepHook& hook = {});

}  // namespace sbpfr
