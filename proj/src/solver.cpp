#include "sbpfr/solver.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

namespace sbpfr {

std::string to_string(ResidualForm f) {
  switch (f) {
    case ResidualForm::StrongFR: return "strong_fr";
    case ResidualForm::StrongDG: return "strong_dg";
    case ResidualForm::WeakDG: return "weak_dg";
    case ResidualForm::WeakFiltered: return "weak_filtered";
    case ResidualForm::WeakZwanenburg: return "weak_zwanenburg";
  }
  return "unknown";
}

ResidualForm form_from_string(const std::string& s) {
  std::string t(s);
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char ch) { return std::tolower(ch); });
  for (auto f : {ResidualForm::StrongFR, ResidualForm::StrongDG, ResidualForm::WeakDG,
                 ResidualForm::WeakFiltered, ResidualForm::WeakZwanenburg})
    if (t == to_string(f)) return f;
  throw ConfigError("unknown residual form `" + s + "`");
}

bool form_requires_dg(ResidualForm f) {
  return f == ResidualForm::StrongDG || f == ResidualForm::WeakDG;
}

std::string to_string(Problem p) { return p == Problem::Advection ? "advection" : "euler"; }

// ---------------------------------------------------------------------------

Discretization::Discretization(std::shared_ptr<const ReferenceOperators> ops, Mesh mesh)
    : ops_(std::move(ops)), mesh_(std::move(mesh)) {
  const auto& ip = ops_->ip;
  geo_ = geometric_factors(mesh_, ip.volume_nodes, ip.facet_nodes);
  conn_ = periodic_connectivity(mesh_, ip.facet_nodes);

  const int K = num_elements();
  const Vec w1 = ip.W * Vec::Ones(ip.W.rows());
  minv_.resize(K);
  cons_.resize(ops_->num_modes(), K);
  points_.resize(K);
  for (int k = 0; k < K; ++k) {
    const Eigen::FullPivLU<Mat> lu(physical_mass(k));
    if (!lu.isInvertible())
      throw ConstructionError("physical mass matrix of element " + std::to_string(k) +
                              " is not invertible");
    minv_[k] = lu.inverse();
    cons_.col(k) = ops_->V.transpose() * w1.cwiseProduct(geo_.J.col(k));
    points_[k] = mesh_.map_points(k, ip.volume_nodes);
  }
}

Mat Discretization::physical_mass(int k) const {
  return sbpfr::physical_mass(ops_->V, ops_->ip.W, geo_.J.col(k));
}

SolutionState init_projection(const Discretization& disc, int num_eq,
                              const std::function<Vec(const Vec2&)>& u0) {
  const auto& ops = disc.ops();
  const int K = disc.num_elements();
  const int N = ops.num_volume_nodes();
  SolutionState s;
  s.num_eq = num_eq;
  s.num_elements = K;
  s.coeffs.resize(ops.num_modes(), num_eq * K);
  Mat vals(N, num_eq);
  for (int k = 0; k < K; ++k) {
    const Mat& x = disc.volume_points()[k];
    for (int q = 0; q < N; ++q) vals.row(q) = u0(x.col(q)).transpose();
    const Mat proj = disc.physical_mass_inverse(k) * ops.V.transpose() * ops.ip.W *
                     disc.geometry().J.col(k).asDiagonal();
    const Mat c = proj * vals;
    for (int e = 0; e < num_eq; ++e) s.element(e, k) = c.col(e);
  }
  return s;
}

// ---------------------------------------------------------------------------

SemiDiscreteOperator::SemiDiscreteOperator(std::shared_ptr<const Discretization> disc, Model model,
                                           ResidualForm form)
    : disc_(std::move(disc)), model_(model), form_(form) {
  const auto& ops = disc_->ops();
  if (form_requires_dg(form) && ops.c != 0)
    throw ConfigError(to_string(form) + " requires c = 0");

  const int np = ops.num_modes();
  const int nf = ops.num_facet_nodes();
  const int K = disc_->num_elements();
  V_ = ops.V;
  P_ = ops.P;
  Vf_.resize(kNumFacets * nf, np);
  Mat B(np, kNumFacets * nf), Lst(np, kNumFacets * nf);
  std::array<Mat, 2> E = {Mat::Zero(np, np), Mat::Zero(np, np)};
  for (int m = 0; m < 2; ++m) nref_[m].resize(kNumFacets * nf);
  for (int g = 0; g < kNumFacets; ++g) {
    Vf_.middleRows(g * nf, nf) = ops.Vf[g];
    B.middleCols(g * nf, nf) = ops.Vf[g].transpose() * ops.ip.Wf[g];
    Lst.middleCols(g * nf, nf) = ops.L[g];
    for (int m = 0; m < 2; ++m) {
      E[m] += ops.tri.normals[g](m) * ops.Vf[g].transpose() * ops.ip.Wf[g] * ops.Vf[g];
      nref_[m].segment(g * nf, nf).setConstant(ops.tri.normals[g](m));
    }
  }

  const Mat I = Mat::Identity(np, np);
  std::array<Mat, 2> Q, A;
  for (int m = 0; m < 2; ++m) {
    Q[m] = ops.D[m].transpose() * ops.V.transpose() * ops.ip.W;
    A[m] = ops.M * ops.D[m] * ops.P;
  }
  switch (form) {
    case ResidualForm::WeakDG:
      vol_ = Q;
      surf_ = -B;
      break;
    case ResidualForm::StrongDG:
      vol_ = {-A[0], -A[1]};
      surf_ = -B;
      strong_ = true;
      break;
    case ResidualForm::StrongFR:
      vol_ = {-A[0], -A[1]};
      surf_ = -ops.M * Lst;
      strong_ = true;
      break;
    case ResidualForm::WeakFiltered: {
      const Mat G = (ops.M + ops.K).llt().solve(ops.M).transpose();  // M (M+K)^-1
      vol_ = {G * Q[0], G * Q[1]};
      surf_ = -G * B;
      break;
    }
    case ResidualForm::WeakZwanenburg: {
      const Mat Ft = ops.F.transpose();
      for (int m = 0; m < 2; ++m) vol_[m] = Q[m] - (I - Ft) * E[m] * ops.P;
      surf_ = -Ft * B;
      break;
    }
  }
  // Strong forms subtract the projected normal flux from f*; fold that into
  // the volume operators so every form reads R = sum_m vol_m F_m + surf F*.
  if (strong_)
    for (int m = 0; m < 2; ++m) vol_[m] -= surf_ * nref_[m].asDiagonal() * Vf_ * ops.P;

  const auto& geo = disc_->geometry();
  if (model_.problem == Problem::Advection) {
    const Vec2 a = model_.advection.a;
    for (int m = 0; m < 2; ++m) contra_velocity_[m] = geo.adj[2 * m] * a(0) + geo.adj[2 * m + 1] * a(1);
    an_ = geo.nx * a(0) + geo.ny * a(1);
  }

  const auto& conn = disc_->connectivity();
  const Eigen::Index rows = kNumFacets * nf;
  ext_.resize(rows * K);
  for (int k = 0; k < K; ++k) {
    for (int g = 0; g < kNumFacets; ++g) {
      const auto& r = conn.at(k, g);
      for (int j = 0; j < nf; ++j)
        ext_[k * rows + g * nf + j] = (r.nbr_facet * nf + r.perm[j]) + r.nbr * rows;
    }
  }
}

void SemiDiscreteOperator::transformed_flux_nodal(const Mat& Un, Mat& F0, Mat& F1) const {
  const auto& geo = disc_->geometry();
  const int K = disc_->num_elements();
  F0.resize(Un.rows(), Un.cols());
  F1.resize(Un.rows(), Un.cols());
  if (model_.problem == Problem::Advection) {
    F0 = contra_velocity_[0].cwiseProduct(Un);
    F1 = contra_velocity_[1].cwiseProduct(Un);
    return;
  }
  const auto& law = model_.euler;
  for (int k = 0; k < K; ++k) {
    for (Eigen::Index q = 0; q < Un.rows(); ++q) {
      const EulerState u(Un(q, k), Un(q, K + k), Un(q, 2 * K + k), Un(q, 3 * K + k));
      law.require_admissible(u, "volume node");
      const EulerState f0 = law.flux(u, 0), f1 = law.flux(u, 1);
      for (int m = 0; m < 2; ++m) {
        const EulerState fm = geo.adj[2 * m](q, k) * f0 + geo.adj[2 * m + 1](q, k) * f1;
        Mat& F = m == 0 ? F0 : F1;
        for (int e = 0; e < 4; ++e) F(q, e * K + k) = fm(e);
      }
    }
  }
}

void SemiDiscreteOperator::facet_flux_nodal(const Mat& Uf, Mat& Fs) const {
  const auto& geo = disc_->geometry();
  const int K = disc_->num_elements();
  const Eigen::Index rows = Uf.rows();
  Fs.resize(rows, Uf.cols());
  const double* ext = Uf.data();
  if (model_.problem == Problem::Advection) {
    const double lam = model_.lambda;
    for (int k = 0; k < K; ++k) {
      for (Eigen::Index i = 0; i < rows; ++i) {
        const double um = Uf(i, k), up = ext[ext_[k * rows + i]];
        const double an = an_(i, k);
        Fs(i, k) = geo.Jf(i, k) * (0.5 * an * (um + up) - 0.5 * lam * std::abs(an) * (up - um));
      }
    }
    return;
  }
  const Eigen::Index block = rows * K;
  for (int k = 0; k < K; ++k) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      const Eigen::Index x = ext_[k * rows + i];
      const EulerState um(Uf(i, k), Uf(i, K + k), Uf(i, 2 * K + k), Uf(i, 3 * K + k));
      const EulerState up(ext[x], ext[x + block], ext[x + 2 * block], ext[x + 3 * block]);
      const EulerState f = geo.Jf(i, k) * roe_flux(model_.euler, um, up, Vec2(geo.nx(i, k), geo.ny(i, k)));
      for (int e = 0; e < 4; ++e) Fs(i, e * K + k) = f(e);
    }
  }
}

void SemiDiscreteOperator::operator()(const Mat& U, Mat& dU) {
  Un_.noalias() = V_ * U;
  transformed_flux_nodal(Un_, F0_, F1_);
  Uf_.noalias() = Vf_ * U;
  facet_flux_nodal(Uf_, Fs_);

  R_.noalias() = vol_[0] * F0_;
  R_.noalias() += vol_[1] * F1_;
  R_.noalias() += surf_ * Fs_;

  const int K = disc_->num_elements();
  const int neq = static_cast<int>(U.cols()) / K;
  dU.resize(U.rows(), U.cols());
  if (disc_->affine()) {
    dU.noalias() = disc_->ops().Minv * R_;
    for (int e = 0; e < neq; ++e)
      for (int k = 0; k < K; ++k) dU.col(e * K + k) /= disc_->affine_jacobian(k);
  } else {
    for (int e = 0; e < neq; ++e)
      for (int k = 0; k < K; ++k)
        dU.col(e * K + k).noalias() = disc_->physical_mass_inverse(k) * R_.col(e * K + k);
  }
}

// ---------------------------------------------------------------------------

TimeStep time_step_size(double T, double h, double a, int p, double beta) {
  const double target = beta / (2 * p + 1) * h / a;
  const double ratio = T / target;
  // absorb a last-ulp shortfall when T is an exact multiple of the target
  long steps = static_cast<long>(std::floor(ratio * (1 + 4 * std::numeric_limits<double>::epsilon())));
  steps = std::max(steps, 1L);
  return {T / static_cast<double>(steps), steps};
}

RunResult rk4_advance(SolutionState state, const std::function<void(const Mat&, Mat&)>& rhs,
                      double dt, long steps, const StepHook& hook) {
  RunResult out;
  const double limit = 1e6 * (state.coeffs.cwiseAbs().maxCoeff() + 1);
  Mat k1, k2, k3, k4, tmp;
  const double t0 = state.t;
  if (hook) hook(0, state);
  for (long n = 0; n < steps; ++n) {
    try {
      rhs(state.coeffs, k1);
      tmp = state.coeffs + 0.5 * dt * k1;
      rhs(tmp, k2);
      tmp = state.coeffs + 0.5 * dt * k2;
      rhs(tmp, k3);
      tmp = state.coeffs + dt * k3;
      rhs(tmp, k4);
    } catch (const AdmissibilityError& e) {
      out.stable = false;
      out.failed_step = n + 1;
      out.reason = e.what();
      break;
    }
    state.coeffs += dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    state.t = t0 + dt * static_cast<double>(n + 1);
    if (!state.coeffs.allFinite() || state.coeffs.cwiseAbs().maxCoeff() > limit) {
      out.stable = false;
      out.failed_step = n + 1;
      out.reason = "blow-up guard tripped";
      break;
    }
    if (hook) hook(n + 1, state);
  }
  out.state = std::move(state);
  return out;
}

}  // namespace sbpfr
