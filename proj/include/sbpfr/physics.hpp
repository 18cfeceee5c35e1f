#pragma once

// Linear advection and the two-dimensional Euler equations: analytic fluxes,
// interface fluxes, initial data and admissibility.

#include "sbpfr/types.hpp"

#include <array>

namespace sbpfr {

struct AdvectionLaw {
  Vec2 a = Vec2(1, 1);
  static constexpr int kNumEq = 1;
};

/// f* = (a.n)(u- + u+)/2 - lambda |a.n| (u+ - u-)/2.
inline double advection_numerical_flux(const AdvectionLaw& law, double um, double up,
                                       const Vec2& n, double lambda) {
  const double an = law.a.dot(n);
  return 0.5 * an * (um + up) - 0.5 * lambda * std::abs(an) * (up - um);
}

using EulerState = Eigen::Vector4d;  // (rho, rho v1, rho v2, e)

struct EulerLaw {
  double gamma = 1.4;
  static constexpr int kNumEq = 4;

  double pressure(const EulerState& u) const {
    return (gamma - 1) * (u(3) - 0.5 * (u(1) * u(1) + u(2) * u(2)) / u(0));
  }
  bool admissible(const EulerState& u) const {
    return u(0) > 0 && pressure(u) > 0 && u.allFinite();
  }
  /// Throws AdmissibilityError carrying `where` if rho <= 0 or p <= 0.
  void require_admissible(const EulerState& u, const char* where) const;

  /// Physical flux in direction m (0 or 1).
  EulerState flux(const EulerState& u, int m) const;
  /// n_1 f^(1) + n_2 f^(2).
  EulerState normal_flux(const EulerState& u, const Vec2& n) const;
  EulerState from_primitive(double rho, const Vec2& v, double p) const;
};

/// Roe flux with Roe-averaged velocity and enthalpy; no entropy fix.
EulerState roe_flux(const EulerLaw& law, const EulerState& um, const EulerState& up, const Vec2& n);

struct VortexParams {
  double mach = 0.4;
  double theta = 0.7853981633974483;  // pi/4
  double epsilon = 0.0;               // 0 selects 5 sqrt(2) e^(1/2) / (4 pi)
  Vec2 center = Vec2(5, 5);
  double L = 10;

  double strength() const;
};

EulerState vortex_initial_condition(const Vec2& x, const VortexParams& params, const EulerLaw& law);

}  // namespace sbpfr
