#include "sbpfr/physics.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace sbpfr {

void EulerLaw::require_admissible(const EulerState& u, const char* where) const {
  if (!admissible(u))
    throw AdmissibilityError(std::string("inadmissible Euler state at ") + where +
                             ": rho=" + std::to_string(u(0)) +
                             ", p=" + std::to_string(pressure(u)));
}

EulerState EulerLaw::flux(const EulerState& u, int m) const {
  const double p = pressure(u);
  const double vm = u(1 + m) / u(0);
  EulerState f = vm * u;
  f(1 + m) += p;
  f(3) += vm * p;
  return f;
}

EulerState EulerLaw::normal_flux(const EulerState& u, const Vec2& n) const {
  const double p = pressure(u);
  const double vn = (u(1) * n(0) + u(2) * n(1)) / u(0);
  EulerState f = vn * u;
  f(1) += p * n(0);
  f(2) += p * n(1);
  f(3) += vn * p;
  return f;
}

EulerState EulerLaw::from_primitive(double rho, const Vec2& v, double p) const {
  return {rho, rho * v(0), rho * v(1), p / (gamma - 1) + 0.5 * rho * v.squaredNorm()};
}

EulerState roe_flux(const EulerLaw& law, const EulerState& um, const EulerState& up, const Vec2& n) {
  law.require_admissible(um, "interior trace");
  law.require_admissible(up, "exterior trace");
  const double g = law.gamma;
  const Vec2 t(-n(1), n(0));

  const double rl = um(0), rr = up(0);
  const Vec2 vl(um(1) / rl, um(2) / rl), vr(up(1) / rr, up(2) / rr);
  const double pl = law.pressure(um), pr = law.pressure(up);
  const double hl = (um(3) + pl) / rl, hr = (up(3) + pr) / rr;

  const double sl = std::sqrt(rl), sr = std::sqrt(rr);
  const double rho = sl * sr;
  const Vec2 v = (sl * vl + sr * vr) / (sl + sr);
  const double H = (sl * hl + sr * hr) / (sl + sr);
  const double a2 = (g - 1) * (H - 0.5 * v.squaredNorm());
  if (!(a2 > 0)) throw AdmissibilityError("Roe-averaged sound speed is not real");
  const double a = std::sqrt(a2);
  const double vn = v.dot(n), vt = v.dot(t);

  const double dp = pr - pl, drho = rr - rl;
  const double dvn = (vr - vl).dot(n), dvt = (vr - vl).dot(t);

  // acoustic (vn - a), entropy and shear (vn), acoustic (vn + a)
  const double s1 = std::abs(vn - a) * (dp - rho * a * dvn) / (2 * a2);
  const double s2 = std::abs(vn) * (drho - dp / a2);
  const double s3 = std::abs(vn) * rho * dvt;
  const double s4 = std::abs(vn + a) * (dp + rho * a * dvn) / (2 * a2);

  EulerState diss;
  diss(0) = s1 + s2 + s4;
  diss.segment<2>(1) = s1 * (v - a * n) + s2 * v + s3 * t + s4 * (v + a * n);
  diss(3) = s1 * (H - vn * a) + s2 * 0.5 * v.squaredNorm() + s3 * vt + s4 * (H + vn * a);

  return 0.5 * (law.normal_flux(um, n) + law.normal_flux(up, n)) - 0.5 * diss;
}

double VortexParams::strength() const {
  if (epsilon > 0) return epsilon;
  return 5 * std::sqrt(2.0) * std::exp(0.5) / (4 * std::numbers::pi);
}

EulerState vortex_initial_condition(const Vec2& x, const VortexParams& params, const EulerLaw& law) {
  const double eps = params.strength();
  const double g = law.gamma;
  const Vec2 d = x - params.center;
  const double bump = std::exp(1 - d.squaredNorm());
  const Vec2 v = params.mach * Vec2(std::cos(params.theta), std::sin(params.theta)) +
                 params.mach * eps * bump * Vec2(-d(1), d(0));
  const double temp = 1 - (g - 1) * eps * eps * params.mach * params.mach / 2 * bump;
  if (!(temp > 0)) throw ConfigError("vortex strength makes the temperature nonpositive");
  const double rho = std::pow(temp, 1 / (g - 1));
  const double e = std::pow(temp, g / (g - 1)) / (g - 1) + 0.5 * rho * v.squaredNorm();
  return {rho, rho * v(0), rho * v(1), e};
}

}  // namespace sbpfr
