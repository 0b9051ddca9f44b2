#include "hyperqd/cavity.hpp"

#include <cmath>
#include <string>

#include "hyperqd/errors.hpp"

namespace hyperqd {
namespace {

constexpr double kSingularGuard = 1e-300;
constexpr cplx kI{0.0, 1.0};

cplx guarded(cplx den) {
  if (std::abs(den) < kSingularGuard)
    throw SingularParametersError("cavity coefficient denominator vanishes");
  return den;
}

}  // namespace

void CavityParams::validate() const {
  if (!(g >= 0.0)) throw ValidationError("g must be >= 0");
  if (!(kappa > 0.0)) throw ValidationError("kappa must be > 0");
  if (!(kappa_s >= 0.0)) throw ValidationError("kappa_s must be >= 0");
  if (!(gamma >= 0.0)) throw ValidationError("gamma must be >= 0");
  if (!std::isfinite(omega) || !std::isfinite(omega_c) ||
      !std::isfinite(omega_x))
    throw ValidationError("frequencies must be finite");
}

CavityParams CavityParams::from_ratios(double g_over_kks, double ks_over_k,
                                       double gamma_over_k) {
  if (!(g_over_kks >= 0.0) || !(ks_over_k >= 0.0) || !(gamma_over_k >= 0.0))
    throw ValidationError("cavity ratios must be nonnegative");
  CavityParams p;
  p.kappa = 1.0;
  p.kappa_s = ks_over_k;
  p.g = g_over_kks * (p.kappa + p.kappa_s);
  p.gamma = gamma_over_k;
  return p;
}

Magnitudes ScatterCoeffs::magnitudes() const {
  return {std::abs(r), std::abs(t), std::abs(r0), std::abs(t0)};
}

ReflectTransmit coeffs_hot(const CavityParams& p) {
  p.validate();
  const cplx dipole = kI * (p.omega_x - p.omega) + p.gamma / 2.0;
  const cplx cavity = kI * (p.omega_c - p.omega) + p.kappa + p.kappa_s / 2.0;
  const cplx t = -p.kappa * dipole / guarded(dipole * cavity + p.g * p.g);
  return {1.0 + t, t};
}

ReflectTransmit coeffs_cold(const CavityParams& p) {
  p.validate();
  const cplx detune = kI * (p.omega_c - p.omega);
  const cplx den = guarded(detune + p.kappa + p.kappa_s / 2.0);
  return {(detune + p.kappa_s / 2.0) / den, -p.kappa / den};
}

ScatterCoeffs coeffs(const CavityParams& p) {
  const auto hot = coeffs_hot(p);
  const auto cold = coeffs_cold(p);
  return {hot.r, hot.t, cold.r, cold.t};
}

ScatterCoeffs resonant_coeffs(double g, double kappa, double kappa_s,
                              double gamma) {
  CavityParams p;
  p.g = g;
  p.kappa = kappa;
  p.kappa_s = kappa_s;
  p.gamma = gamma;
  return coeffs(p);
}

std::vector<DetuningPoint> detuning_scan(CavityParams p, double lo, double hi,
                                         int steps) {
  if (steps < 1) throw ValidationError("detuning scan needs >= 1 step");
  if (!std::isfinite(lo) || !std::isfinite(hi))
    throw ValidationError("detuning range must be finite");
  std::vector<DetuningPoint> out;
  out.reserve(static_cast<std::size_t>(steps));
  const double base_c = p.omega_c;
  const double base_x = p.omega_x;
  for (int i = 0; i < steps; ++i) {
    const double d =
        steps == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / (steps - 1);
    p.omega_c = base_c;
    p.omega_x = base_x;
    p.omega = base_c + d;
    out.push_back({d, coeffs(p)});
  }
  return out;
}

}  // namespace hyperqd
