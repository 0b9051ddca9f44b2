#pragma once

// Steady-state input-output coefficients of a charged quantum dot in a
// double-sided micropillar cavity. All rates are in units of the cavity
// field decay rate kappa; frequencies are offsets from the common resonance.

#include <complex>
#include <vector>

namespace hyperqd {

using cplx = std::complex<double>;

struct CavityParams {
  double g = 0.0;        // X^- / cavity coupling
  double kappa = 1.0;    // cavity field decay (normalization unit)
  double kappa_s = 0.0;  // side leakage
  double gamma = 0.1;    // X^- decay
  double omega = 0.0;    // probe frequency offset
  double omega_c = 0.0;  // cavity mode offset
  double omega_x = 0.0;  // X^- transition offset

  /// Throws ValidationError unless g >= 0, kappa > 0, kappa_s >= 0, gamma >= 0.
  void validate() const;

  /// Builds resonant parameters from the dimensionless ratios used for
  /// operating points: g/(kappa+kappa_s), kappa_s/kappa and gamma/kappa.
  static CavityParams from_ratios(double g_over_kks, double ks_over_k,
                                  double gamma_over_k);
};

struct ReflectTransmit {
  cplx r;
  cplx t;
};

/// |r|, |t|, |r0|, |t0|: the only quantities the lossy scattering rules use.
struct Magnitudes {
  double r = 1.0;
  double t = 0.0;
  double r0 = 0.0;
  double t0 = 1.0;

  static constexpr Magnitudes ideal() { return {1.0, 0.0, 0.0, 1.0}; }
  bool operator==(const Magnitudes&) const = default;
};

struct ScatterCoeffs {
  cplx r;
  cplx t;
  cplx r0;
  cplx t0;

  Magnitudes magnitudes() const;
};

/// Coupled ("hot") cavity: t = -kappa*A / (A*C + g^2), r = 1 + t with
/// A = i(omega_x - omega) + gamma/2 and C = i(omega_c - omega) + kappa + kappa_s/2.
ReflectTransmit coeffs_hot(const CavityParams& p);

/// Uncoupled ("cold") cavity, g = 0 with omega_0 = omega_c.
ReflectTransmit coeffs_cold(const CavityParams& p);

/// Both coefficient pairs at omega = omega_c = omega_x.
ScatterCoeffs resonant_coeffs(double g, double kappa, double kappa_s,
                              double gamma);

/// Hot and cold coefficients of `p` together.
ScatterCoeffs coeffs(const CavityParams& p);

struct DetuningPoint {
  double detuning;  // omega - omega_0
  ScatterCoeffs c;
};

/// Evaluates the coefficients for probe detunings lo..hi (inclusive, `steps`
/// evenly spaced points), keeping the cavity and X^- on common resonance.
std::vector<DetuningPoint> detuning_scan(CavityParams p, double lo, double hi,
                                         int steps);

}  // namespace hyperqd
