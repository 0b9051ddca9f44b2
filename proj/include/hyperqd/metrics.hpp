#pragma once

// Closed-form fidelity/efficiency of the lossy hyper-CNOT, their simulated
// counterparts, and the coupling/leakage sweep.

#include <iosfwd>
#include <vector>

#include "hyperqd/cavity.hpp"
#include "hyperqd/circuits.hpp"

namespace hyperqd {

struct FidelityTerms {
  double zeta1 = 0.0, zeta2 = 0.0;
  double xi1 = 0.0, xi2 = 0.0;
  double m = 0.0, n1 = 0.0, n2 = 0.0;
};

/// zeta1 = t0 + r - r0 - t, zeta2 = t - r - r0 + t0, xi1 = t0 + r0 + r + t,
/// xi2 = r + t - r0 - t0 (all magnitudes), with the eight-term m and the
/// four-term sums n1, n2.
FidelityTerms fidelity_terms(const Magnitudes& c);

/// How the last denominator term |xi2^2|^2 is read.
enum class Xi2Reading {
  Verbatim,     // xi2^4
  Alternative,  // (xi2 * zeta1)^2
};

/// F = (xi1 zeta1 m)^2 / [4(xi1^2 zeta2^2 + xi1^2 xi2^2) n1 + 4(xi1^2 zeta1^2 + X) n2].
/// Throws DegenerateCoefficientsError on a vanishing denominator.
double closed_form_fidelity(const Magnitudes& c,
                            Xi2Reading reading = Xi2Reading::Verbatim);

/// eta = (|r|^2 + |t|^2 + |t0|^2 + |r0|^2)^4 / 16.
double closed_form_efficiency(const Magnitudes& c);

struct HyperInput {
  PhotonSpec a;
  PhotonSpec b;
  SpinSpec e1 = SpinSpec::plus();
  SpinSpec e2 = SpinSpec::plus();

  /// Every polarization and rail amplitude 1/sqrt2, spins (up+down)/sqrt2.
  static HyperInput balanced();
  /// Computational basis photons; index bits are (a pol, a rail, b pol, b rail).
  static HyperInput basis(int index);
};

struct SimMetrics {
  double F = 0.0;
  double eta = 0.0;
};

/// Runs the hyper-CNOT with lossy scattering. eta is the surviving squared
/// norm; F is the probability-weighted overlap of each normalized branch
/// output with the ideal run's branch of the same measurement record.
SimMetrics simulate_metrics(const Magnitudes& c,
                            const HyperInput& in = HyperInput::balanced(),
                            MeasureMethod measure = MeasureMethod::Direct);

/// Uniform average of simulate_metrics over the 16 basis inputs.
SimMetrics simulate_metrics_basis_average(const Magnitudes& c);

struct MetricsRow {
  double g_over_kks = 0.0;
  double ks_over_k = 0.0;
  double gamma_over_k = 0.1;
  double F_closed = 0.0;
  double eta_closed = 0.0;
  double F_sim = 0.0;
  double eta_sim = 0.0;
  double F_closed_alt = 0.0;  // not part of the CSV
};

/// Metrics at one operating point given as ratios.
MetricsRow evaluate_point(double g_over_kks, double ks_over_k,
                          double gamma_over_k = 0.1);

struct SweepSpec {
  double g_lo = 0.0, g_hi = 3.0;
  int g_steps = 101;
  double ks_lo = 0.0, ks_hi = 1.0;
  int ks_steps = 101;
  double gamma_over_k = 0.1;
  unsigned threads = 0;  // 0: hardware concurrency
};

/// Grid value i of `steps` evenly spaced points in [lo, hi]; a single step
/// sits at lo.
double grid_value(double lo, double hi, int steps, int i);

/// Rows ordered ks outer, g inner. Rows are computed in parallel but the
/// output order is fixed.
std::vector<MetricsRow> sweep(const SweepSpec& spec);

inline constexpr const char* kMetricsCsvHeader =
    "g_over_kks,ks_over_k,gamma_over_k,F_closed,eta_closed,F_sim,eta_sim";

/// Header plus one line per row, 9 significant digits, '\n' terminated.
void write_metrics_csv(std::ostream& os, const std::vector<MetricsRow>& rows);

/// Parses write_metrics_csv output; throws ValidationError on malformed input.
std::vector<MetricsRow> read_metrics_csv(std::istream& is);

}  // namespace hyperqd
