#include "hyperqd/metrics.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include "hyperqd/errors.hpp"

namespace hyperqd {
namespace {

double sq(double x) { return x * x; }

bool same_record(const std::vector<Outcome>& a, const std::vector<Outcome>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t k = 0; k < a.size(); ++k)
    if (a[k].spin != b[k].spin || a[k].value != b[k].value) return false;
  return true;
}

GateResult run_hyper(const HyperInput& in, const ScatterMode& mode,
                     MeasureMethod measure) {
  GateOptions o;
  o.mode = mode;
  o.measure = measure;
  return hyper_cnot(in.a, in.b, in.e1, in.e2, o);
}

SimMetrics compare(const GateResult& ideal, const GateResult& lossy) {
  SimMetrics s;
  s.eta = lossy.survival;
  for (const auto& lb : lossy.branches) {
    const GateBranch* target = nullptr;
    for (const auto& ib : ideal.branches)
      if (same_record(ib.outcomes, lb.outcomes)) target = &ib;
    if (!target) continue;  // record impossible in the ideal gate: zero overlap
    s.F += lb.probability * fidelity(target->final_state, lb.final_state);
  }
  return s;
}

}  // namespace

FidelityTerms fidelity_terms(const Magnitudes& c) {
  const double r = c.r, t = c.t, r0 = c.r0, t0 = c.t0;
  FidelityTerms f;
  f.zeta1 = t0 + r - r0 - t;
  f.zeta2 = t - r - r0 + t0;
  f.xi1 = t0 + r0 + r + t;
  f.xi2 = r + t - r0 - t0;
  const double hot = r + t, cold = t0 + r0;
  f.m = cold * t0 - hot * r0 + cold * r - hot * t - cold * r0 + hot * t0 -
        cold * t + hot * r;
  f.n1 = sq(hot * t0 - cold * r0) + sq(hot * r - cold * t) +
         sq(hot * r0 - cold * t0) + sq(hot * t - cold * r);
  f.n2 = sq(cold * t0 - hot * r0) + sq(cold * r - hot * t) +
         sq(cold * r0 - hot * t0) + sq(cold * t - hot * r);
  return f;
}

double closed_form_fidelity(const Magnitudes& c, Xi2Reading reading) {
  const FidelityTerms f = fidelity_terms(c);
  const double last = reading == Xi2Reading::Verbatim ? sq(sq(f.xi2))
                                                      : sq(f.xi2 * f.zeta1);
  const double den = 4.0 * (sq(f.xi1 * f.zeta2) + sq(f.xi1 * f.xi2)) * f.n1 +
                     4.0 * (sq(f.xi1 * f.zeta1) + last) * f.n2;
  if (!(std::abs(den) > 1e-300))
    throw DegenerateCoefficientsError("fidelity denominator vanishes");
  return sq(f.xi1 * f.zeta1 * f.m) / den;
}

double closed_form_efficiency(const Magnitudes& c) {
  const double s = sq(c.r) + sq(c.t) + sq(c.t0) + sq(c.r0);
  return sq(sq(s)) / 16.0;
}

HyperInput HyperInput::balanced() {
  const double h = 1.0 / std::sqrt(2.0);
  HyperInput in;
  in.a.pol = {h, h};
  in.a.rails = {h, h};
  in.b = in.a;
  return in;
}

HyperInput HyperInput::basis(int index) {
  if (index < 0 || index > 15) throw ValidationError("basis input index must be in [0, 16)");
  HyperInput in;
  in.a = PhotonSpec::basis((index & 1) ? Pol::L : Pol::R, (index >> 1) & 1);
  in.b = PhotonSpec::basis((index & 4) ? Pol::L : Pol::R, (index >> 3) & 1);
  return in;
}

SimMetrics simulate_metrics(const Magnitudes& c, const HyperInput& in,
                            MeasureMethod measure) {
  return compare(run_hyper(in, ScatterMode::ideal(), measure),
                 run_hyper(in, ScatterMode::lossy(c), measure));
}

SimMetrics simulate_metrics_basis_average(const Magnitudes& c) {
  SimMetrics avg;
  for (int k = 0; k < 16; ++k) {
    const SimMetrics s = simulate_metrics(c, HyperInput::basis(k));
    avg.F += s.F / 16.0;
    avg.eta += s.eta / 16.0;
  }
  return avg;
}

MetricsRow evaluate_point(double g_over_kks, double ks_over_k, double gamma_over_k) {
  static const GateResult ideal =
      run_hyper(HyperInput::balanced(), ScatterMode::ideal(), MeasureMethod::Direct);
  const auto p = CavityParams::from_ratios(g_over_kks, ks_over_k, gamma_over_k);
  const Magnitudes m = coeffs(p).magnitudes();
  MetricsRow row;
  row.g_over_kks = g_over_kks;
  row.ks_over_k = ks_over_k;
  row.gamma_over_k = gamma_over_k;
  row.F_closed = closed_form_fidelity(m);
  row.F_closed_alt = closed_form_fidelity(m, Xi2Reading::Alternative);
  row.eta_closed = closed_form_efficiency(m);
  const SimMetrics s = compare(
      ideal, run_hyper(HyperInput::balanced(), ScatterMode::lossy(m), MeasureMethod::Direct));
  row.F_sim = s.F;
  row.eta_sim = s.eta;
  return row;
}

double grid_value(double lo, double hi, int steps, int i) {
  if (steps == 1) return lo;
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1);
}

std::vector<MetricsRow> sweep(const SweepSpec& spec) {
  auto range_ok = [](double lo, double hi) {
    return std::isfinite(lo) && std::isfinite(hi) && lo >= 0.0 && hi >= lo;
  };
  if (!range_ok(spec.g_lo, spec.g_hi) || !range_ok(spec.ks_lo, spec.ks_hi))
    throw ValidationError("sweep ranges must be finite, nonnegative and ordered");
  if (spec.g_steps < 1 || spec.ks_steps < 1)
    throw ValidationError("sweep needs at least one step per axis");
  if (!(spec.gamma_over_k >= 0.0)) throw ValidationError("gamma/kappa must be >= 0");

  const std::size_t n = static_cast<std::size_t>(spec.g_steps) *
                        static_cast<std::size_t>(spec.ks_steps);
  std::vector<MetricsRow> rows(n);
  evaluate_point(0.0, 0.0, spec.gamma_over_k);  // build shared state up front

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < n;) {
      const int ik = static_cast<int>(k / static_cast<std::size_t>(spec.g_steps));
      const int ig = static_cast<int>(k % static_cast<std::size_t>(spec.g_steps));
      rows[k] = evaluate_point(grid_value(spec.g_lo, spec.g_hi, spec.g_steps, ig),
                               grid_value(spec.ks_lo, spec.ks_hi, spec.ks_steps, ik),
                               spec.gamma_over_k);
    }
  };
  unsigned threads = spec.threads ? spec.threads : std::thread::hardware_concurrency();
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < threads; ++i) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return rows;
}

}  // namespace hyperqd
