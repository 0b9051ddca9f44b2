#include "hyperqd/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <ostream>
#include <random>
#include <sstream>

#include "hyperqd/cavity.hpp"
#include "hyperqd/circuits.hpp"
#include "hyperqd/metrics.hpp"
#include "hyperqd/reference.hpp"
#include "hyperqd/scattering.hpp"

namespace hyperqd {
namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

double max_abs_diff(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  if (a.size() != b.size()) return INFINITY;
  return (a - b).cwiseAbs().maxCoeff();
}

// Rotates the global phase so the largest amplitude is real positive.
Eigen::VectorXcd phase_aligned(const Eigen::VectorXcd& v) {
  Eigen::Index k = 0;
  v.cwiseAbs().maxCoeff(&k);
  if (std::abs(v[k]) == 0.0) return v;
  return v * (std::abs(v[k]) / v[k]);
}

PhotonSpec spec_of(const std::array<double, 2>& pol, const std::array<double, 2>& rails) {
  PhotonSpec s;
  s.pol = {pol[0], pol[1]};
  s.rails = {rails[0], rails[1]};
  return s;
}

// index into a two-photon (a, b) vector
int ab(int pa, int ra, int pb, int rb) { return pa + 2 * ra + 4 * (pb + 2 * rb); }

struct PointCheck {
  const char* label;
  double g, ks, gamma;
  double F_lo, F_hi, eta_lo, eta_hi;
};

CriterionResult operating_point(int id, const PointCheck& p, bool timed) {
  CriterionResult c;
  c.id = id;
  c.name = fmt("operating point %s (g/(k+ks)=%g, ks/k=%g, gamma/k=%g)", p.label, p.g,
               p.ks, p.gamma);
  double F = 0.0, eta = 0.0;
  const int reps = 1000;
  const auto t0 = Clock::now();
  for (int k = 0; k < reps; ++k) {
    const auto m = coeffs(CavityParams::from_ratios(p.g, p.ks, p.gamma)).magnitudes();
    F = closed_form_fidelity(m);
    eta = closed_form_efficiency(m);
  }
  const double per = ms_since(t0) / reps;
  c.millis = per;
  const bool fok = F >= p.F_lo && F <= p.F_hi;
  const bool eok = eta >= p.eta_lo && eta <= p.eta_hi;
  c.details.push_back(fmt("F_closed = %.10f, required [%.3f, %.3f] %s", F, p.F_lo, p.F_hi,
                          fok ? "ok" : "OUT"));
  c.details.push_back(fmt("eta_closed = %.10f, required [%.3f, %.3f] %s", eta, p.eta_lo,
                          p.eta_hi, eok ? "ok" : "OUT"));
  bool tok = true;
  if (timed) {
    tok = per < 1.0;
    c.details.push_back(fmt("evaluation time %.6f ms (limit 1 ms) %s", per, tok ? "ok" : "SLOW"));
  }
  c.pass = fok && eok && tok;
  return c;
}

// Branch states agree with each other and with `target` up to global phase.
struct BranchCheck {
  double worst_target = 0.0;
  double worst_pair = 0.0;
  double total_prob = 0.0;
};

BranchCheck check_branches(const GateResult& g, const Eigen::VectorXcd& target) {
  BranchCheck bc;
  const Eigen::VectorXcd t = phase_aligned(target.normalized());
  std::vector<Eigen::VectorXcd> al;
  for (const auto& b : g.branches) {
    double joint = 1.0;
    for (const auto& o : b.outcomes) joint *= o.probability;
    bc.total_prob += joint;
    al.push_back(phase_aligned(b.final_state.amps()));
    bc.worst_target = std::max(bc.worst_target, max_abs_diff(al.back(), t));
  }
  for (std::size_t i = 1; i < al.size(); ++i)
    bc.worst_pair = std::max(bc.worst_pair, max_abs_diff(al[i], al[0]));
  return bc;
}

}  // namespace

bool AcceptanceReport::all_pass() const {
  return std::all_of(criteria.begin(), criteria.end(),
                     [](const CriterionResult& c) { return c.pass; });
}

CriterionResult criterion_operating_point_a() {
  return operating_point(1, {"A", 0.5, 0.0, 0.1, 0.920, 0.930, 0.545, 0.555}, true);
}

CriterionResult criterion_operating_point_b() {
  return operating_point(2, {"B", 2.4, 0.0, 0.1, 0.995, 1.000, 0.961, 0.971}, false);
}

CriterionResult criterion_operating_point_c() {
  return operating_point(3, {"C", 2.4, 0.3, 0.1, 0.955, 0.965, 0.598, 0.608}, false);
}

CriterionResult criterion_hyper_truth_table() {
  CriterionResult c;
  c.id = 4;
  c.name = "ideal hyper-CNOT truth table (16 two-DOF basis inputs)";
  const auto t0 = Clock::now();
  double worst_t = 0.0, worst_p = 0.0, worst_prob = 0.0;
  int mismatched = 0;
  for (int k = 0; k < 16; ++k) {
    const int pa = k & 1, ra = (k >> 1) & 1, pb = (k >> 2) & 1, rb = (k >> 3) & 1;
    const auto in = HyperInput::basis(k);
    const auto g = hyper_cnot(in.a, in.b, in.e1, in.e2);
    Eigen::VectorXcd target = Eigen::VectorXcd::Zero(16);
    target[ab(pa, ra, pb ^ pa, rb ^ ra)] = 1.0;
    const auto bc = check_branches(g, target);
    worst_t = std::max(worst_t, bc.worst_target);
    worst_p = std::max(worst_p, bc.worst_pair);
    worst_prob = std::max({worst_prob, std::abs(bc.total_prob - 1.0),
                           std::abs(g.survival - 1.0)});
    if (bc.worst_target > 1e-10 || g.branches.size() != 4) ++mismatched;
  }
  c.millis = ms_since(t0);
  c.details.push_back(fmt("inputs not mapped to CNOT x CNOT: %d of 16", mismatched));
  c.details.push_back(fmt("max deviation from target %.3g, between branches %.3g (limit 1e-10)",
                          worst_t, worst_p));
  c.details.push_back(fmt("max |total branch probability - 1| = %.3g (limit 1e-9)", worst_prob));
  c.details.push_back(fmt("runtime %.3f ms (limit 1000 ms)", c.millis));
  c.pass = mismatched == 0 && worst_p <= 1e-10 && worst_prob <= 1e-9 && c.millis < 1000.0;
  return c;
}

CriterionResult criterion_spatial_truth_table() {
  CriterionResult c;
  c.id = 5;
  c.name = "ideal spatial-CNOT truth table (4 rail-basis inputs)";
  const auto t0 = Clock::now();
  const reference::TestCoefficients tc;
  int wrong = 0;
  double worst = 0.0, worst_ratio = 0.0;
  double leak = 0.0;  // amplitude on flipped polarizations, must be exactly 0
  for (int ra = 0; ra < 2; ++ra)
    for (int rb = 0; rb < 2; ++rb) {
      // basis polarizations: exact label check
      for (int pol = 0; pol < 4; ++pol) {
        const int pa = pol & 1, pb = pol >> 1;
        const auto g = spatial_cnot(PhotonSpec::basis(Pol(pa), ra), PhotonSpec::basis(Pol(pb), rb),
                                    SpinSpec::plus());
        for (const auto& b : g.branches)
          for (int i = 0; i < 16; ++i) {
            const int qa = i & 1, qb = (i >> 2) & 1;
            if (qa != pa || qb != pb) leak = std::max(leak, std::abs(b.final_state[i]));
          }
        Eigen::VectorXcd target = Eigen::VectorXcd::Zero(16);
        target[ab(pa, ra, pb, rb ^ ra)] = 1.0;
        const auto bc = check_branches(g, target);
        if (bc.worst_target > 1e-10) ++wrong;
        worst = std::max(worst, bc.worst_target);
      }
      // superposed polarizations: amplitude ratios preserved
      const auto g = spatial_cnot(spec_of(tc.alpha, ra ? std::array<double, 2>{0, 1}
                                                       : std::array<double, 2>{1, 0}),
                                  spec_of(tc.beta, rb ? std::array<double, 2>{0, 1}
                                                      : std::array<double, 2>{1, 0}),
                                  SpinSpec::plus());
      for (const auto& b : g.branches) {
        const Eigen::VectorXcd v = phase_aligned(b.final_state.amps());
        for (int pa = 0; pa < 2; ++pa)
          for (int pb = 0; pb < 2; ++pb) {
            const cplx amp = v[ab(pa, ra, pb, rb ^ ra)];
            worst_ratio = std::max(worst_ratio, std::abs(amp - tc.alpha[pa] * tc.beta[pb]));
          }
      }
    }
  c.millis = ms_since(t0);
  c.details.push_back(fmt("basis inputs not mapped to rail CNOT: %d of 16 (4 rail x 4 pol)", wrong));
  c.details.push_back(fmt("max deviation from target %.3g", worst));
  c.details.push_back(fmt("amplitude on flipped polarization labels: %.17g (must be exactly 0)", leak));
  c.details.push_back(fmt("superposed polarization amplitudes: max |out - in| = %.3g", worst_ratio));
  c.pass = wrong == 0 && leak == 0.0 && worst_ratio <= 1e-14;
  return c;
}

CriterionResult criterion_stage_regressions() {
  CriterionResult c;
  c.id = 6;
  c.name = "intermediate-state regressions against hand-expanded states";
  const auto t0 = Clock::now();
  const reference::TestCoefficients tc;
  const PhotonSpec a = spec_of(tc.alpha, tc.gamma), b = spec_of(tc.beta, tc.delta);
  bool ok = true;
  auto check = [&](const char* what, const GateResult& g, const char* stage,
                   const Eigen::VectorXcd& ref) {
    const StateVector* s = g.stage(stage);
    const double d = s ? max_abs_diff(s->amps(), ref) : INFINITY;
    const bool good = d <= 1e-10;
    ok = ok && good;
    c.details.push_back(fmt("%-34s max elementwise diff %.3g %s", what, d, good ? "ok" : "FAIL"));
  };
  const auto sp = spatial_cnot(a, b, SpinSpec::plus());
  check("spatial: after control block", sp, kStageControlBlock,
        reference::spatial_after_control_block(tc));
  check("spatial: after target block", sp, kStageTargetBlock,
        reference::spatial_after_target_block(tc));
  check("spatial: before measurement", sp, kStagePreMeasure, reference::spatial_pre_measure(tc));
  const auto hy = hyper_cnot(a, b);
  check("hyper: after polarization block", hy, kStagePolBlock,
        reference::hyper_after_pol_block(tc));
  check("hyper: after spatial-mode block", hy, kStageModeBlock,
        reference::hyper_after_mode_block(tc));
  check("hyper: after target blocks", hy, kStageTargetBlocks,
        reference::hyper_after_target_blocks(tc));
  check("hyper: before measurement", hy, kStagePreMeasure, reference::hyper_pre_measure(tc));

  const auto bs = check_branches(sp, reference::spatial_output(tc));
  const auto bh = check_branches(hy, reference::hyper_output(tc));
  const bool outs = bs.worst_target <= 1e-10 && bh.worst_target <= 1e-10;
  ok = ok && outs;
  c.details.push_back(fmt("feed-forward outputs: spatial %.3g, hyper %.3g %s", bs.worst_target,
                          bh.worst_target, outs ? "ok" : "FAIL"));
  c.millis = ms_since(t0);
  c.pass = ok;
  return c;
}

CriterionResult criterion_consistency(std::vector<std::string>* notes) {
  CriterionResult c;
  c.id = 7;
  c.name = "closed form vs simulation (balanced input)";
  const auto t0 = Clock::now();

  std::mt19937_64 rng(20240607);
  std::uniform_real_distribution<double> ug(0.05, 3.0), uk(0.0, 1.0);
  double worst_eta = 0.0, worst_avg = 0.0, worst_fid = 0.0;
  for (int k = 0; k < 20; ++k) {
    const double g = ug(rng), ks = uk(rng);
    const auto m = coeffs(CavityParams::from_ratios(g, ks, 0.1)).magnitudes();
    const double eta = closed_form_efficiency(m);
    worst_eta = std::max(worst_eta, std::abs(simulate_metrics(m).eta - eta));
    worst_avg = std::max(worst_avg, std::abs(simulate_metrics_basis_average(m).eta - eta));
    HyperInput ctl = HyperInput::balanced();
    ctl.a = PhotonSpec::basis(Pol::R, 0);
    worst_fid = std::max(worst_fid, std::abs(simulate_metrics(m, ctl).F - closed_form_fidelity(m)));
  }
  const bool eta_ok = worst_eta <= 1e-6;
  c.details.push_back(fmt("eta: max |eta_sim - eta_closed| over 20 random points = %.3g (limit 1e-6) %s",
                          worst_eta, eta_ok ? "ok" : "FAIL"));

  bool F_ok = true;
  const struct {
    const char* label;
    double g, ks;
  } pts[] = {{"A", 0.5, 0.0}, {"B", 2.4, 0.0}, {"C", 2.4, 0.3}};
  for (const auto& p : pts) {
    const auto m = coeffs(CavityParams::from_ratios(p.g, p.ks, 0.1)).magnitudes();
    const auto s = simulate_metrics(m);
    const double Fv = closed_form_fidelity(m), Fa = closed_form_fidelity(m, Xi2Reading::Alternative);
    const bool ok = std::abs(s.F - Fv) <= 0.01;
    F_ok = F_ok && ok;
    c.details.push_back(fmt("point %s: F_sim %.6f, F_closed verbatim %.6f, alternative %.6f, "
                            "|diff| %.4f %s; eta_sim %.6f vs eta_closed %.6f",
                            p.label, s.F, Fv, Fa, std::abs(s.F - Fv), ok ? "ok" : "FAIL", s.eta,
                            closed_form_efficiency(m)));
  }
  c.details.push_back(std::string("F within 0.01 at A, B, C: ") + (F_ok ? "ok" : "FAIL"));
  if (!eta_ok)
    c.details.push_back(
        "eta_closed is not the survival of the balanced input under these scattering rules; "
        "see README");
  if (notes) {
    notes->push_back(fmt("eta_closed vs eta_sim averaged over the 16 basis inputs: max diff %.3g",
                         worst_avg));
    notes->push_back(fmt("F_closed (verbatim) vs F_sim for control |R,a1>, balanced target: "
                         "max diff %.3g", worst_fid));
  }
  c.millis = ms_since(t0);
  c.pass = eta_ok && F_ok;
  return c;
}

CriterionResult criterion_physicality(std::vector<std::string>* notes) {
  CriterionResult c;
  c.id = 8;
  c.name = "physicality of scattering, auxiliary-photon readout, single-photon echo";
  const auto t0 = Clock::now();
  bool ok = true;

  const ScatterMatrix ideal = scatter_operator(ScatterMode::ideal());
  const double unit = (ideal.transpose() * ideal - ScatterMatrix::Identity()).cwiseAbs().maxCoeff();
  ok = ok && unit <= 1e-12;
  c.details.push_back(fmt("ideal operator: max |O^T O - I| = %.3g (limit 1e-12)", unit));

  // Resonant cavities over a wide parameter range. The magnitude-only rules
  // are only used on resonance; off resonance they are reported separately.
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ug(0.0, 5.0), uk(0.0, 2.0), uy(0.0, 1.0), ud(-3.0, 3.0);
  int contractions = 0, total = 0;
  double flip = ideal.topRightCorner<4, 4>().cwiseAbs().maxCoeff() +
                ideal.bottomLeftCorner<4, 4>().cwiseAbs().maxCoeff();
  double top_sv = 0.0;
  for (int k = 0; k < 500; ++k, ++total) {
    const CavityParams p = CavityParams::from_ratios(ug(rng), uk(rng), uy(rng));
    const ScatterMatrix o = scatter_operator(ScatterMode::from_coeffs(coeffs(p)));
    contractions += is_physical(o) ? 1 : 0;
    top_sv = std::max(top_sv, Eigen::JacobiSVD<ScatterMatrix>(o).singularValues()[0]);
    flip = std::max(flip, o.topRightCorner<4, 4>().cwiseAbs().maxCoeff() +
                              o.bottomLeftCorner<4, 4>().cwiseAbs().maxCoeff());
  }
  int detuned_bad = 0;
  double detuned_sv = 0.0;
  for (int k = 0; k < 500; ++k) {
    CavityParams p = CavityParams::from_ratios(ug(rng), uk(rng), uy(rng));
    p.omega = ud(rng);
    const ScatterMatrix o = scatter_operator(ScatterMode::from_coeffs(coeffs(p)));
    detuned_bad += is_physical(o) ? 0 : 1;
    detuned_sv = std::max(detuned_sv, Eigen::JacobiSVD<ScatterMatrix>(o).singularValues()[0]);
    flip = std::max(flip, o.topRightCorner<4, 4>().cwiseAbs().maxCoeff() +
                              o.bottomLeftCorner<4, 4>().cwiseAbs().maxCoeff());
  }
  ok = ok && contractions == total && flip == 0.0;
  c.details.push_back(fmt("resonant lossy operators that are contractions: %d of %d "
                          "(largest singular value 1%+.2g)", contractions, total, top_sv - 1.0));
  if (notes)
    notes->push_back(fmt("detuned cavities reduced to magnitudes: %d of 500 operators exceed unit "
                         "singular value (largest %.4f); these rules are resonant-only",
                         detuned_bad, detuned_sv));
  c.details.push_back(fmt("largest spin-flipping entry: %.3g (must be 0)", flip));

  // auxiliary photon |R, i1> against a definite spin
  const SystemLayout spin_only({}, {"e"});
  for (Spin s : {Spin::Up, Spin::Down}) {
    const StateVector in = product_state(spin_only, {}, {SpinSpec::basis(s)});
    const StateVector out = aux_photon_scatter(in, "e");
    Eigen::VectorXcd want = Eigen::VectorXcd::Zero(8);
    // aux digit pol + 2*rail, spin digit weight 4
    if (s == Spin::Up) want[0 + 2 * 1 + 0] = -1.0; else want[1 + 2 * 0 + 4] = 1.0;
    const double d = max_abs_diff(out.amps(), want);
    const auto br = measure_spin_via_aux_photon_branches(in, "e");
    const bool good = d == 0.0 && br.size() == 1 && br[0].reading == s && br[0].probability == 1.0;
    ok = ok && good;
    c.details.push_back(fmt("aux photon, spin %s: %s, reading %s with p=%.3g %s", to_string(s),
                            s == Spin::Up ? "-|R,i2>" : "|L,i1>",
                            br.empty() ? "-" : to_string(br[0].reading),
                            br.empty() ? 0.0 : br[0].probability, good ? "ok" : "FAIL"));
  }
  {
    const StateVector in = product_state(SystemLayout({}, {"e"}), {}, {SpinSpec::plus()});
    const auto br = measure_spin_via_aux_photon_branches(in, "e");
    bool good = br.size() == 2;
    for (const auto& b : br) good = good && std::abs(b.probability - 0.5) < 1e-15;
    ok = ok && good;
    c.details.push_back(fmt("aux photon, spin (up+down)/sqrt2: each detector p=0.5 %s",
                            good ? "ok" : "FAIL"));
  }
  {
    const StateVector in = product_state(spin_only, {}, {SpinSpec::plus()});
    const StateVector out = spin_echo_composite(in, "e");
    Eigen::VectorXcd want = Eigen::VectorXcd::Zero(8);
    // (R+L)|i2>(up-down)/2 with the probe digit pol + 2*rail
    want[0 + 2] = 0.5;
    want[1 + 2] = 0.5;
    want[0 + 2 + 4] = -0.5;
    want[1 + 2 + 4] = -0.5;
    const double d = max_abs_diff(out.amps(), want);
    const bool good = d <= 1e-15;
    ok = ok && good;
    c.details.push_back(fmt("single-photon echo: (R+L)|i1>(up+down)/2 -> (R+L)|i2>(up-down)/2, "
                            "max diff %.3g %s", d, good ? "ok" : "FAIL"));
  }
  c.millis = ms_since(t0);
  c.pass = ok;
  return c;
}

CriterionResult criterion_sweep() {
  CriterionResult c;
  c.id = 9;
  c.name = "coupling/leakage sweep (101 x 101)";
  SweepSpec spec;  // defaults: [0,3] x [0,1], 101 x 101, gamma 0.1
  const auto t0 = Clock::now();
  const auto rows = sweep(spec);
  const double ms = ms_since(t0);
  c.millis = ms;
  const bool fast = ms < 10000.0;
  c.details.push_back(fmt("%zu rows in %.1f ms (limit 10000 ms) %s", rows.size(), ms,
                          fast ? "ok" : "SLOW"));

  int fbreak = 0, ebreak = 0;
  double prevF = -1.0, prevE = -1.0;
  for (int i = 0; i < spec.g_steps; ++i) {
    const auto& r = rows[static_cast<std::size_t>(i)];  // ks = 0 row
    if (r.g_over_kks < 0.2) continue;
    if (prevF >= 0.0 && r.F_closed < prevF - 1e-12) ++fbreak;
    if (prevE >= 0.0 && r.eta_closed < prevE - 1e-12) ++ebreak;
    prevF = r.F_closed;
    prevE = r.eta_closed;
  }
  const bool mono = fbreak == 0 && ebreak == 0 && rows.size() == 101u * 101u;
  c.details.push_back(fmt("ks = 0, g ratio >= 0.2: F decreases %d times, eta decreases %d times %s",
                          fbreak, ebreak, mono ? "ok" : "FAIL"));

  std::ostringstream a, b;
  write_metrics_csv(a, rows);
  SweepSpec serial = spec;
  serial.threads = 1;
  write_metrics_csv(b, sweep(serial));
  const bool same = a.str() == b.str();
  c.details.push_back(fmt("CSV of two runs (%zu bytes) byte-identical: %s", a.str().size(),
                          same ? "yes" : "NO"));
  c.pass = fast && mono && same;
  return c;
}

AcceptanceReport run_acceptance() {
  AcceptanceReport r;
  r.criteria.push_back(criterion_operating_point_a());
  r.criteria.push_back(criterion_operating_point_b());
  r.criteria.push_back(criterion_operating_point_c());
  r.criteria.push_back(criterion_hyper_truth_table());
  r.criteria.push_back(criterion_spatial_truth_table());
  r.criteria.push_back(criterion_stage_regressions());
  r.criteria.push_back(criterion_consistency(&r.notes));
  r.criteria.push_back(criterion_physicality(&r.notes));
  r.criteria.push_back(criterion_sweep());
  return r;
}

void print_criterion(std::ostream& os, const CriterionResult& c) {
  os << (c.pass ? "PASS" : "FAIL") << "  criterion " << c.id << ": " << c.name << '\n';
  for (const auto& d : c.details) os << "        " << d << '\n';
}

void print_report(std::ostream& os, const AcceptanceReport& r) {
  for (const auto& c : r.criteria) print_criterion(os, c);
  for (const auto& n : r.notes) os << "note    " << n << '\n';
  int passed = 0;
  for (const auto& c : r.criteria) passed += c.pass ? 1 : 0;
  os << passed << " of " << r.criteria.size() << " criteria passed\n";
}

}  // namespace hyperqd
