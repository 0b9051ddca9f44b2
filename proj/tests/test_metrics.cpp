#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "hyperqd/errors.hpp"
#include "hyperqd/metrics.hpp"

using namespace hyperqd;

namespace {

Magnitudes at(double g_over_kks, double ks) {
  return coeffs(CavityParams::from_ratios(g_over_kks, ks, 0.1)).magnitudes();
}

// Values below come from a separate numpy implementation (einsum over the
// photon/spin tensor) of the same gate, and from hand evaluation of the
// closed forms.
struct Point {
  double g, ks;
  double F_closed, eta_closed;
  double F_sim_balanced, eta_sim_balanced;
  double F_sim_idle_control;  // control |R,a1>, target balanced
};
const Point kPoints[] = {
    {0.5, 0.0, 0.9245562130177515, 0.549840558794391, 0.930771231889858, 0.5355366941015076,
     0.9245562130177515},
    {2.4, 0.0, 0.9998493129425747, 0.9663071047439119, 0.9998499626598127, 0.9662355500658122,
     0.9998493129425744},
    {2.4, 0.3, 0.9592512910171982, 0.6037898978418211, 0.960573230606325, 0.5928781993457044,
     0.959251291017198},
};

}  // namespace

TEST_CASE("fidelity_terms examples") {
  const auto a = fidelity_terms({5.0 / 6.0, 1.0 / 6.0, 0.0, 1.0});
  CHECK(a.zeta1 == doctest::Approx(5.0 / 3.0).epsilon(1e-15));
  CHECK(a.zeta2 == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(a.xi1 == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(std::abs(a.xi2) < 1e-15);
  CHECK(a.m == doctest::Approx(10.0 / 3.0).epsilon(1e-14));
  CHECK(a.n1 == doctest::Approx(26.0 / 9.0).epsilon(1e-14));
  CHECK(a.n2 == doctest::Approx(26.0 / 9.0).epsilon(1e-14));

  const auto id = fidelity_terms(Magnitudes::ideal());
  CHECK(id.zeta1 == 2.0);
  CHECK(id.zeta2 == 0.0);
  CHECK(id.xi1 == 2.0);
  CHECK(id.xi2 == 0.0);

  const auto sym = fidelity_terms({0.7, 0.2, 0.2, 0.7});
  CHECK(std::abs(sym.xi2) < 1e-15);

  const auto odd = fidelity_terms({0.7, 0.2, 0.3, 0.5});
  CHECK(odd.zeta2 == doctest::Approx(-0.3));
  CHECK(odd.xi1 == doctest::Approx(1.7));
  CHECK(odd.xi2 == doctest::Approx(0.1));
  CHECK(odd.m == doctest::Approx(1.19));
  CHECK(odd.n1 == doctest::Approx(0.4263));
  CHECK(odd.n2 == doctest::Approx(0.4263));
}

TEST_CASE("closed forms at the ideal point") {
  CHECK(closed_form_fidelity(Magnitudes::ideal()) == 1.0);
  CHECK(closed_form_efficiency(Magnitudes::ideal()) == 1.0);
  CHECK(closed_form_fidelity(Magnitudes::ideal(), Xi2Reading::Alternative) == 1.0);
}

TEST_CASE("operating points") {
  for (const auto& p : kPoints) {
    CAPTURE(p.g);
    CAPTURE(p.ks);
    const Magnitudes m = at(p.g, p.ks);
    CHECK(closed_form_fidelity(m) == doctest::Approx(p.F_closed).epsilon(1e-12));
    CHECK(closed_form_efficiency(m) == doctest::Approx(p.eta_closed).epsilon(1e-12));
  }
  // quoted figures
  CHECK(std::abs(closed_form_fidelity(at(0.5, 0.0)) - 0.925) <= 0.005);
  CHECK(std::abs(closed_form_efficiency(at(0.5, 0.0)) - 0.550) <= 0.005);
  CHECK(closed_form_fidelity(at(2.4, 0.0)) >= 0.995);
  CHECK(std::abs(closed_form_efficiency(at(2.4, 0.0)) - 0.966) <= 0.005);
  CHECK(std::abs(closed_form_fidelity(at(2.4, 0.3)) - 0.960) <= 0.005);
  CHECK(std::abs(closed_form_efficiency(at(2.4, 0.3)) - 0.603) <= 0.005);

  CHECK(closed_form_efficiency({5.0 / 6.0, 1.0 / 6.0, 0.0, 1.0}) == doctest::Approx(0.5498).epsilon(1e-4));
  CHECK(closed_form_efficiency({0.991394, 0.008606, 0.0, 1.0}) == doctest::Approx(0.966).epsilon(1e-3));
}

TEST_CASE("verbatim and alternative readings differ only through xi2") {
  const Magnitudes odd{0.7, 0.2, 0.3, 0.5};
  CHECK(closed_form_fidelity(odd) == doctest::Approx(0.6896634297793636).epsilon(1e-13));
  CHECK(closed_form_fidelity(odd, Xi2Reading::Alternative) ==
        doctest::Approx(0.6877275324326145).epsilon(1e-13));
  for (const auto& p : kPoints) {
    const Magnitudes m = at(p.g, p.ks);
    CHECK(std::abs(closed_form_fidelity(m) - closed_form_fidelity(m, Xi2Reading::Alternative)) < 1e-12);
  }
}

TEST_CASE("degenerate coefficients") {
  CHECK_THROWS_AS(closed_form_fidelity({0.0, 0.0, 0.0, 0.0}), DegenerateCoefficientsError);
}

TEST_CASE("no-coupling limit") {
  const Magnitudes m = at(0.0, 0.0);
  CHECK(m.r == 0.0);
  CHECK(m.t == 1.0);
  CHECK(m.r0 == 0.0);
  CHECK(m.t0 == 1.0);
  CHECK(closed_form_efficiency(m) == 1.0);
  // zeta1 vanishes, so the verbatim formula gives exactly zero fidelity
  CHECK(fidelity_terms(m).zeta1 == 0.0);
  CHECK(closed_form_fidelity(m) == 0.0);
}

TEST_CASE("eta depends only on the summed squared magnitudes") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    const Magnitudes a{u(rng), u(rng), u(rng), u(rng)};
    const double s = a.r * a.r + a.t * a.t + a.r0 * a.r0 + a.t0 * a.t0;
    // redistribute s over a rotated 4-vector
    const double th = u(rng) * 1.5707963, ph = u(rng) * 1.5707963, ch = u(rng) * 1.5707963;
    const double rad = std::sqrt(s);
    Magnitudes b{rad * std::cos(th), rad * std::sin(th) * std::cos(ph),
                 rad * std::sin(th) * std::sin(ph) * std::cos(ch),
                 rad * std::sin(th) * std::sin(ph) * std::sin(ch)};
    CHECK(closed_form_efficiency(a) == doctest::Approx(closed_form_efficiency(b)).epsilon(1e-13));
  }
}

TEST_CASE("closed forms stay in [0, 1] over physical cavities") {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> lg(-3.0, 1.5);
  for (int k = 0; k < 3000; ++k) {
    CavityParams p;
    p.g = std::pow(10.0, lg(rng));
    p.kappa_s = std::pow(10.0, lg(rng));
    p.gamma = std::pow(10.0, lg(rng));
    const Magnitudes m = coeffs(p).magnitudes();
    const double f = closed_form_fidelity(m), e = closed_form_efficiency(m);
    CHECK(f >= 0.0);
    CHECK(f <= 1.0 + 1e-12);
    CHECK(e >= 0.0);
    CHECK(e <= 1.0 + 1e-12);
  }
}

TEST_CASE("simulated metrics against the independent oracle") {
  const SimMetrics ideal = simulate_metrics(Magnitudes::ideal());
  CHECK(ideal.F == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ideal.eta == doctest::Approx(1.0).epsilon(1e-12));

  for (const auto& p : kPoints) {
    CAPTURE(p.g);
    CAPTURE(p.ks);
    const Magnitudes m = at(p.g, p.ks);
    const SimMetrics s = simulate_metrics(m);
    CHECK(s.F == doctest::Approx(p.F_sim_balanced).epsilon(1e-12));
    CHECK(s.eta == doctest::Approx(p.eta_sim_balanced).epsilon(1e-12));
    CHECK(std::abs(s.F - closed_form_fidelity(m)) < 0.01);

    // the two exact identities between simulation and closed forms
    CHECK(simulate_metrics_basis_average(m).eta == doctest::Approx(p.eta_closed).epsilon(1e-12));
    HyperInput idle = HyperInput::balanced();
    idle.a = PhotonSpec::basis(Pol::R, 0);
    CHECK(simulate_metrics(m, idle).F == doctest::Approx(p.F_sim_idle_control).epsilon(1e-12));
  }

  const SimMetrics odd = simulate_metrics({0.7, 0.2, 0.3, 0.5});
  CHECK(odd.F == doctest::Approx(0.6008188269453596).epsilon(1e-12));
  CHECK(odd.eta == doctest::Approx(0.02016665437499994).epsilon(1e-12));
}

TEST_CASE("basis-average efficiency identity on random coefficients") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 10; ++k) {
    const Magnitudes m{u(rng), u(rng), u(rng), u(rng)};
    CHECK(simulate_metrics_basis_average(m).eta == doctest::Approx(closed_form_efficiency(m)).epsilon(1e-12));
  }
}

TEST_CASE("auxiliary-photon readout adds its own loss") {
  const Magnitudes m = at(0.8, 0.1);
  const SimMetrics direct = simulate_metrics(m);
  const SimMetrics aux = simulate_metrics(m, HyperInput::balanced(), MeasureMethod::AuxPhoton);
  CHECK(aux.eta < direct.eta);
  const SimMetrics ideal = simulate_metrics(Magnitudes::ideal(), HyperInput::balanced(), MeasureMethod::AuxPhoton);
  CHECK(ideal.F == doctest::Approx(1.0));
  CHECK(ideal.eta == doctest::Approx(1.0));
}

TEST_CASE("HyperInput") {
  const auto b = HyperInput::basis(1 + 2 + 8);
  CHECK(b.a.pol[1] == cplx(1.0));
  CHECK(b.a.rails[1] == cplx(1.0));
  CHECK(b.b.pol[0] == cplx(1.0));
  CHECK(b.b.rails[1] == cplx(1.0));
  CHECK_THROWS_AS(HyperInput::basis(16), ValidationError);
}

TEST_CASE("monotonicity along ks = 0") {
  // |r|^2 + |t|^2 is smallest at |t| = 1/2, i.e. g^2 = gamma*kappa/2
  const double g_min = std::sqrt(0.05);
  auto eta = [](double g) { return closed_form_efficiency(at(g, 0.0)); };
  auto fid = [](double g) { return closed_form_fidelity(at(g, 0.0)); };
  double pe = eta(0.2), pf = fid(0.2);
  bool eta_dropped = false;
  for (double g = 0.2 + 1e-4; g <= 3.0; g += 1e-4) {
    const double e = eta(g), f = fid(g);
    CHECK(f >= pf - 1e-15);
    if (g > g_min + 1e-4) CHECK(e >= pe - 1e-15);
    if (g < g_min - 1e-4 && e < pe) eta_dropped = true;
    pe = e;
    pf = f;
  }
  CHECK(eta_dropped);
  CHECK(eta(g_min) < eta(0.2));
  CHECK(eta(g_min) < eta(0.25));
}

TEST_CASE("sweep layout, ordering and determinism") {
  SweepSpec s;
  s.g_steps = 7;
  s.ks_steps = 4;
  s.threads = 3;
  const auto rows = sweep(s);
  REQUIRE(rows.size() == 28);
  CHECK(rows[0].g_over_kks == 0.0);
  CHECK(rows[1].g_over_kks == doctest::Approx(0.5));
  CHECK(rows[6].g_over_kks == 3.0);
  CHECK(rows[7].ks_over_k == doctest::Approx(1.0 / 3.0));
  CHECK(rows[7].g_over_kks == 0.0);
  for (const auto& r : rows) {
    for (double v : {r.F_closed, r.eta_closed, r.F_sim, r.eta_sim}) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0 + 1e-9);
    }
    const MetricsRow one = evaluate_point(r.g_over_kks, r.ks_over_k);
    CHECK(one.F_sim == r.F_sim);
    CHECK(one.eta_closed == r.eta_closed);
  }
  s.threads = 1;
  std::ostringstream a, b;
  write_metrics_csv(a, rows);
  write_metrics_csv(b, sweep(s));
  CHECK(a.str() == b.str());

  // point B as a single-point sweep
  SweepSpec p;
  p.g_lo = p.g_hi = 2.4;
  p.ks_lo = p.ks_hi = 0.0;
  p.g_steps = p.ks_steps = 1;
  const auto pb = sweep(p);
  REQUIRE(pb.size() == 1);
  CHECK(pb[0].F_closed == doctest::Approx(kPoints[1].F_closed));
  CHECK(pb[0].eta_closed == doctest::Approx(kPoints[1].eta_closed));

  SweepSpec bad;
  bad.g_steps = 0;
  CHECK_THROWS_AS(sweep(bad), ValidationError);
  bad = SweepSpec{};
  bad.g_lo = -1.0;
  CHECK_THROWS_AS(sweep(bad), ValidationError);
}

TEST_CASE("CSV round trip") {
  SweepSpec s;
  s.g_steps = 5;
  s.ks_steps = 3;
  const auto rows = sweep(s);
  std::ostringstream os;
  write_metrics_csv(os, rows);
  const std::string text = os.str();
  CHECK(text.rfind(std::string(kMetricsCsvHeader) + "\n", 0) == 0);
  CHECK(text.back() == '\n');
  std::istringstream is(text);
  const auto back = read_metrics_csv(is);
  REQUIRE(back.size() == rows.size());
  std::ostringstream again;
  write_metrics_csv(again, back);
  CHECK(again.str() == text);
  for (std::size_t i = 0; i < rows.size(); ++i)
    CHECK(back[i].F_sim == doctest::Approx(rows[i].F_sim).epsilon(1e-8));

  std::istringstream broken("g_over_kks,ks_over_k\n1,2\n");
  CHECK_THROWS_AS(read_metrics_csv(broken), ValidationError);
  std::istringstream junk(std::string(kMetricsCsvHeader) + "\n1,2,3,4,5,6,x\n");
  CHECK_THROWS_AS(read_metrics_csv(junk), ValidationError);
}
