#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "hyperqd/cavity.hpp"
#include "hyperqd/errors.hpp"

using namespace hyperqd;

namespace {

// Independent resonant evaluation, written out by hand.
double oracle_t_resonant(double g, double ks, double gamma) {
  return -(gamma / 2.0) / ((gamma / 2.0) * (1.0 + ks / 2.0) + g * g);
}

CavityParams params(double g, double ks, double gamma, double detune = 0.0) {
  CavityParams p;
  p.g = g;
  p.kappa_s = ks;
  p.gamma = gamma;
  p.omega = detune;
  return p;
}

}  // namespace

TEST_CASE("hot cavity examples") {
  auto [r0, t0] = coeffs_hot(params(0.0, 0.0, 0.1));
  CHECK(std::abs(t0 - cplx(-1.0)) < 1e-15);
  CHECK(std::abs(r0) < 1e-15);

  auto [r1, t1] = coeffs_hot(params(0.5, 0.0, 0.1));
  CHECK(std::abs(t1 - cplx(-1.0 / 6.0)) < 1e-15);
  CHECK(std::abs(r1 - cplx(5.0 / 6.0)) < 1e-15);

  auto [r2, t2] = coeffs_hot(params(3.12, 0.3, 0.1));
  CHECK(t2.real() == doctest::Approx(-0.005106).epsilon(1e-3));
  CHECK(r2.real() == doctest::Approx(0.994894).epsilon(1e-6));
  CHECK(t2.real() == doctest::Approx(oracle_t_resonant(3.12, 0.3, 0.1)).epsilon(1e-14));
}

TEST_CASE("cold cavity examples") {
  auto [r0, t0] = coeffs_cold(params(0.0, 0.0, 0.1));
  CHECK(std::abs(r0) < 1e-15);
  CHECK(std::abs(t0 - cplx(-1.0)) < 1e-15);

  auto c = coeffs_cold(params(1.0, 0.3, 0.1));
  CHECK(c.r.real() == doctest::Approx(0.15 / 1.15).epsilon(1e-14));
  CHECK(c.t.real() == doctest::Approx(-1.0 / 1.15).epsilon(1e-14));
  CHECK(c.r.real() == doctest::Approx(0.130435).epsilon(1e-5));

  for (double d : {1e6, -1e6}) {
    auto far = coeffs_cold(params(0.0, 0.0, 0.1, d));
    CHECK(std::abs(far.r) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(far.t) < 1e-5);
  }
}

TEST_CASE("resonant_coeffs examples") {
  auto a = resonant_coeffs(0.5, 1.0, 0.0, 0.1);
  CHECK(a.r.real() == doctest::Approx(5.0 / 6.0));
  CHECK(a.t.real() == doctest::Approx(-1.0 / 6.0));
  CHECK(std::abs(a.r0) < 1e-15);
  CHECK(a.t0.real() == doctest::Approx(-1.0));

  auto b = resonant_coeffs(2.4, 1.0, 0.0, 0.1);
  CHECK(b.r.real() == doctest::Approx(0.991394).epsilon(1e-6));
  CHECK(b.t.real() == doctest::Approx(-0.008606).epsilon(1e-3));

  auto z = resonant_coeffs(0.0, 1.0, 0.0, 0.1);
  CHECK(std::abs(z.r - z.r0) < 1e-15);
  CHECK(std::abs(z.t - z.t0) < 1e-15);

  for (const auto& c : {a, b, z}) {
    CHECK(std::abs(c.r.imag()) < 1e-15);
    CHECK(std::abs(c.t.imag()) < 1e-15);
    CHECK(std::abs(c.r0.imag()) < 1e-15);
    CHECK(std::abs(c.t0.imag()) < 1e-15);
  }
}

TEST_CASE("from_ratios scales the coupling by kappa + kappa_s") {
  auto p = CavityParams::from_ratios(2.4, 0.3, 0.1);
  CHECK(p.g == doctest::Approx(2.4 * 1.3));
  CHECK(p.kappa_s == doctest::Approx(0.3));
  CHECK(p.kappa == 1.0);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(coeffs_hot(params(-1.0, 0.0, 0.1)), ValidationError);
  CHECK_THROWS_AS(coeffs_hot(params(1.0, -0.1, 0.1)), ValidationError);
  CHECK_THROWS_AS(coeffs_hot(params(1.0, 0.0, -0.1)), ValidationError);
  CavityParams p = params(1.0, 0.0, 0.1);
  p.kappa = 0.0;
  CHECK_THROWS_AS(coeffs_cold(p), ValidationError);
  CHECK_THROWS_AS(detuning_scan(params(1, 0, 0.1), 0.0, 1.0, 0), ValidationError);
}

TEST_CASE("gamma = 0 at exact resonance leaves the hot cavity well defined") {
  // numerator vanishes, denominator is g^2
  auto [r, t] = coeffs_hot(params(1.0, 0.0, 0.0));
  CHECK(std::abs(t) < 1e-15);
  CHECK(std::abs(r - cplx(1.0)) < 1e-15);
}

TEST_CASE("r - t = 1 and passivity over a random log-uniform grid") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-4.0, 1.0);
  std::uniform_int_distribution<int> sign(0, 1);
  for (int k = 0; k < 5000; ++k) {
    auto l = [&] { return std::pow(10.0, u(rng)); };
    CavityParams p = params(l(), l(), l(), (sign(rng) ? 1 : -1) * l());
    p.omega_c = (sign(rng) ? 1 : -1) * 0.1 * l();
    p.omega_x = (sign(rng) ? 1 : -1) * 0.1 * l();
    const auto [r, t] = coeffs_hot(p);
    CHECK(std::abs((r - t) - cplx(1.0)) < 1e-12);
    CHECK(std::norm(r) + std::norm(t) <= 1.0 + 1e-12);
    p.omega_x = p.omega_c;  // cold cavity uses a common resonance
    const auto [r0, t0] = coeffs_cold(p);
    CHECK(std::norm(r0) + std::norm(t0) <= 1.0 + 1e-12);
  }
}

TEST_CASE("detuning scans converge as the step shrinks") {
  const CavityParams p = params(1.0, 0.2, 0.1);
  double max_step[2] = {0.0, 0.0};
  const int steps[2] = {201, 2001};
  for (int s = 0; s < 2; ++s) {
    const auto scan = detuning_scan(p, -3.0, 3.0, steps[s]);
    REQUIRE(scan.size() == static_cast<std::size_t>(steps[s]));
    CHECK(scan.front().detuning == doctest::Approx(-3.0));
    CHECK(scan.back().detuning == doctest::Approx(3.0));
    for (std::size_t i = 1; i < scan.size(); ++i) {
      const auto& a = scan[i - 1].c;
      const auto& b = scan[i].c;
      const double d = std::max({std::abs(a.r - b.r), std::abs(a.t - b.t),
                                 std::abs(a.r0 - b.r0), std::abs(a.t0 - b.t0)});
      max_step[s] = std::max(max_step[s], d);
    }
  }
  CHECK(max_step[1] < max_step[0] / 5.0);
  CHECK(max_step[1] < 0.05);
}

TEST_CASE("ideal limit approached monotonically for g beyond kappa") {
  Magnitudes prev = resonant_coeffs(1.0, 1.0, 0.0, 0.1).magnitudes();
  for (double g = 1.05; g <= 50.0; g += 0.05) {
    const Magnitudes m = resonant_coeffs(g, 1.0, 0.0, 0.1).magnitudes();
    CHECK(m.r >= prev.r);
    CHECK(m.t <= prev.t);
    CHECK(m.r0 == 0.0);
    CHECK(m.t0 == doctest::Approx(1.0));
    prev = m;
  }
  CHECK(prev.r > 0.9999);
  CHECK(prev.t < 1e-4);
}
