#include "hyperqd/scattering.hpp"

#include <cmath>

#include "hyperqd/errors.hpp"

namespace hyperqd {
namespace {

constexpr int R = 0, L = 1;
constexpr int i1 = 0, i2 = 1;
constexpr int up = 0, dn = 1;

constexpr int idx(int pol, int port, int spin) { return pol + 2 * port + 4 * spin; }

void check_unit(double v, const char* name) {
  if (!std::isfinite(v) || v < 0.0 || v > 1.0)
    throw ValidationError(std::string("scattering magnitude |") + name +
                          "| must lie in [0, 1]");
}

}  // namespace

ScatterMode ScatterMode::ideal() { return ScatterMode(true, Magnitudes::ideal()); }

ScatterMode ScatterMode::lossy(const Magnitudes& m) {
  check_unit(m.r, "r");
  check_unit(m.t, "t");
  check_unit(m.r0, "r0");
  check_unit(m.t0, "t0");
  return ScatterMode(false, m);
}

ScatterMode ScatterMode::from_coeffs(const ScatterCoeffs& c) {
  return lossy(c.magnitudes());
}

ScatterMatrix scatter_operator(const ScatterMode& mode) {
  const auto& m = mode.magnitudes();
  ScatterMatrix o = ScatterMatrix::Zero();
  auto rule = [&](int src, double c1, int dst1, double c2, int dst2) {
    o(dst1, src) += c1;
    o(dst2, src) += c2;
  };
  // coupled: Sz = +1 inputs see spin up, Sz = -1 inputs see spin down
  rule(idx(R, i2, up), m.r, idx(L, i2, up), -m.t, idx(R, i1, up));
  rule(idx(L, i1, up), m.r, idx(R, i1, up), -m.t, idx(L, i2, up));
  rule(idx(R, i1, dn), m.r, idx(L, i1, dn), -m.t, idx(R, i2, dn));
  rule(idx(L, i2, dn), m.r, idx(R, i2, dn), -m.t, idx(L, i1, dn));
  // uncoupled
  rule(idx(R, i1, up), -m.t0, idx(R, i2, up), m.r0, idx(L, i1, up));
  rule(idx(L, i2, up), -m.t0, idx(L, i1, up), m.r0, idx(R, i2, up));
  rule(idx(R, i2, dn), -m.t0, idx(R, i1, dn), m.r0, idx(L, i2, dn));
  rule(idx(L, i1, dn), -m.t0, idx(L, i2, dn), m.r0, idx(R, i1, dn));
  return o;
}

bool is_physical(const ScatterMatrix& m) {
  if (!m.allFinite()) return false;
  Eigen::JacobiSVD<ScatterMatrix> svd(m);
  return svd.singularValues().maxCoeff() <= 1.0 + 1e-10;
}

}  // namespace hyperqd
