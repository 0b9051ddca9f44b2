#include "hyperqd/reference.hpp"

#include <cmath>

namespace hyperqd::reference {
namespace {

const double h = 1.0 / std::sqrt(2.0);

using A2 = std::array<double, 2>;

A2 hadamard(const A2& v) { return {h * (v[0] + v[1]), h * (v[0] - v[1])}; }

// index of (pa, ra, pb, rb, s1, s2); s2 only used with two spins
int at(int pa, int ra, int pb, int rb, int s1, int s2 = 0) {
  return pa + 2 * ra + 4 * (pb + 2 * rb) + 16 * s1 + 32 * s2;
}

double sgn(int bit) { return bit ? -1.0 : 1.0; }

template <class F>
Eigen::VectorXcd fill(int dim, int spins, F f) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
  for (int pa = 0; pa < 2; ++pa)
    for (int ra = 0; ra < 2; ++ra)
      for (int pb = 0; pb < 2; ++pb)
        for (int rb = 0; rb < 2; ++rb)
          for (int s1 = 0; s1 < 2; ++s1)
            for (int s2 = 0; s2 < (spins == 2 ? 2 : 1); ++s2)
              v[at(pa, ra, pb, rb, s1, s2)] = f(pa, ra, pb, rb, s1, s2);
  return v;
}

}  // namespace

// -(1/√2)[↑(γ'2 a1 + γ'1 a2) − ↓(γ'1 a1 + γ'2 a2)] α_a (β, δ)_b
Eigen::VectorXcd spatial_after_control_block(const TestCoefficients& c) {
  const A2 gp = hadamard(c.gamma);
  return fill(32, 1, [&](int pa, int ra, int pb, int rb, int s, int) {
    const double rail = s == 0 ? gp[1 - ra] : -gp[ra];
    return -h * rail * c.alpha[pa] * c.beta[pb] * c.delta[rb];
  });
}

// ½[−↑(γ'1−γ'2)(a1−a2)(δ1 b2+δ2 b1) + ↓(γ'1+γ'2)(a1+a2)(δ1 b1+δ2 b2)] αβ
Eigen::VectorXcd spatial_after_target_block(const TestCoefficients& c) {
  const A2 gp = hadamard(c.gamma);
  return fill(32, 1, [&](int pa, int ra, int pb, int rb, int s, int) {
    const double rail = s == 0 ? -(gp[0] - gp[1]) * sgn(ra) * c.delta[1 - rb]
                               : (gp[0] + gp[1]) * c.delta[rb];
    return 0.5 * rail * c.alpha[pa] * c.beta[pb];
  });
}

// (1/√2)[↑(A − B) − ↓(A + B)] αβ, A = γ1 a1(δ1 b1+δ2 b2), B = γ2 a2(δ1 b2+δ2 b1)
Eigen::VectorXcd spatial_pre_measure(const TestCoefficients& c) {
  return fill(32, 1, [&](int pa, int ra, int pb, int rb, int s, int) {
    const double A = ra == 0 ? c.gamma[0] * c.delta[rb] : 0.0;
    const double B = ra == 1 ? c.gamma[1] * c.delta[1 - rb] : 0.0;
    const double rail = s == 0 ? A - B : -(A + B);
    return h * rail * c.alpha[pa] * c.beta[pb];
  });
}

Eigen::VectorXcd spatial_output(const TestCoefficients& c) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(16);
  for (int pa = 0; pa < 2; ++pa)
    for (int ra = 0; ra < 2; ++ra)
      for (int pb = 0; pb < 2; ++pb)
        for (int rb = 0; rb < 2; ++rb)
          v[at(pa, ra, pb, rb, 0)] = c.alpha[pa] * c.beta[pb] * c.gamma[ra] *
                                     c.delta[ra == 0 ? rb : 1 - rb];
  return v;
}

// (1/√2)[γ'1(↑(α'2R+α'1L) + ↓(α'1R+α'2L))a2 + γ'2(↑(α'1R+α'2L) + ↓(α'2R+α'1L))a1]
// with e2 still (↑+↓)/√2 and b untouched
Eigen::VectorXcd hyper_after_pol_block(const TestCoefficients& c) {
  const A2 ap = hadamard(c.alpha), gp = hadamard(c.gamma);
  return fill(64, 2, [&](int pa, int ra, int pb, int rb, int s1, int) {
    const double a = ra == 1 ? gp[0] * (s1 == 0 ? ap[1 - pa] : ap[pa])
                             : gp[1] * (s1 == 0 ? ap[pa] : ap[1 - pa]);
    return h * h * a * c.beta[pb] * c.delta[rb];
  });
}

// ½[↑1(α'1R+α'2L) + ↓1(α'2R+α'1L)][↑2(γ'2 a1+γ'1 a2) − ↓2(γ'1 a1+γ'2 a2)] (β,δ)_b
Eigen::VectorXcd hyper_after_mode_block(const TestCoefficients& c) {
  const A2 ap = hadamard(c.alpha), gp = hadamard(c.gamma);
  return fill(64, 2, [&](int pa, int ra, int pb, int rb, int s1, int s2) {
    const double pol = s1 == 0 ? ap[pa] : ap[1 - pa];
    const double rail = s2 == 0 ? gp[1 - ra] : -gp[ra];
    return 0.5 * pol * rail * c.beta[pb] * c.delta[rb];
  });
}

// ½[↑1 α1(R+L)_a(β1R+β2L)_b + ↓1 α2(R−L)_a(β2R+β1L)_b]
//  ⊗[−↑2 γ2(a1−a2)(δ2 b1+δ1 b2) + ↓2 γ1(a1+a2)(δ1 b1+δ2 b2)]
Eigen::VectorXcd hyper_after_target_blocks(const TestCoefficients& c) {
  return fill(64, 2, [&](int pa, int ra, int pb, int rb, int s1, int s2) {
    const double pol = s1 == 0 ? c.alpha[0] * c.beta[pb]
                               : c.alpha[1] * sgn(pa) * c.beta[1 - pb];
    const double rail = s2 == 0 ? -c.gamma[1] * sgn(ra) * c.delta[1 - rb]
                                : c.gamma[0] * c.delta[rb];
    return 0.5 * pol * rail;
  });
}

// ½[↑1(X1+X2) + ↓1(X1−X2)][↑2(Y1−Y2) − ↓2(Y1+Y2)],
// X1 = α1 R_a(β1R+β2L)_b, X2 = α2 L_a(β2R+β1L)_b,
// Y1 = γ1 a1(δ1 b1+δ2 b2), Y2 = γ2 a2(δ2 b1+δ1 b2)
Eigen::VectorXcd hyper_pre_measure(const TestCoefficients& c) {
  return fill(64, 2, [&](int pa, int ra, int pb, int rb, int s1, int s2) {
    const double X = pa == 0 ? c.alpha[0] * c.beta[pb] : c.alpha[1] * c.beta[1 - pb];
    const double Y = ra == 0 ? c.gamma[0] * c.delta[rb] : c.gamma[1] * c.delta[1 - rb];
    const double pol = (s1 == 1 && pa == 1) ? -X : X;
    const double rail = s2 == 0 ? sgn(ra) * Y : -Y;
    return 0.5 * pol * rail;
  });
}

Eigen::VectorXcd hyper_output(const TestCoefficients& c) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(16);
  for (int pa = 0; pa < 2; ++pa)
    for (int ra = 0; ra < 2; ++ra)
      for (int pb = 0; pb < 2; ++pb)
        for (int rb = 0; rb < 2; ++rb)
          v[at(pa, ra, pb, rb, 0)] = c.alpha[pa] * c.beta[pa == 0 ? pb : 1 - pb] *
                                     c.gamma[ra] * c.delta[ra == 0 ? rb : 1 - rb];
  return v;
}

}  // namespace hyperqd::reference
