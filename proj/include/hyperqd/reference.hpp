#pragma once

// Hand-expanded gate states for product inputs, written directly against
// the amplitude index (photon a digit fastest, then b, then the spins).
// These do not use the circuit machinery and serve as regression oracles.

#include <Eigen/Dense>
#include <array>

namespace hyperqd::reference {

struct TestCoefficients {
  std::array<double, 2> alpha{0.6, 0.8};   // a polarization (R, L)
  std::array<double, 2> beta{0.8, -0.6};   // b polarization
  std::array<double, 2> gamma{0.70710678118654752, 0.70710678118654752};  // a rails
  std::array<double, 2> delta{0.28, 0.96}; // b rails
};

// Spatial CNOT; layout (a, b, e), dimension 32.
Eigen::VectorXcd spatial_after_control_block(const TestCoefficients& c);
Eigen::VectorXcd spatial_after_target_block(const TestCoefficients& c);
Eigen::VectorXcd spatial_pre_measure(const TestCoefficients& c);
/// Ideal two-photon output, layout (a, b), dimension 16.
Eigen::VectorXcd spatial_output(const TestCoefficients& c);

// Hyper CNOT; layout (a, b, e1, e2), dimension 64.
Eigen::VectorXcd hyper_after_pol_block(const TestCoefficients& c);
Eigen::VectorXcd hyper_after_mode_block(const TestCoefficients& c);
Eigen::VectorXcd hyper_after_target_blocks(const TestCoefficients& c);
Eigen::VectorXcd hyper_pre_measure(const TestCoefficients& c);
Eigen::VectorXcd hyper_output(const TestCoefficients& c);

}  // namespace hyperqd::reference
