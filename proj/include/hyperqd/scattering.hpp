#pragma once

// One photon (polarization x two cavity ports) meeting one QD spin.
// Local basis index: pol + 2*port + 4*spin, R=0/L=1, i1=0/i2=1, up=0/down=1.

#include <Eigen/Dense>

#include "hyperqd/cavity.hpp"

namespace hyperqd {

using ScatterMatrix = Eigen::Matrix<double, 8, 8>;

class ScatterMode {
 public:
  /// Signed permutation limit, magnitudes (1, 0, 0, 1).
  static ScatterMode ideal();
  /// Throws ValidationError unless every magnitude lies in [0, 1].
  static ScatterMode lossy(const Magnitudes& m);
  /// Resonant coefficients reduced to magnitudes.
  static ScatterMode from_coeffs(const ScatterCoeffs& c);

  bool is_ideal() const { return ideal_; }
  const Magnitudes& magnitudes() const { return mag_; }

 private:
  ScatterMode(bool ideal, Magnitudes m) : ideal_(ideal), mag_(m) {}
  bool ideal_ = true;
  Magnitudes mag_{};
};

/// Column j is the image of local basis state j under the signed
/// reflection/transmission rules.
ScatterMatrix scatter_operator(const ScatterMode& mode);

/// Contraction test: every singular value <= 1 + 1e-10.
bool is_physical(const ScatterMatrix& m);

}  // namespace hyperqd
