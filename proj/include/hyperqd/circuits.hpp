#pragma once

// Linear-optical elements, QD scatterers and spin operations, a branch
// enumerating executor, and the two gate protocols built from them.

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "hyperqd/scattering.hpp"
#include "hyperqd/state.hpp"

namespace hyperqd {

// ---------------------------------------------------------------- elements

/// Hadamard mix of two rails: a_i -> (a_i + a_j)/sqrt2, a_j -> (a_i - a_j)/sqrt2.
struct BeamSplitter {
  std::string photon;
  int rail_i = 0;
  int rail_j = 1;
};
/// Circular polarizing beam splitter: R keeps its rail, L swaps rail_i <-> rail_j.
struct Cpbs {
  std::string photon;
  int rail_i = 0;
  int rail_j = 1;
};
/// Half-wave plate |R><L| + |L><R| on one rail.
struct PlateX {
  std::string photon;
  int rail = 0;
};
/// -|R><R| + |L><L| on one rail.
struct PlateZ {
  std::string photon;
  int rail = 0;
};
/// -|R><R| - |L><L| on one rail.
struct PlateU {
  std::string photon;
  int rail = 0;
};
/// Polarization Hadamard on every rail of a photon.
struct PolHadamard {
  std::string photon;
};
/// One scattering off the cavity of `spin`; port i1 is fed by port1_rail.
struct QdScatter {
  std::string photon;
  int port1_rail = 0;
  int port2_rail = 1;
  std::string spin;
  ScatterMode mode = ScatterMode::ideal();
};
struct SpinHadamard {
  std::string spin;
};
/// Z on a spin (phase flip of the down component).
struct SpinPhaseFlip {
  std::string spin;
};

enum class MeasureMethod { Direct, AuxPhoton };

/// Direct: projective readout, spin removed. AuxPhoton: a probe |R, i1> is
/// scattered off the spin's cavity (with `aux_mode`) and detected; the
/// detector that fires is the reading (i2 -> up, i1 -> down).
struct MeasureSpin {
  std::string spin;
  MeasureMethod method = MeasureMethod::Direct;
  ScatterMode aux_mode = ScatterMode::ideal();
};
/// -1 on polarization `pol` of a photon when `spin` read `when`.
struct CondPolSign {
  std::string photon;
  Pol pol = Pol::L;
  std::string spin;
  Spin when = Spin::Down;
};
/// -1 on rail `rail` of a photon when `spin` read `when`.
struct CondRailSign {
  std::string photon;
  int rail = 1;
  std::string spin;
  Spin when = Spin::Up;
};
/// Snapshot marker; the executor records the (single-branch) state here.
struct Stage {
  std::string label;
};

using CircuitElement =
    std::variant<BeamSplitter, Cpbs, PlateX, PlateZ, PlateU, PolHadamard,
                 QdScatter, SpinHadamard, SpinPhaseFlip, MeasureSpin,
                 CondPolSign, CondRailSign, Stage>;
using Circuit = std::vector<CircuitElement>;

std::string describe(const CircuitElement& e);

/// Applies one unitary or scattering element in place. Measurements,
/// conditional signs and stages are rejected with ValidationError.
void apply_element(StateVector& state, const CircuitElement& e);

// ---------------------------------------------------------------- execution

struct Outcome {
  std::string spin;
  Spin value = Spin::Up;
  double probability = 0.0;  // conditional on the preceding outcomes
};

struct Branch {
  StateVector state;  // unnormalized; squared norm = joint weight
  std::vector<Outcome> outcomes;
  std::vector<std::string> corrections;
};

struct ExecOptions {
  std::ostream* trace = nullptr;      // one line per element
  SeededSampler* sampler = nullptr;   // null: enumerate every branch
};

struct ExecResult {
  std::vector<Branch> branches;
  std::vector<std::pair<std::string, StateVector>> stages;
};

/// Runs `c` on `input`. At the end every spin still present is split into
/// its basis values (incoherently), so branch states hold photons only.
ExecResult execute(const Circuit& c, const StateVector& input,
                   const ExecOptions& opts = {});

// ---------------------------------------------------------------- blocks

enum class BlockKind { Spatial, Polarization, Mode2 };

const char* to_string(BlockKind k);

/// Element sequence of one block on `photon` (rails 0 and 1) and `spin`.
/// The wiring is checked once against its ideal-limit contract; a mismatch
/// throws ConfigurationError.
Circuit block_circuit(BlockKind kind, const std::string& photon,
                      const std::string& spin, const ScatterMode& mode);

/// Block as an 8x8 matrix on pol + 2*rail + 4*spin.
Eigen::MatrixXcd block_operator(BlockKind kind, const ScatterMode& mode);

/// Ideal-limit map each block must realize.
///  Spatial:      up -> swap rails, times -1; down -> identity.
///  Polarization: rails swapped; pol flipped iff (up, a1) or (down, a2).
///  Mode2:        pol flipped iff a2; then up -> identity, down -> -swap.
Eigen::MatrixXcd block_contract(BlockKind kind);

StateVector block_spatial(StateVector s, const std::string& photon,
                          const std::string& spin, const ScatterMode& mode);
StateVector block_pol(StateVector s, const std::string& photon,
                      const std::string& spin, const ScatterMode& mode);
StateVector block_mode2(StateVector s, const std::string& photon,
                        const std::string& spin, const ScatterMode& mode);

// ---------------------------------------------------------------- gates

struct GateOptions {
  ScatterMode mode = ScatterMode::ideal();
  MeasureMethod measure = MeasureMethod::Direct;
  std::ostream* trace = nullptr;
  SeededSampler* sampler = nullptr;
};

struct GateBranch {
  StateVector final_state;  // photons only, normalized
  double weight = 0.0;      // unnormalized squared norm
  double probability = 0.0; // weight / survival
  std::vector<Outcome> outcomes;
  std::vector<std::string> corrections;
};

struct GateResult {
  double survival = 0.0;  // total photon squared norm over branches
  std::vector<GateBranch> branches;
  std::vector<std::pair<std::string, StateVector>> stages;

  const StateVector* stage(std::string_view label) const;
};

/// Stage labels recorded by the gates.
inline constexpr const char* kStageControlBlock = "control-block";
inline constexpr const char* kStageTargetBlock = "target-block";
inline constexpr const char* kStagePolBlock = "pol-block";
inline constexpr const char* kStageModeBlock = "mode-block";
inline constexpr const char* kStageTargetBlocks = "target-blocks";
inline constexpr const char* kStagePreMeasure = "pre-measure";

/// Photons "a" and "b" (2 rails each) and spin "e".
Circuit spatial_cnot_circuit(const ScatterMode& mode,
                             MeasureMethod measure = MeasureMethod::Direct);
/// Photons "a" and "b" and spins "e1" (polarization) and "e2" (rails).
Circuit hyper_cnot_circuit(const ScatterMode& mode,
                           MeasureMethod measure = MeasureMethod::Direct);

GateResult spatial_cnot(const PhotonSpec& a, const PhotonSpec& b,
                        const SpinSpec& e, const GateOptions& opts = {});
GateResult hyper_cnot(const PhotonSpec& a, const PhotonSpec& b,
                      const SpinSpec& e1 = SpinSpec::plus(),
                      const SpinSpec& e2 = SpinSpec::plus(),
                      const GateOptions& opts = {});

GateResult run_gate(const Circuit& c, const StateVector& input,
                    const GateOptions& opts);

// ---------------------------------------------------------------- spin tools

struct AuxReading {
  Spin reading = Spin::Up;  // i2 click -> up, i1 click -> down
  Pol aux_pol = Pol::R;
  double probability = 0.0;
  StateVector post_state;  // aux removed, spin kept, normalized
};

/// Appends photon "aux" in |R, i1> and scatters it off the spin's cavity
/// (ports i1 = rail 0, i2 = rail 1). Detection has not happened yet.
StateVector aux_photon_scatter(const StateVector& state, const std::string& spin,
                               const ScatterMode& mode = ScatterMode::ideal());

/// Every detector/polarization outcome with nonzero probability.
std::vector<AuxReading> measure_spin_via_aux_photon_branches(
    const StateVector& state, const std::string& spin,
    const ScatterMode& mode = ScatterMode::ideal());

/// Single stochastic readout.
AuxReading measure_spin_via_aux_photon(const StateVector& state,
                                       const std::string& spin,
                                       const ScatterMode& mode,
                                       SeededSampler& sampler);

/// Appends the probe (R+L)/sqrt2 on rail i1 as photon "probe" and runs it
/// through CPBS, the spin's cavity (ports reversed) and CPBS again.
StateVector spin_echo_composite(const StateVector& state,
                                const std::string& spin);

/// spin_echo_composite followed by projecting the probe onto (R+L)/sqrt2 on
/// rail i2 and removing it. In the ideal limit this is Z on the spin.
StateVector spin_echo_pulse(const StateVector& state, const std::string& spin);

}  // namespace hyperqd
